#include "czlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace czlab {

namespace {

struct ScanResult {
    double value = -std::numeric_limits<double>::infinity();
    GridCube witness{{0, 0}, 1};
};

std::vector<long double> prefix_1d(const std::vector<double>& v) {
    std::vector<long double> p(v.size() + 1, 0.0L);
    for (std::size_t i = 0; i < v.size(); ++i) p[i + 1] = p[i] + v[i];
    return p;
}

std::vector<long double> prefix_2d(const std::vector<double>& v, int n) {
    std::vector<long double> p(static_cast<std::size_t>(n + 1) * (n + 1), 0.0L);
    auto at = [n](std::vector<long double>& q, int x, int y) -> long double& {
        return q[static_cast<std::size_t>(y) * (n + 1) + x];
    };
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x)
            at(p, x + 1, y + 1) = static_cast<long double>(v[static_cast<std::size_t>(y) * n + x]) +
                                  at(p, x, y + 1) + at(p, x + 1, y) - at(p, x, y);
    return p;
}

long double rect_sum(const std::vector<long double>& p, int n, int x, int y, int len) {
    auto at = [n, &p](int xx, int yy) {
        return p[static_cast<std::size_t>(yy) * (n + 1) + xx];
    };
    return at(x + len, y + len) - at(x, y + len) - at(x + len, y) + at(x, y);
}

// Sup of combine(avgs, infs) over the family. Averages are against Lebesgue
// cell measure; infima use the plain cell minimum.
template <typename Combine>
ScanResult scan_family_sup(const FamilySpec& spec, const Grid& g,
                           const std::vector<const std::vector<double>*>& avg_arrays,
                           const std::vector<const std::vector<double>*>& inf_arrays,
                           Combine&& combine) {
    const int n = g.cells_per_axis();
    const std::size_t ka = avg_arrays.size(), ki = inf_arrays.size();
    ScanResult best;

    if (spec.kind == FamilyKind::Exhaustive1D) {
        std::vector<std::vector<long double>> pre(ka);
        for (std::size_t j = 0; j < ka; ++j) pre[j] = prefix_1d(*avg_arrays[j]);
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            ScanResult local;
            std::vector<std::vector<double>> mins(ki);
            std::vector<double> avgs(ka), infs(ki);
#ifdef _OPENMP
#pragma omp for schedule(dynamic, 8) nowait
#endif
            for (int len = 1; len <= n; ++len) {
                for (std::size_t j = 0; j < ki; ++j) sliding_min(*inf_arrays[j], len, mins[j]);
                for (int x = 0; x + len <= n; ++x) {
                    for (std::size_t j = 0; j < ka; ++j)
                        avgs[j] = static_cast<double>((pre[j][x + len] - pre[j][x]) / len);
                    for (std::size_t j = 0; j < ki; ++j) infs[j] = mins[j][x];
                    double v = combine(avgs.data(), infs.data());
                    if (v > local.value) local = {v, GridCube{{x, 0}, len}};
                }
            }
#ifdef _OPENMP
#pragma omp critical
#endif
            if (local.value > best.value) best = local;
        }
        return best;
    }

    if (spec.kind == FamilyKind::AllSquares2D) {
        std::vector<std::vector<long double>> pre(ka);
        for (std::size_t j = 0; j < ka; ++j) pre[j] = prefix_2d(*avg_arrays[j], n);
#ifdef _OPENMP
#pragma omp parallel
#endif
        {
            ScanResult local;
            std::vector<std::vector<double>> mins(ki);
            std::vector<double> avgs(ka), infs(ki);
#ifdef _OPENMP
#pragma omp for schedule(dynamic) nowait
#endif
            for (int len = 1; len <= n; ++len) {
                for (std::size_t j = 0; j < ki; ++j)
                    window_min_2d(*inf_arrays[j], n, len, mins[j]);
                int m = n - len + 1;
                for (int y = 0; y < m; ++y)
                    for (int x = 0; x < m; ++x) {
                        for (std::size_t j = 0; j < ka; ++j)
                            avgs[j] = static_cast<double>(
                                rect_sum(pre[j], n, x, y, len) /
                                (static_cast<long double>(len) * len));
                        for (std::size_t j = 0; j < ki; ++j)
                            infs[j] = mins[j][static_cast<std::size_t>(y) * m + x];
                        double v = combine(avgs.data(), infs.data());
                        if (v > local.value) local = {v, GridCube{{x, y}, len}};
                    }
            }
#ifdef _OPENMP
#pragma omp critical
#endif
            if (local.value > best.value) best = local;
        }
        return best;
    }

    // Dyadic families: enumerate cubes, sums via prefix tables, infima by
    // direct cell loops (total work O(N^dim log N)).
    std::vector<std::vector<long double>> pre(ka);
    for (std::size_t j = 0; j < ka; ++j)
        pre[j] = g.dim() == 1 ? prefix_1d(*avg_arrays[j]) : prefix_2d(*avg_arrays[j], n);
    std::vector<double> avgs(ka), infs(ki);
    for_each_cube(spec, g, [&](const GridCube& q) {
        long double cells = static_cast<long double>(q.len);
        if (g.dim() == 2) cells *= q.len;
        for (std::size_t j = 0; j < ka; ++j) {
            long double s = g.dim() == 1
                                ? pre[j][q.lo[0] + q.len] - pre[j][q.lo[0]]
                                : rect_sum(pre[j], n, q.lo[0], q.lo[1], q.len);
            avgs[j] = static_cast<double>(s / cells);
        }
        for (std::size_t j = 0; j < ki; ++j) {
            double m = std::numeric_limits<double>::infinity();
            const auto& arr = *inf_arrays[j];
            for (int dy = 0; dy < (g.dim() == 2 ? q.len : 1); ++dy)
                for (int dx = 0; dx < q.len; ++dx)
                    m = std::min(m, arr[g.flat_index(q.lo[0] + dx,
                                                     g.dim() == 2 ? q.lo[1] + dy : 0)]);
            infs[j] = m;
        }
        double v = combine(avgs.data(), infs.data());
        if (v > best.value) best = {v, q};
    });
    return best;
}

std::vector<double> pow_array(const std::vector<double>& v, double e) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::pow(v[i], e);
    return out;
}

} // namespace

Weight::Weight(GridFunction d, std::optional<PowerForm> form)
    : density(std::move(d)), analytic_form(form) {
    for (double v : density.values)
        if (!(v > 0.0)) throw std::invalid_argument("weight must be strictly positive");
}

Weight power_weight(const Grid& g, double exponent, std::array<double, 2> center) {
    if (exponent < 0.0 || exponent >= 1.0)
        throw std::invalid_argument("power weight exponent must lie in [0, 1)");
    double h = g.cell_width();
    // Snap the singularity to a cell boundary so no sample meets it.
    std::array<double, 2> c = center;
    for (int axis = 0; axis < g.dim(); ++axis)
        c[axis] = -g.half_width() + std::round((center[axis] + g.half_width()) / h) * h;
    GridFunction d = sample_function(g, [&](double x, double y) {
        double r = g.dim() == 1 ? std::fabs(x - c[0]) : std::hypot(x - c[0], y - c[1]);
        return std::pow(r, -exponent);
    });
    return Weight(std::move(d), PowerForm{exponent, c});
}

Weight constant_weight(const Grid& g, double value) {
    if (!(value > 0.0)) throw std::invalid_argument("constant weight must be positive");
    return Weight(GridFunction(g, value));
}

WeightVector::WeightVector(std::vector<Weight> w, std::vector<double> p)
    : weights(std::move(w)), exponents(std::move(p)) {
    if (weights.empty()) throw std::invalid_argument("weight vector must be nonempty");
    if (weights.size() != exponents.size())
        throw std::invalid_argument("weight vector and exponent vector sizes differ");
    for (double pi : exponents)
        if (!(pi >= 1.0) || std::isinf(pi))
            throw std::invalid_argument("exponents must satisfy 1 <= p_i < infinity");
    for (const auto& wi : weights)
        if (!(wi.grid() == weights.front().grid()))
            throw std::invalid_argument("weights must share a grid");
}

double WeightVector::p() const {
    double inv = 0.0;
    for (double pi : exponents) inv += 1.0 / pi;
    return 1.0 / inv;
}

std::string CharacteristicReport::to_json() const {
    nlohmann::json j;
    j["value"] = value;
    j["witness_center"] = witness.dim == 1 ? nlohmann::json{witness.center[0]}
                                           : nlohmann::json{witness.center[0], witness.center[1]};
    j["witness_side"] = witness.side;
    j["family"] = family;
    j["family_size"] = family_size;
    return j.dump();
}

CharacteristicReport ap_characteristic(const Weight& w, double p, const FamilySpec& family) {
    if (!(p >= 1.0)) throw std::invalid_argument("A_p characteristic requires p >= 1");
    const Grid& g = w.grid();
    ScanResult r;
    if (p == 1.0) {
        r = scan_family_sup(family, g, {&w.density.values}, {&w.density.values},
                            [](const double* a, const double* i) { return a[0] / i[0]; });
    } else {
        std::vector<double> dual = pow_array(w.density.values, 1.0 - p / (p - 1.0));
        double pm1 = p - 1.0;
        r = scan_family_sup(family, g, {&w.density.values, &dual}, {},
                            [pm1](const double* a, const double*) {
                                return a[0] * std::pow(a[1], pm1);
                            });
    }
    CharacteristicReport rep;
    rep.value = r.value;
    rep.witness = r.witness.to_cube(g);
    rep.family = family_name(family);
    rep.family_size = family_size(family, g);
    return rep;
}

std::pair<double, double> power_of_weight_check(const Weight& w, double gamma,
                                                const FamilySpec& family) {
    if (gamma < 0.0 || gamma > 1.0)
        throw std::invalid_argument("power_of_weight_check requires gamma in [0, 1]");
    Weight wg(GridFunction(w.grid(), pow_array(w.density.values, gamma)));
    double lhs = ap_characteristic(wg, 1.0, family).value;
    double rhs = std::pow(ap_characteristic(w, 1.0, family).value, gamma);
    return {lhs, rhs};
}

Weight nu_w(const WeightVector& v) {
    const Grid& g = v.grid();
    double p = v.p();
    GridFunction d(g, 1.0);
    for (int i = 0; i < v.m(); ++i) {
        double e = p / v.exponents[i];
        for (std::size_t c = 0; c < d.values.size(); ++c)
            d.values[c] *= std::pow(v.weights[i].density.values[c], e);
    }
    return Weight(std::move(d));
}

CharacteristicReport multilinear_characteristic(const WeightVector& v, const FamilySpec& family) {
    const Grid& g = v.grid();
    double p = v.p();
    Weight nu = nu_w(v);

    std::vector<std::vector<double>> duals;
    std::vector<const std::vector<double>*> avg_arrays{&nu.density.values};
    std::vector<const std::vector<double>*> inf_arrays;
    std::vector<double> dual_exp;  // 1/p_i' for the averaged factors
    for (int i = 0; i < v.m(); ++i) {
        double pi = v.exponents[i];
        if (pi == 1.0) {
            inf_arrays.push_back(&v.weights[i].density.values);
        } else {
            duals.push_back(pow_array(v.weights[i].density.values, 1.0 - pi / (pi - 1.0)));
            dual_exp.push_back(1.0 - 1.0 / pi);
        }
    }
    for (const auto& d : duals) avg_arrays.push_back(&d);

    double inv_p = 1.0 / p;
    std::size_t n_dual = duals.size(), n_inf = inf_arrays.size();
    ScanResult r = scan_family_sup(
        family, g, avg_arrays, inf_arrays,
        [inv_p, n_dual, n_inf, &dual_exp](const double* a, const double* i) {
            double val = std::pow(a[0], inv_p);
            for (std::size_t j = 0; j < n_dual; ++j) val *= std::pow(a[1 + j], dual_exp[j]);
            for (std::size_t j = 0; j < n_inf; ++j) val /= i[j];
            return val;
        });

    CharacteristicReport rep;
    rep.value = r.value;
    rep.witness = r.witness.to_cube(g);
    rep.family = family_name(family);
    rep.family_size = family_size(family, g);
    return rep;
}

Remark2Report remark2_check(const WeightVector& v, const FamilySpec& family) {
    Remark2Report rep;
    const double p = v.p();
    const int m = v.m();
    rep.multilinear = multilinear_characteristic(v, family).value;
    Weight nu = nu_w(v);
    rep.nu_amp = ap_characteristic(nu, m * p, family).value;
    rep.residual_nu = std::pow(rep.multilinear, p) - rep.nu_amp;

    double reverse = std::pow(rep.nu_amp, 1.0 / p);
    for (int i = 0; i < m; ++i) {
        double pi = v.exponents[i];
        double comp, residual, reverse_factor;
        if (pi == 1.0) {
            Weight root(GridFunction(v.grid(),
                                     pow_array(v.weights[i].density.values, 1.0 / m)));
            comp = ap_characteristic(root, 1.0, family).value;
            residual = std::pow(rep.multilinear, 1.0 / m) - comp;
            reverse_factor = std::pow(comp, static_cast<double>(m));
        } else {
            double pip = pi / (pi - 1.0);
            Weight dual(GridFunction(v.grid(),
                                     pow_array(v.weights[i].density.values, 1.0 - pip)));
            comp = ap_characteristic(dual, m * pip, family).value;
            residual = std::pow(rep.multilinear, pip) - comp;
            reverse_factor = std::pow(comp, 1.0 / pip);
        }
        rep.component.push_back(comp);
        rep.residual_component.push_back(residual);
        reverse *= reverse_factor;
    }
    rep.residual_reverse = reverse - rep.multilinear;

    rep.min_residual = std::min(rep.residual_nu, rep.residual_reverse);
    for (double r : rep.residual_component) rep.min_residual = std::min(rep.min_residual, r);
    return rep;
}

std::string Remark2Report::to_json() const {
    nlohmann::json j;
    j["multilinear"] = multilinear;
    j["nu_amp"] = nu_amp;
    j["component"] = component;
    j["residual_nu"] = residual_nu;
    j["residual_component"] = residual_component;
    j["residual_reverse"] = residual_reverse;
    j["min_residual"] = min_residual;
    return j.dump();
}

} // namespace czlab
