#include "czlab/operators.hpp"

#include "czlab/families.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace czlab {

namespace {

double dist_n(const double* a, const double* b, int n) {
    return n == 1 ? std::fabs(a[0] - b[0]) : std::hypot(a[0] - b[0], a[1] - b[1]);
}

[[noreturn]] void report_bad_eval(const KernelSpec& k, const double* x, const double* y) {
    std::ostringstream os;
    os << "kernel '" << k.name << "' returned a non-finite value at x=(";
    for (int a = 0; a < k.n; ++a) os << (a ? "," : "") << x[a];
    os << ")";
    for (int i = 0; i < k.m; ++i) {
        os << " y" << i + 1 << "=(";
        for (int a = 0; a < k.n; ++a) os << (a ? "," : "") << y[i * k.n + a];
        os << ")";
    }
    throw std::runtime_error(os.str());
}

double eval_checked(const KernelSpec& k, const double* x, const double* y) {
    double v = k.eval(x, y);
    if (!std::isfinite(v)) report_bad_eval(k, x, y);
    return v;
}

struct TupleSampler {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> unit{0.0, 1.0};
    double log_rmin, log_rmax;
    int n;

    TupleSampler(std::uint64_t seed, double r_min, double r_max, int n)
        : rng(seed), log_rmin(std::log(r_min)), log_rmax(std::log(r_max)), n(n) {}

    double radius() { return std::exp(log_rmin + (log_rmax - log_rmin) * unit(rng)); }

    void direction(double* d) {
        if (n == 1) {
            d[0] = unit(rng) < 0.5 ? -1.0 : 1.0;
            return;
        }
        double a = 2.0 * M_PI * unit(rng);
        d[0] = std::cos(a);
        d[1] = std::sin(a);
    }

    // x in a box of scale r_max, each y_i at a log-uniform radius from x.
    void tuple(double* x, double* y, int m) {
        for (int a = 0; a < n; ++a) x[a] = (2.0 * unit(rng) - 1.0) * std::exp(log_rmax);
        for (int i = 0; i < m; ++i) {
            double d[2];
            direction(d);
            double r = radius();
            for (int a = 0; a < n; ++a) y[i * n + a] = x[a] + r * d[a];
        }
    }
};

} // namespace

KernelSpec make_kernel(const std::string& name) {
    KernelSpec k;
    k.name = name;
    k.delta = 1.0;
    if (name == "hilbert") {
        k.m = 1;
        k.n = 1;
        k.eval = [](const double* x, const double* y) { return 1.0 / (x[0] - y[0]); };
        return k;
    }
    if (name == "riesz2") {
        k.m = 2;
        k.n = 1;
        k.eval = [](const double* x, const double* y) {
            double d1 = x[0] - y[0], d2 = x[0] - y[1];
            double s = d1 * d1 + d2 * d2;
            return d1 / (s * std::sqrt(s));
        };
        return k;
    }
    if (name == "riesz3") {
        k.m = 3;
        k.n = 1;
        k.eval = [](const double* x, const double* y) {
            double d1 = x[0] - y[0], d2 = x[0] - y[1], d3 = x[0] - y[2];
            double s = d1 * d1 + d2 * d2 + d3 * d3;
            return d1 / (s * s);
        };
        return k;
    }
    if (name == "riesz2_2d") {
        k.m = 2;
        k.n = 2;
        k.eval = [](const double* x, const double* y) {
            double ax = x[0] - y[0], ay = x[1] - y[1];
            double bx = x[0] - y[2], by = x[1] - y[3];
            double s = ax * ax + ay * ay + bx * bx + by * by;
            return ax / (s * s * std::sqrt(s));
        };
        return k;
    }
    throw std::invalid_argument("unknown kernel: " + name);
}

std::vector<std::string> kernel_catalog() {
    return {"hilbert", "riesz2", "riesz3", "riesz2_2d"};
}

ConditionReport check_size(const KernelSpec& k, std::size_t samples, std::uint64_t seed,
                           double r_min, double r_max) {
    if (samples < 1) throw std::invalid_argument("check_size requires samples >= 1");
    TupleSampler s(seed, r_min, r_max, k.n);
    double x[2], y[6];
    double best = 0.0;
    const int nm = k.n * k.m;
    for (std::size_t it = 0; it < samples; ++it) {
        s.tuple(x, y, k.m);
        double sum = 0.0;
        for (int i = 0; i < k.m; ++i) sum += dist_n(x, y + i * k.n, k.n);
        if (sum == 0.0) continue;
        double v = eval_checked(k, x, y);
        best = std::max(best, std::fabs(v) * std::pow(sum, nm));
    }
    return {"size", best, samples, seed};
}

ConditionReport check_smoothness(const KernelSpec& k, std::size_t samples, std::uint64_t seed,
                                 double r_min, double r_max) {
    if (samples < 1) throw std::invalid_argument("check_smoothness requires samples >= 1");
    TupleSampler s(seed, r_min, r_max, k.n);
    std::uniform_int_distribution<int> pick(0, k.m - 1);
    double x[2], y[6], xs[2], ys[6];
    double best = 0.0;
    const double power = k.n * k.m + k.delta;
    // The ratio is scale invariant, so the sup lives on a compact set of
    // shapes. Stratify: comparable radii half the time, and a fixed ladder
    // of shift fractions of the admissible 1/2 max |x - y_i|.
    const double fractions[4] = {0.999, 0.5, 0.1, 0.01};
    for (std::size_t it = 0; it < samples; ++it) {
        if (it % 2 == 0) {
            for (int a = 0; a < k.n; ++a) x[a] = 0.0;
            double r = s.radius();
            for (int i = 0; i < k.m; ++i) {
                double d[2];
                s.direction(d);
                for (int a = 0; a < k.n; ++a) y[i * k.n + a] = r * d[a];
            }
        } else {
            s.tuple(x, y, k.m);
        }
        double sum = 0.0, maxd = 0.0;
        for (int i = 0; i < k.m; ++i) {
            double di = dist_n(x, y + i * k.n, k.n);
            sum += di;
            maxd = std::max(maxd, di);
        }
        if (sum == 0.0) continue;
        double shift = 0.5 * maxd * fractions[it % 4];
        double dir[2];
        s.direction(dir);
        double base = eval_checked(k, x, y);
        // x-shift variant
        for (int a = 0; a < k.n; ++a) xs[a] = x[a] + shift * dir[a];
        double vx = eval_checked(k, xs, y);
        best = std::max(best, std::fabs(base - vx) * std::pow(sum, power) /
                                  std::pow(shift, k.delta));
        // y_j-shift variant
        std::copy(y, y + k.m * k.n, ys);
        int j = pick(s.rng);
        s.direction(dir);
        for (int a = 0; a < k.n; ++a) ys[j * k.n + a] = y[j * k.n + a] + shift * dir[a];
        double vy = eval_checked(k, x, ys);
        best = std::max(best, std::fabs(base - vy) * std::pow(sum, power) /
                                  std::pow(shift, k.delta));
    }
    return {"smoothness", best, samples, seed};
}

OperatorResult apply_operator(const KernelSpec& k, const std::vector<GridFunction>& f,
                              double epsilon) {
    if (static_cast<int>(f.size()) != k.m)
        throw std::invalid_argument("apply_operator: argument count does not match kernel");
    const Grid& g = f.front().grid;
    if (g.dim() != k.n) throw std::invalid_argument("apply_operator: grid/kernel dimension mismatch");
    for (const auto& fi : f)
        if (!(fi.grid == g)) throw std::invalid_argument("apply_operator: grid mismatch");
    double h = g.cell_width();
    if (epsilon < h * (1.0 - 1e-12))
        throw std::invalid_argument("apply_operator: epsilon must be at least the cell width");

    // Restrict the tuple sums to the supports.
    struct SupportCell {
        double coord[2];
        double value;
    };
    std::vector<std::vector<SupportCell>> support(k.m);
    for (int i = 0; i < k.m; ++i) {
        for (std::size_t c = 0; c < f[i].values.size(); ++c) {
            if (f[i].values[c] == 0.0) continue;
            auto cc = g.cell_center(c);
            support[i].push_back({{cc[0], cc[1]}, f[i].values[c]});
        }
    }

    double cell_vol = g.cell_volume();
    double tuple_vol = std::pow(cell_vol, k.m);
    GridFunction out(g, 0.0);
    const std::int64_t total = static_cast<std::int64_t>(g.cell_count());

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (std::int64_t c = 0; c < total; ++c) {
        auto cc = g.cell_center(static_cast<std::size_t>(c));
        double x[2] = {cc[0], cc[1]};
        double y[6];
        long double acc = 0.0L;
        if (k.m == 1) {
            for (const auto& s1 : support[0]) {
                y[0] = s1.coord[0];
                y[1] = s1.coord[1];
                double d = dist_n(x, y, k.n);
                if (d < epsilon) continue;
                acc += static_cast<long double>(eval_checked(k, x, y)) * s1.value;
            }
        } else if (k.m == 2) {
            for (const auto& s1 : support[0]) {
                y[0] = s1.coord[0];
                y[1] = s1.coord[1];
                double d1 = dist_n(x, y, k.n);
                for (const auto& s2 : support[1]) {
                    y[k.n] = s2.coord[0];
                    y[k.n + 1] = s2.coord[1];
                    double d2 = dist_n(x, y + k.n, k.n);
                    if (std::max(d1, d2) < epsilon) continue;
                    acc += static_cast<long double>(eval_checked(k, x, y)) * s1.value * s2.value;
                }
            }
        } else {
            for (const auto& s1 : support[0]) {
                y[0] = s1.coord[0];
                y[1] = s1.coord[1];
                double d1 = dist_n(x, y, k.n);
                for (const auto& s2 : support[1]) {
                    y[k.n] = s2.coord[0];
                    y[k.n + 1] = s2.coord[1];
                    double d2 = std::max(d1, dist_n(x, y + k.n, k.n));
                    for (const auto& s3 : support[2]) {
                        y[2 * k.n] = s3.coord[0];
                        y[2 * k.n + 1] = s3.coord[1];
                        double d3 = dist_n(x, y + 2 * k.n, k.n);
                        if (std::max(d2, d3) < epsilon) continue;
                        acc += static_cast<long double>(eval_checked(k, x, y)) * s1.value *
                               s2.value * s3.value;
                    }
                }
            }
        }
        out.values[static_cast<std::size_t>(c)] = static_cast<double>(acc) * tuple_vol;
    }
    return {std::move(out), epsilon, k.name};
}

namespace {

bool cubes_overlap(const Cube& a, const Cube& b) {
    for (int axis = 0; axis < a.dim; ++axis)
        if (a.hi(axis) <= b.lo(axis) + 1e-15 || b.hi(axis) <= a.lo(axis) + 1e-15) return false;
    return true;
}

// Corner/center/random sample points of a product of cubes.
std::vector<std::vector<std::array<double, 2>>> product_samples(
    const std::vector<const Cube*>& cubes, int n, std::mt19937_64& rng) {
    std::size_t l = cubes.size();
    std::vector<std::vector<std::array<double, 2>>> samples;
    int corners = 1 << n;
    // all corner combinations
    std::size_t combos = 1;
    for (std::size_t i = 0; i < l; ++i) combos *= corners;
    for (std::size_t c = 0; c < combos; ++c) {
        std::size_t rem = c;
        std::vector<std::array<double, 2>> pt(l);
        for (std::size_t i = 0; i < l; ++i) {
            int corner = static_cast<int>(rem % corners);
            rem /= corners;
            for (int a = 0; a < n; ++a)
                pt[i][a] = (corner >> a) & 1 ? cubes[i]->hi(a) : cubes[i]->lo(a);
        }
        samples.push_back(std::move(pt));
    }
    // centers
    {
        std::vector<std::array<double, 2>> pt(l);
        for (std::size_t i = 0; i < l; ++i) pt[i] = cubes[i]->center;
        samples.push_back(std::move(pt));
    }
    // 8 random interior points
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int r = 0; r < 8; ++r) {
        std::vector<std::array<double, 2>> pt(l);
        for (std::size_t i = 0; i < l; ++i)
            for (int a = 0; a < n; ++a)
                pt[i][a] = cubes[i]->lo(a) + u(rng) * cubes[i]->side;
        samples.push_back(std::move(pt));
    }
    return samples;
}

} // namespace

Lemma4Report lemma4_estimate(const KernelSpec& k, const Weight& w,
                             const std::vector<std::vector<Cube>>& families,
                             const FamilySpec& char_family, double exclusion_factor,
                             std::uint64_t seed) {
    const Grid& g = w.grid();
    const int n = g.dim(), m = k.m;
    const int l = static_cast<int>(families.size());
    if (l < 1 || l > m)
        throw std::invalid_argument("lemma4_estimate requires 1 <= l <= m cube families");
    if (g.dim() != k.n) throw std::invalid_argument("lemma4_estimate: dimension mismatch");
    double factor = exclusion_factor > 0.0 ? exclusion_factor
                                           : 2.0 * std::sqrt(static_cast<double>(n));

    for (const auto& fam : families) {
        for (std::size_t a = 0; a < fam.size(); ++a) {
            for (std::size_t b = a + 1; b < fam.size(); ++b)
                if (cubes_overlap(fam[a], fam[b]))
                    throw std::invalid_argument("lemma4_estimate: family cubes overlap");
            const Cube dil = dilate(fam[a], factor);
            for (int axis = 0; axis < n; ++axis)
                if (dil.lo(axis) < -g.half_width() || dil.hi(axis) > g.half_width())
                    throw std::invalid_argument(
                        "lemma4_estimate: dilated cube leaves the box; enlarge L");
        }
    }

    // x-cells outside the union of dilated cubes.
    std::vector<std::size_t> xcells;
    for (std::size_t c = 0; c < g.cell_count(); ++c) {
        auto cc = g.cell_center(c);
        bool excluded = false;
        for (const auto& fam : families)
            for (const auto& q : fam) {
                const Cube dil = dilate(q, factor);
                bool in = true;
                for (int axis = 0; axis < n; ++axis)
                    in = in && cc[axis] >= dil.lo(axis) && cc[axis] <= dil.hi(axis);
                if (in) { excluded = true; break; }
            }
        if (!excluded) xcells.push_back(c);
    }

    std::vector<double> wpow(w.density.values.size());
    for (std::size_t i = 0; i < wpow.size(); ++i)
        wpow[i] = std::pow(w.density.values[i], 1.0 / m);
    WeightedMeasure wpow_measure{GridFunction(g, wpow)};
    WeightedMeasure w_measure = w.measure();

    double h_n = g.cell_volume();
    std::mt19937_64 rng(seed);

    // Iterate over tuples (j_1, ..., j_l) of cubes, one from each family.
    std::vector<std::size_t> idx(l, 0);
    long double lhs = 0.0L;
    bool done = false;
    for (const auto& fam : families)
        if (fam.empty()) done = true;  // empty family: empty tuple sum
    while (!done) {
        std::vector<const Cube*> tuple(l);
        for (int i = 0; i < l; ++i) tuple[i] = &families[i][idx[i]];

        double measure_product = 1.0;
        for (int i = 0; i < l; ++i)
            measure_product *= cube_measure(*tuple[i], wpow_measure);

        auto samples = product_samples(tuple, n, rng);

        // Inner (m - l)-fold integral over the box; for each inner tuple the
        // sup over the sampled (y_1..y_l) of the x-sum of |ΔK|.
        const int inner = m - l;
        std::vector<std::size_t> yidx(std::max(inner, 1), 0);
        long double inner_acc = 0.0L;
        bool inner_done = false;
        while (!inner_done) {
            double y[6], yc[6];
            double inner_weight = 1.0;
            for (int i = 0; i < inner; ++i) {
                auto cc = g.cell_center(yidx[i]);
                for (int a = 0; a < n; ++a) {
                    y[(l + i) * n + a] = cc[a];
                    yc[(l + i) * n + a] = cc[a];
                }
                inner_weight *= wpow[yidx[i]];
            }
            for (int i = 0; i < l; ++i)
                for (int a = 0; a < n; ++a) yc[i * n + a] = tuple[i]->center[a];

            double sup = 0.0;
            for (const auto& pt : samples) {
                for (int i = 0; i < l; ++i)
                    for (int a = 0; a < n; ++a) y[i * n + a] = pt[i][a];
                long double xsum = 0.0L;
#ifdef _OPENMP
#pragma omp parallel for reduction(+ : xsum) schedule(static) if (xcells.size() > 4096)
#endif
                for (std::int64_t xi = 0; xi < static_cast<std::int64_t>(xcells.size()); ++xi) {
                    auto cc = g.cell_center(xcells[static_cast<std::size_t>(xi)]);
                    double x[2] = {cc[0], cc[1]};
                    double va = eval_checked(k, x, y);
                    double vb = eval_checked(k, x, yc);
                    xsum += std::fabs(va - vb);
                }
                sup = std::max(sup, static_cast<double>(xsum) * h_n);
            }
            inner_acc += static_cast<long double>(inner_weight) * sup;

            if (inner == 0) break;
            int d = 0;
            while (d < inner) {
                if (++yidx[d] < g.cell_count()) break;
                yidx[d] = 0;
                ++d;
            }
            inner_done = d == inner;
        }
        double inner_val = static_cast<double>(inner_acc) * (inner > 0 ? std::pow(h_n, inner) : 1.0);
        lhs += static_cast<long double>(measure_product) * inner_val;

        int d = 0;
        while (d < l) {
            if (++idx[d] < families[d].size()) break;
            idx[d] = 0;
            ++d;
        }
        done = d == l;
    }

    Lemma4Report rep;
    rep.lhs = static_cast<double>(lhs);
    rep.exclusion_factor = factor;
    rep.excluded_cells = g.cell_count() - xcells.size();
    rep.a1_characteristic = ap_characteristic(w, 1.0, char_family).value;
    long double omega_measure = 0.0L;
    for (const auto& fam : families)
        for (const auto& q : fam) omega_measure += cube_measure(q, w_measure);
    rep.rhs = std::pow(rep.a1_characteristic, (2.0 * m - 2.0) / m) *
              static_cast<double>(omega_measure);
    return rep;
}

double theorem5_max_ratio(const KernelSpec& k, int N, double L, int count, std::uint64_t seed) {
    Grid g(k.n, L, N);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> width(N / 16, N / 4);
    WeightedMeasure leb = WeightedMeasure::lebesgue(g);
    double worst = 0.0;
    for (int it = 0; it < count; ++it) {
        std::vector<GridFunction> f;
        for (int i = 0; i < k.m; ++i) {
            GridFunction fi(g, 0.0);
            int w = width(rng);
            std::uniform_int_distribution<int> pos(N / 4, 3 * N / 4 - w);
            int x0 = pos(rng);
            int y0 = k.n == 2 ? pos(rng) : 0;
            for (int dy = 0; dy < (k.n == 2 ? w : 1); ++dy)
                for (int dx = 0; dx < w; ++dx)
                    fi.values[g.flat_index(x0 + dx, k.n == 2 ? y0 + dy : 0)] = u(rng);
            f.push_back(std::move(fi));
        }
        OperatorResult t = apply_operator(k, f, g.cell_width());
        double num = lp_norm(t.values, leb, 1.0);
        double den = 1.0;
        for (const auto& fi : f) den *= lp_norm(fi, leb, static_cast<double>(k.m));
        if (den > 0.0) worst = std::max(worst, num / den);
    }
    return worst;
}

} // namespace czlab
