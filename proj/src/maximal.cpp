#include "czlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace czlab {

namespace {

// Window averages of numer/denom over windows of `len` cells starting at
// each position (1D).
void window_avgs_1d(const std::vector<long double>& pn, const std::vector<long double>& pd,
                    int len, std::vector<double>& out) {
    int m = static_cast<int>(pn.size()) - len;
    out.resize(m);
    for (int x = 0; x < m; ++x)
        out[x] = static_cast<double>((pn[x + len] - pn[x]) / (pd[x + len] - pd[x]));
}

// M[i] = max(M[i], max over windows of `len` containing cell i of win[x]).
void accumulate_containing_max_1d(const std::vector<double>& win, int len, int n,
                                  std::vector<double>& m) {
    int wn = static_cast<int>(win.size());
    std::deque<int> dq;
    for (int i = 0; i < n; ++i) {
        if (i < wn) {
            while (!dq.empty() && win[dq.back()] <= win[i]) dq.pop_back();
            dq.push_back(i);
        }
        while (!dq.empty() && dq.front() < i - len + 1) dq.pop_front();
        if (!dq.empty()) m[i] = std::max(m[i], win[dq.front()]);
    }
}

// 2D counterpart: win is an (n-len+1)^2 field of square averages; M gets the
// max over squares containing each cell. Two separable clamped max passes.
void accumulate_containing_max_2d(const std::vector<double>& win, int len, int n,
                                  std::vector<double>& m) {
    int wn = n - len + 1;
    std::vector<double> rowpass(static_cast<std::size_t>(wn) * n,
                                -std::numeric_limits<double>::infinity());
    std::deque<int> dq;
    for (int y = 0; y < wn; ++y) {
        dq.clear();
        const double* row = &win[static_cast<std::size_t>(y) * wn];
        for (int i = 0; i < n; ++i) {
            if (i < wn) {
                while (!dq.empty() && row[dq.back()] <= row[i]) dq.pop_back();
                dq.push_back(i);
            }
            while (!dq.empty() && dq.front() < i - len + 1) dq.pop_front();
            if (!dq.empty())
                rowpass[static_cast<std::size_t>(y) * n + i] = row[dq.front()];
        }
    }
    for (int i = 0; i < n; ++i) {
        dq.clear();
        for (int r = 0; r < n; ++r) {
            if (r < wn) {
                double v = rowpass[static_cast<std::size_t>(r) * n + i];
                while (!dq.empty() &&
                       rowpass[static_cast<std::size_t>(dq.back()) * n + i] <= v)
                    dq.pop_back();
                dq.push_back(r);
            }
            while (!dq.empty() && dq.front() < r - len + 1) dq.pop_front();
            if (!dq.empty()) {
                std::size_t idx = static_cast<std::size_t>(r) * n + i;
                m[idx] = std::max(m[idx], rowpass[static_cast<std::size_t>(dq.front()) * n + i]);
            }
        }
    }
}

GridFunction maximal_impl(const GridFunction& f, const std::vector<double>& weight,
                          const FamilySpec& family) {
    const Grid& g = f.grid;
    int n = g.cells_per_axis();
    std::vector<double> absf(f.values.size());
    for (std::size_t i = 0; i < absf.size(); ++i) absf[i] = std::fabs(f.values[i]);
    std::vector<double> numer(absf.size());
    for (std::size_t i = 0; i < absf.size(); ++i) numer[i] = absf[i] * weight[i];

    GridFunction out(g, 0.0);

    if (family.kind == FamilyKind::Exhaustive1D) {
        std::vector<long double> pn(n + 1, 0.0L), pd(n + 1, 0.0L);
        for (int i = 0; i < n; ++i) {
            pn[i + 1] = pn[i] + numer[i];
            pd[i + 1] = pd[i] + weight[i];
        }
        std::vector<double> win;
        for (int len = 1; len <= n; ++len) {
            window_avgs_1d(pn, pd, len, win);
            accumulate_containing_max_1d(win, len, n, out.values);
        }
        return out;
    }

    if (family.kind == FamilyKind::AllSquares2D) {
        std::vector<long double> pn(static_cast<std::size_t>(n + 1) * (n + 1), 0.0L), pd = pn;
        auto at = [n](std::vector<long double>& p, int x, int y) -> long double& {
            return p[static_cast<std::size_t>(y) * (n + 1) + x];
        };
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                std::size_t c = static_cast<std::size_t>(y) * n + x;
                at(pn, x + 1, y + 1) =
                    numer[c] + at(pn, x, y + 1) + at(pn, x + 1, y) - at(pn, x, y);
                at(pd, x + 1, y + 1) =
                    weight[c] + at(pd, x, y + 1) + at(pd, x + 1, y) - at(pd, x, y);
            }
        auto rect = [n](const std::vector<long double>& p, int x, int y, int len) {
            auto a = [n, &p](int xx, int yy) {
                return p[static_cast<std::size_t>(yy) * (n + 1) + xx];
            };
            return a(x + len, y + len) - a(x, y + len) - a(x + len, y) + a(x, y);
        };
        std::vector<double> win;
        for (int len = 1; len <= n; ++len) {
            int m = n - len + 1;
            win.assign(static_cast<std::size_t>(m) * m, 0.0);
            for (int y = 0; y < m; ++y)
                for (int x = 0; x < m; ++x)
                    win[static_cast<std::size_t>(y) * m + x] = static_cast<double>(
                        rect(pn, x, y, len) / rect(pd, x, y, len));
            accumulate_containing_max_2d(win, len, n, out.values);
        }
        return out;
    }

    // Dyadic families: per cell, walk the cubes of the family containing it.
    std::vector<long double> pn, pd;
    if (g.dim() == 1) {
        pn.assign(n + 1, 0.0L);
        pd.assign(n + 1, 0.0L);
        for (int i = 0; i < n; ++i) {
            pn[i + 1] = pn[i] + numer[i];
            pd[i + 1] = pd[i] + weight[i];
        }
    } else {
        pn.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0L);
        pd = pn;
        for (int y = 0; y < n; ++y)
            for (int x = 0; x < n; ++x) {
                auto at = [n](std::vector<long double>& p, int xx, int yy) -> long double& {
                    return p[static_cast<std::size_t>(yy) * (n + 1) + xx];
                };
                std::size_t c = static_cast<std::size_t>(y) * n + x;
                at(pn, x + 1, y + 1) =
                    numer[c] + at(pn, x, y + 1) + at(pn, x + 1, y) - at(pn, x, y);
                at(pd, x + 1, y + 1) =
                    weight[c] + at(pd, x, y + 1) + at(pd, x + 1, y) - at(pd, x, y);
            }
    }
    auto cube_avg = [&](const GridCube& q) {
        if (g.dim() == 1) {
            long double num = pn[q.lo[0] + q.len] - pn[q.lo[0]];
            long double den = pd[q.lo[0] + q.len] - pd[q.lo[0]];
            return static_cast<double>(num / den);
        }
        auto a = [n](const std::vector<long double>& p, int xx, int yy) {
            return p[static_cast<std::size_t>(yy) * (n + 1) + xx];
        };
        auto rect = [&](const std::vector<long double>& p) {
            return a(p, q.lo[0] + q.len, q.lo[1] + q.len) - a(p, q.lo[0], q.lo[1] + q.len) -
                   a(p, q.lo[0] + q.len, q.lo[1]) + a(p, q.lo[0], q.lo[1]);
        };
        return static_cast<double>(rect(pn) / rect(pd));
    };
    for_each_cube(family, g, [&](const GridCube& q) {
        double v = cube_avg(q);
        for (int dy = 0; dy < (g.dim() == 2 ? q.len : 1); ++dy)
            for (int dx = 0; dx < q.len; ++dx) {
                std::size_t idx = g.flat_index(q.lo[0] + dx, g.dim() == 2 ? q.lo[1] + dy : 0);
                out.values[idx] = std::max(out.values[idx], v);
            }
    });
    return out;
}

} // namespace

MaximalResult hl_maximal(const GridFunction& f, const FamilySpec& family) {
    std::vector<double> ones(f.values.size(), 1.0);
    return {maximal_impl(f, ones, family), family};
}

MaximalResult weighted_maximal(const GridFunction& f, const WeightedMeasure& w,
                               const FamilySpec& family) {
    if (!(f.grid == w.grid())) throw std::invalid_argument("grid mismatch");
    return {maximal_impl(f, w.density.values, family), family};
}

double weak11_ratio(const GridFunction& f, const WeightedMeasure& w, const FamilySpec& family) {
    double norm = 0.0;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        norm += std::fabs(f.values[i]) * w.density.values[i];
    norm *= f.grid.cell_volume();
    if (norm == 0.0) throw std::invalid_argument("weak11_ratio requires f not identically zero");

    MaximalResult m = weighted_maximal(f, w, family);
    std::vector<std::size_t> order(m.values.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return m.values.values[a] > m.values.values[b];
    });
    // sup_t t w({M > t}) is attained as t increases to a value of M; group
    // ties so the level set {M >= v} is measured whole.
    double vol = f.grid.cell_volume();
    long double cum = 0.0L;
    double sup = 0.0;
    std::size_t i = 0;
    while (i < order.size()) {
        double v = m.values.values[order[i]];
        std::size_t j = i;
        while (j < order.size() && m.values.values[order[j]] == v) {
            cum += w.density.values[order[j]];
            ++j;
        }
        if (v > 0.0) sup = std::max(sup, v * static_cast<double>(cum) * vol);
        i = j;
    }
    return sup / norm;
}

RadialMajorantReport radial_majorant_check(const GridFunction& f, const RadialProfile& profile) {
    const Grid& g = f.grid;
    if (g.dim() != 1)
        throw std::invalid_argument("radial_majorant_check is implemented for 1D grids");
    if (!(profile.max_radius > 0.0))
        throw std::invalid_argument("radial profile needs a positive truncation radius");
    int n = g.cells_per_axis();
    double h = g.cell_width();
    int reach = static_cast<int>(std::floor(profile.max_radius / h));

    std::vector<double> k(reach + 1);
    for (int j = 0; j <= reach; ++j) {
        k[j] = profile.k(j * h);
        if (!(k[j] >= 0.0) || !std::isfinite(k[j]))
            throw std::invalid_argument("radial profile must be nonnegative and finite");
        if (j > 0 && k[j] > k[j - 1] * (1.0 + 1e-12) + 1e-300)
            throw std::invalid_argument("radial profile must be nonincreasing");
    }
    long double l1 = k[0];
    for (int j = 1; j <= reach; ++j) l1 += 2.0L * k[j];
    double k_l1 = static_cast<double>(l1) * h;

    std::vector<double> absf(n);
    double osc = 0.0;
    for (int i = 0; i < n; ++i) {
        absf[i] = std::fabs(f.values[i]);
        if (i > 0) osc = std::max(osc, std::fabs(absf[i] - absf[i - 1]));
    }

    GridFunction mf = hl_maximal(f, {FamilyKind::Exhaustive1D}).values;

    double violation = -std::numeric_limits<double>::infinity();
#ifdef _OPENMP
#pragma omp parallel for reduction(max : violation)
#endif
    for (int i = 0; i < n; ++i) {
        long double conv = 0.0L;
        for (int j = std::max(0, i - reach); j < std::min(n, i + reach + 1); ++j)
            conv += static_cast<long double>(k[std::abs(i - j)]) * absf[j];
        double lhs = static_cast<double>(conv) * h;
        violation = std::max(violation, lhs - k_l1 * mf.values[i]);
    }

    RadialMajorantReport rep;
    rep.max_violation = violation;
    rep.k_l1 = k_l1;
    rep.slack = k_l1 * osc;
    return rep;
}

} // namespace czlab
