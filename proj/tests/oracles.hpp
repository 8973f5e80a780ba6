#pragma once

// Test-only oracles, kept independent of the library paths they verify:
// direct double-precision loops, no prefix tables, no shared scan code.

#include "czlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

namespace oracle {

// Brute-force A_1 ratio over every subinterval: plain nested loops.
inline double a1_bruteforce_1d(const std::vector<double>& w) {
    int n = static_cast<int>(w.size());
    double best = 0.0;
    for (int a = 0; a < n; ++a) {
        double sum = 0.0, mn = w[a];
        for (int b = a; b < n; ++b) {
            sum += w[b];
            mn = std::min(mn, w[b]);
            best = std::max(best, sum / ((b - a + 1) * mn));
        }
    }
    return best;
}

// Brute-force A_p ratio over every subinterval, p > 1.
inline double ap_bruteforce_1d(const std::vector<double>& w, double p) {
    int n = static_cast<int>(w.size());
    double pp = p / (p - 1.0);
    double best = 0.0;
    for (int a = 0; a < n; ++a) {
        double sum = 0.0, dual = 0.0;
        for (int b = a; b < n; ++b) {
            sum += w[b];
            dual += std::pow(w[b], 1.0 - pp);
            int len = b - a + 1;
            best = std::max(best, (sum / len) * std::pow(dual / len, p - 1.0));
        }
    }
    return best;
}

// Brute-force uncentered weighted maximal function over every subinterval.
inline std::vector<double> weighted_maximal_bruteforce_1d(const std::vector<double>& f,
                                                          const std::vector<double>& w) {
    int n = static_cast<int>(f.size());
    std::vector<double> m(n, 0.0);
    for (int a = 0; a < n; ++a) {
        double num = 0.0, den = 0.0;
        for (int b = a; b < n; ++b) {
            num += std::fabs(f[b]) * w[b];
            den += w[b];
            double avg = num / den;
            for (int i = a; i <= b; ++i) m[i] = std::max(m[i], avg);
        }
    }
    return m;
}

// Adaptive Simpson in one variable.
inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 24) {
    auto simpson = [&f](double lo, double hi) {
        return (hi - lo) / 6.0 * (f(lo) + 4.0 * f(0.5 * (lo + hi)) + f(hi));
    };
    std::function<double(double, double, double, int)> rec =
        [&](double lo, double hi, double whole, int d) -> double {
        double mid = 0.5 * (lo + hi);
        double left = simpson(lo, mid), right = simpson(mid, hi);
        if (d <= 0 || std::fabs(left + right - whole) < 15.0 * tol)
            return left + right + (left + right - whole) / 15.0;
        return rec(lo, mid, left, d - 1) + rec(mid, hi, right, d - 1);
    };
    return rec(a, b, simpson(a, b), depth);
}

// Tensor adaptive quadrature of K(x, y1, y2) over [a1,b1] x [a2,b2].
inline double quad2d(const std::function<double(double, double)>& f, double a1, double b1,
                     double a2, double b2, double tol) {
    return adaptive_simpson(
        [&](double y1) {
            return adaptive_simpson([&](double y2) { return f(y1, y2); }, a2, b2, tol);
        },
        a1, b1, tol);
}

// Weak-norm sup over a refined log t-grid; evaluates mu({|g| > t}) by a
// direct scan at each grid point.
inline double weak_sup_grid(const czlab::GridFunction& g, const czlab::WeightedMeasure& mu,
                            double p, int points, int refinements) {
    double vmax = 0.0, vmin = std::numeric_limits<double>::infinity();
    for (double v : g.values) {
        double a = std::fabs(v);
        if (a > 0.0) {
            vmax = std::max(vmax, a);
            vmin = std::min(vmin, a);
        }
    }
    if (vmax == 0.0) return 0.0;
    double lo = vmin * 0.5, hi = vmax * 1.000001;
    double best = 0.0, best_t = lo;
    for (int r = 0; r < refinements; ++r) {
        double llo = std::log(lo), lhi = std::log(hi);
        for (int i = 0; i <= points; ++i) {
            double t = std::exp(llo + (lhi - llo) * i / points);
            double measure = czlab::level_set_measure(g, mu, t);
            double val = std::pow(t, p) * measure;
            if (val > best) {
                best = val;
                best_t = t;
            }
        }
        double span = std::pow(hi / lo, 1.0 / points);
        lo = best_t / (span * span);
        hi = best_t * (span * span);
    }
    return best;
}

inline std::vector<double> random_values(int n, std::uint64_t seed, double lo = -1.0,
                                         double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

} // namespace oracle
