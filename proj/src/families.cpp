#include "czlab/families.hpp"

#include <deque>
#include <stdexcept>

namespace czlab {

FamilySpec default_family(const Grid& g) {
    return {g.dim() == 1 ? FamilyKind::Exhaustive1D : FamilyKind::DyadicShifted2D};
}

std::string family_name(const FamilySpec& spec) {
    switch (spec.kind) {
        case FamilyKind::Exhaustive1D: return "exhaustive_intervals_1d";
        case FamilyKind::AllSquares2D: return "all_squares_2d";
        case FamilyKind::DyadicShifted2D: return "dyadic_shifted_2d";
        case FamilyKind::Dyadic: return "dyadic";
    }
    return "unknown";
}

FamilySpec family_from_name(const std::string& name) {
    if (name == "exhaustive_intervals_1d" || name == "exhaustive")
        return {FamilyKind::Exhaustive1D};
    if (name == "all_squares_2d" || name == "all_squares") return {FamilyKind::AllSquares2D};
    if (name == "dyadic_shifted_2d" || name == "dyadic_shifted")
        return {FamilyKind::DyadicShifted2D};
    if (name == "dyadic") return {FamilyKind::Dyadic};
    throw std::invalid_argument("unknown cube family: " + name);
}

namespace {

void check_dim(const FamilySpec& spec, const Grid& g) {
    bool need1d = spec.kind == FamilyKind::Exhaustive1D;
    bool need2d = spec.kind == FamilyKind::AllSquares2D ||
                  spec.kind == FamilyKind::DyadicShifted2D;
    if (need1d && g.dim() != 1)
        throw std::invalid_argument("exhaustive interval family requires a 1D grid");
    if (need2d && g.dim() != 2)
        throw std::invalid_argument(family_name(spec) + " requires a 2D grid");
}

template <typename Fn>
void visit_dyadic_shifted(const Grid& g, Fn&& fn) {
    int n = g.cells_per_axis();
    for (int len = n; len >= 1; len /= 2) {
        int shifts[3] = {0, len / 3, (2 * len) / 3};
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                if ((a > 0 && shifts[a] == 0) || (b > 0 && shifts[b] == 0)) continue;
                for (int y = shifts[b]; y + len <= n; y += len)
                    for (int x = shifts[a]; x + len <= n; x += len)
                        fn(GridCube{{x, y}, len});
            }
    }
}

template <typename Fn>
void visit_dyadic(const Grid& g, Fn&& fn) {
    int n = g.cells_per_axis();
    for (int len = n; len >= 1; len /= 2)
        for (int y = 0; y + len <= n; y += len) {
            for (int x = 0; x + len <= n; x += len) fn(GridCube{{x, y}, len});
            if (g.dim() == 1) break;
        }
}

} // namespace

std::size_t family_size(const FamilySpec& spec, const Grid& g) {
    check_dim(spec, g);
    std::size_t n = static_cast<std::size_t>(g.cells_per_axis());
    switch (spec.kind) {
        case FamilyKind::Exhaustive1D:
            return n * (n + 1) / 2;
        case FamilyKind::AllSquares2D: {
            std::size_t total = 0;
            for (std::size_t len = 1; len <= n; ++len)
                total += (n - len + 1) * (n - len + 1);
            return total;
        }
        case FamilyKind::DyadicShifted2D: {
            std::size_t total = 0;
            visit_dyadic_shifted(g, [&](const GridCube&) { ++total; });
            return total;
        }
        case FamilyKind::Dyadic: {
            std::size_t total = 0;
            visit_dyadic(g, [&](const GridCube&) { ++total; });
            return total;
        }
    }
    return 0;
}

void for_each_cube(const FamilySpec& spec, const Grid& g,
                   const std::function<void(const GridCube&)>& fn) {
    check_dim(spec, g);
    int n = g.cells_per_axis();
    switch (spec.kind) {
        case FamilyKind::Exhaustive1D:
            for (int len = 1; len <= n; ++len)
                for (int x = 0; x + len <= n; ++x) fn(GridCube{{x, 0}, len});
            return;
        case FamilyKind::AllSquares2D:
            for (int len = 1; len <= n; ++len)
                for (int y = 0; y + len <= n; ++y)
                    for (int x = 0; x + len <= n; ++x) fn(GridCube{{x, y}, len});
            return;
        case FamilyKind::DyadicShifted2D:
            visit_dyadic_shifted(g, fn);
            return;
        case FamilyKind::Dyadic:
            visit_dyadic(g, fn);
            return;
    }
}

void sliding_min(const std::vector<double>& v, int len, std::vector<double>& out) {
    int n = static_cast<int>(v.size());
    out.assign(static_cast<std::size_t>(n - len + 1), 0.0);
    std::deque<int> dq;
    for (int i = 0; i < n; ++i) {
        while (!dq.empty() && v[dq.back()] >= v[i]) dq.pop_back();
        dq.push_back(i);
        if (dq.front() <= i - len) dq.pop_front();
        if (i >= len - 1) out[i - len + 1] = v[dq.front()];
    }
}

namespace {

template <bool kMin>
void window_filter_2d(const std::vector<double>& v, int n, int len, std::vector<double>& out) {
    int m = n - len + 1;
    std::vector<double> rows(static_cast<std::size_t>(m) * n);
    std::deque<int> dq;
    auto better = [](double a, double b) { return kMin ? a <= b : a >= b; };
    // Horizontal pass: filter each row over windows of len.
    for (int y = 0; y < n; ++y) {
        dq.clear();
        for (int x = 0; x < n; ++x) {
            double val = v[static_cast<std::size_t>(y) * n + x];
            while (!dq.empty() && better(val, v[static_cast<std::size_t>(y) * n + dq.back()]))
                dq.pop_back();
            dq.push_back(x);
            if (dq.front() <= x - len) dq.pop_front();
            if (x >= len - 1)
                rows[static_cast<std::size_t>(x - len + 1) * n + y] =
                    v[static_cast<std::size_t>(y) * n + dq.front()];
        }
    }
    // Vertical pass over the transposed intermediate.
    out.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (int x = 0; x < m; ++x) {
        dq.clear();
        const double* col = &rows[static_cast<std::size_t>(x) * n];
        for (int y = 0; y < n; ++y) {
            while (!dq.empty() && better(col[y], col[dq.back()])) dq.pop_back();
            dq.push_back(y);
            if (dq.front() <= y - len) dq.pop_front();
            if (y >= len - 1)
                out[static_cast<std::size_t>(y - len + 1) * m + x] = col[dq.front()];
        }
    }
}

} // namespace

void window_min_2d(const std::vector<double>& v, int n, int len, std::vector<double>& out) {
    window_filter_2d<true>(v, n, len, out);
}

void window_max_2d(const std::vector<double>& v, int n, int len, std::vector<double>& out) {
    window_filter_2d<false>(v, n, len, out);
}

} // namespace czlab
