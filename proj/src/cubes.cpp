#include "czlab/cubes.hpp"

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

constexpr double kInf = std::numeric_limits<double>::infinity();

int int_log2(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

// Per-axis overlap lengths of [lo, hi] with the grid cells.
struct AxisOverlap {
    int first = 0;
    std::vector<double> len;
};

AxisOverlap axis_overlaps(const Grid& g, double lo, double hi) {
    AxisOverlap out;
    double L = g.half_width(), h = g.cell_width();
    int n = g.cells_per_axis();
    lo = std::max(lo, -L);
    hi = std::min(hi, L);
    if (!(hi > lo)) return out;
    int i0 = std::clamp(static_cast<int>(std::floor((lo + L) / h)), 0, n - 1);
    int i1 = std::clamp(static_cast<int>(std::ceil((hi + L) / h)) - 1, 0, n - 1);
    out.first = i0;
    out.len.reserve(i1 - i0 + 1);
    for (int i = i0; i <= i1; ++i) {
        double a = std::max(lo, g.axis_left(i));
        double b = std::min(hi, g.axis_left(i) + h);
        out.len.push_back(std::max(0.0, b - a));
    }
    return out;
}

// Distance from every box cell to the complement set of omega. Cells are
// closed boxes; adjacent cells are at distance zero.
std::vector<double> distance_field(const CellSet& omega, bool exterior) {
    const Grid& g = omega.grid;
    int n = g.cells_per_axis();
    double h = g.cell_width();
    std::vector<double> d(g.cell_count(), kInf);

    if (g.dim() == 1) {
        // Sweep nearest complement cell from both sides.
        int last = -1;
        for (int i = 0; i < n; ++i) {
            if (!omega.member[i]) last = i;
            else if (last >= 0) d[i] = (i - last - 1) * h;
        }
        last = -1;
        for (int i = n - 1; i >= 0; --i) {
            if (!omega.member[i]) last = i;
            else if (last >= 0) d[i] = std::min(d[i], (last - i - 1) * h);
        }
        if (exterior)
            for (int i = 0; i < n; ++i)
                d[i] = std::min(d[i], h * std::min(i, n - 1 - i));
        return d;
    }

    // 2D: per-row sorted complement columns, rows scanned outward.
    std::vector<std::vector<int>> row_cols(n);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix)
            if (!omega.member[g.flat_index(ix, iy)]) row_cols[iy].push_back(ix);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            std::size_t idx = g.flat_index(ix, iy);
            if (!omega.member[idx]) continue;
            double best2 = kInf;
            if (exterior) {
                double e = h * std::min({ix, n - 1 - ix, iy, n - 1 - iy});
                best2 = e * e;
            }
            for (int dr = 0; dr < n; ++dr) {
                double gy = std::max(0, dr - 1) * h;
                if (gy * gy >= best2) break;
                for (int sgn : {-1, 1}) {
                    if (dr == 0 && sgn == 1) continue;
                    int jy = iy + sgn * dr;
                    if (jy < 0 || jy >= n) continue;
                    const auto& cols = row_cols[jy];
                    if (cols.empty()) continue;
                    auto it = std::lower_bound(cols.begin(), cols.end(), ix);
                    if (it != cols.end()) {
                        double gx = std::max(0, std::abs(ix - *it) - 1) * h;
                        best2 = std::min(best2, gx * gx + gy * gy);
                    }
                    if (it != cols.begin()) {
                        double gx = std::max(0, std::abs(ix - *std::prev(it)) - 1) * h;
                        best2 = std::min(best2, gx * gx + gy * gy);
                    }
                }
            }
            d[idx] = std::sqrt(best2);
        }
    }
    return d;
}

// Dyadic pyramid of "fully inside omega" flags and min distance values.
struct DyadicPyramid {
    int levels = 0;  // level k has (N >> k)^dim blocks of 2^k cells per axis
    std::vector<std::vector<std::uint8_t>> inside;
    std::vector<std::vector<double>> mind;
    int dim = 1;
    int n = 0;
};

DyadicPyramid build_pyramid(const CellSet& omega, const std::vector<double>& d) {
    const Grid& g = omega.grid;
    DyadicPyramid p;
    p.dim = g.dim();
    p.n = g.cells_per_axis();
    p.levels = int_log2(p.n) + 1;
    p.inside.resize(p.levels);
    p.mind.resize(p.levels);
    p.inside[0].assign(omega.member.begin(), omega.member.end());
    p.mind[0].assign(d.begin(), d.end());
    for (int k = 1; k < p.levels; ++k) {
        int nk = p.n >> k;
        if (p.dim == 1) {
            p.inside[k].resize(nk);
            p.mind[k].resize(nk);
            for (int i = 0; i < nk; ++i) {
                p.inside[k][i] = p.inside[k - 1][2 * i] && p.inside[k - 1][2 * i + 1];
                p.mind[k][i] = std::min(p.mind[k - 1][2 * i], p.mind[k - 1][2 * i + 1]);
            }
        } else {
            int prev = p.n >> (k - 1);
            p.inside[k].resize(static_cast<std::size_t>(nk) * nk);
            p.mind[k].resize(static_cast<std::size_t>(nk) * nk);
            for (int y = 0; y < nk; ++y)
                for (int x = 0; x < nk; ++x) {
                    auto at = [&](int xx, int yy) {
                        return static_cast<std::size_t>(yy) * prev + xx;
                    };
                    std::size_t c = static_cast<std::size_t>(y) * nk + x;
                    p.inside[k][c] = p.inside[k - 1][at(2 * x, 2 * y)] &&
                                     p.inside[k - 1][at(2 * x + 1, 2 * y)] &&
                                     p.inside[k - 1][at(2 * x, 2 * y + 1)] &&
                                     p.inside[k - 1][at(2 * x + 1, 2 * y + 1)];
                    p.mind[k][c] = std::min(
                        std::min(p.mind[k - 1][at(2 * x, 2 * y)], p.mind[k - 1][at(2 * x + 1, 2 * y)]),
                        std::min(p.mind[k - 1][at(2 * x, 2 * y + 1)],
                                 p.mind[k - 1][at(2 * x + 1, 2 * y + 1)]));
                }
        }
    }
    return p;
}

} // namespace

double Cube::diam() const { return std::sqrt(static_cast<double>(dim)) * side; }

Cube dilate(const Cube& q, double r) {
    if (!(r > 0.0)) throw std::invalid_argument("dilate requires r > 0");
    Cube out = q;
    out.side = q.side * r;
    return out;
}

Cube GridCube::to_cube(const Grid& g) const {
    Cube c;
    c.dim = g.dim();
    double s = len * g.cell_width();
    c.side = s;
    c.center = {g.axis_left(lo[0]) + 0.5 * s,
                g.dim() == 2 ? g.axis_left(lo[1]) + 0.5 * s : 0.0};
    return c;
}

bool GridCube::contains_cell(int ix, int iy) const {
    return ix >= lo[0] && ix < lo[0] + len && iy >= lo[1] && iy < lo[1] + len;
}

CellSet::CellSet(const Grid& g) : grid(g), member(g.cell_count(), 0) {}

std::size_t CellSet::count() const {
    std::size_t c = 0;
    for (auto m : member) c += (m != 0);
    return c;
}

double cube_measure(const Cube& q, const WeightedMeasure& mu) {
    const Grid& g = mu.grid();
    if (!(q.side > 0.0)) return 0.0;
    AxisOverlap ox = axis_overlaps(g, q.lo(0), q.hi(0));
    if (ox.len.empty()) return 0.0;
    if (g.dim() == 1) {
        long double acc = 0.0L;
        for (std::size_t k = 0; k < ox.len.size(); ++k)
            acc += static_cast<long double>(mu.density.values[ox.first + k]) * ox.len[k];
        return static_cast<double>(acc);
    }
    AxisOverlap oy = axis_overlaps(g, q.lo(1), q.hi(1));
    if (oy.len.empty()) return 0.0;
    long double acc = 0.0L;
    for (std::size_t ky = 0; ky < oy.len.size(); ++ky)
        for (std::size_t kx = 0; kx < ox.len.size(); ++kx)
            acc += static_cast<long double>(
                       mu.density.values[g.flat_index(ox.first + kx, oy.first + ky)]) *
                   ox.len[kx] * oy.len[ky];
    return static_cast<double>(acc);
}

double cube_box_volume(const Cube& q, const Grid& g) {
    if (!(q.side > 0.0)) return 0.0;
    double v = 1.0;
    for (int axis = 0; axis < g.dim(); ++axis) {
        double lo = std::max(q.lo(axis), -g.half_width());
        double hi = std::min(q.hi(axis), g.half_width());
        if (!(hi > lo)) return 0.0;
        v *= hi - lo;
    }
    return v;
}

double cube_average(const Cube& q, const GridFunction& f) {
    double vol = cube_box_volume(q, f.grid);
    if (!(vol > 0.0)) throw std::invalid_argument("cube does not intersect the grid box");
    const Grid& g = f.grid;
    AxisOverlap ox = axis_overlaps(g, q.lo(0), q.hi(0));
    long double acc = 0.0L;
    if (g.dim() == 1) {
        for (std::size_t k = 0; k < ox.len.size(); ++k)
            acc += static_cast<long double>(f.values[ox.first + k]) * ox.len[k];
    } else {
        AxisOverlap oy = axis_overlaps(g, q.lo(1), q.hi(1));
        for (std::size_t ky = 0; ky < oy.len.size(); ++ky)
            for (std::size_t kx = 0; kx < ox.len.size(); ++kx)
                acc += static_cast<long double>(
                           f.values[g.flat_index(ox.first + kx, oy.first + ky)]) *
                       ox.len[kx] * oy.len[ky];
    }
    return static_cast<double>(acc) / vol;
}

double cube_inf(const Cube& q, const GridFunction& f) {
    const Grid& g = f.grid;
    AxisOverlap ox = axis_overlaps(g, q.lo(0), q.hi(0));
    if (ox.len.empty()) throw std::invalid_argument("cube does not intersect the grid box");
    double m = kInf;
    if (g.dim() == 1) {
        for (std::size_t k = 0; k < ox.len.size(); ++k)
            if (ox.len[k] > 0.0) m = std::min(m, f.values[ox.first + k]);
        return m;
    }
    AxisOverlap oy = axis_overlaps(g, q.lo(1), q.hi(1));
    for (std::size_t ky = 0; ky < oy.len.size(); ++ky)
        for (std::size_t kx = 0; kx < ox.len.size(); ++kx)
            if (ox.len[kx] > 0.0 && oy.len[ky] > 0.0)
                m = std::min(m, f.values[g.flat_index(ox.first + kx, oy.first + ky)]);
    return m;
}

double whitney_distance(const GridCube& q, const CellSet& omega, bool exterior_is_complement) {
    const Grid& g = omega.grid;
    int n = g.cells_per_axis();
    double h = g.cell_width();
    double best = kInf;
    if (exterior_is_complement) {
        int gap = std::min({q.lo[0], n - (q.lo[0] + q.len)});
        if (g.dim() == 2) gap = std::min({gap, q.lo[1], n - (q.lo[1] + q.len)});
        best = gap * h;
    }
    for (int iy = 0; iy < (g.dim() == 2 ? n : 1); ++iy)
        for (int ix = 0; ix < n; ++ix) {
            if (omega.member[g.flat_index(ix, iy)]) continue;
            double gx = 0.0, gy = 0.0;
            if (ix < q.lo[0]) gx = (q.lo[0] - ix - 1) * h;
            else if (ix >= q.lo[0] + q.len) gx = (ix - (q.lo[0] + q.len)) * h;
            if (g.dim() == 2) {
                if (iy < q.lo[1]) gy = (q.lo[1] - iy - 1) * h;
                else if (iy >= q.lo[1] + q.len) gy = (iy - (q.lo[1] + q.len)) * h;
            }
            best = std::min(best, std::hypot(gx, gy));
        }
    return best;
}

std::vector<GridCube> whitney_decompose(const CellSet& omega, bool exterior_is_complement) {
    const Grid& g = omega.grid;
    std::size_t count = omega.count();
    if (count == 0) return {};
    if (!exterior_is_complement && count == g.cell_count())
        throw std::invalid_argument(
            "whitney_decompose: omega has empty complement; distance undefined");

    std::vector<double> d = distance_field(omega, exterior_is_complement);
    DyadicPyramid p = build_pyramid(omega, d);
    double h = g.cell_width();
    double sqrtn = std::sqrt(static_cast<double>(g.dim()));

    std::vector<GridCube> out;
    // Top-down maximal selection: accept when fully inside and
    // dist >= 2 * diam; otherwise split, forcing acceptance at cell level.
    struct Node { int level, bx, by; };
    std::vector<Node> stack{{p.levels - 1, 0, 0}};
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        int nk = p.n >> nd.level;
        std::size_t c = g.dim() == 1 ? static_cast<std::size_t>(nd.bx)
                                     : static_cast<std::size_t>(nd.by) * nk + nd.bx;
        int len = 1 << nd.level;
        bool inside = p.inside[nd.level][c];
        double diam = sqrtn * len * h;
        if (inside && p.mind[nd.level][c] >= 2.0 * diam) {
            out.push_back({{nd.bx * len, nd.by * len}, len});
            continue;
        }
        if (nd.level == 0) {
            if (inside) out.push_back({{nd.bx, nd.by}, 1});
            continue;
        }
        for (int sy = 0; sy < (g.dim() == 2 ? 2 : 1); ++sy)
            for (int sx = 0; sx < 2; ++sx)
                stack.push_back({nd.level - 1, 2 * nd.bx + sx, 2 * nd.by + sy});
    }

    // Post-hoc refinement: split any non-cell cube below the lower bound.
    // The construction already guarantees the bound; this guards the
    // invariant, not the recipe.
    for (std::size_t i = 0; i < out.size();) {
        GridCube q = out[i];
        if (q.len > 1) {
            double diam = sqrtn * q.len * h;
            double dist = whitney_distance(q, omega, exterior_is_complement);
            if (dist < 2.0 * diam) {
                out.erase(out.begin() + static_cast<std::ptrdiff_t>(i));
                int half = q.len / 2;
                for (int sy = 0; sy < (g.dim() == 2 ? 2 : 1); ++sy)
                    for (int sx = 0; sx < 2; ++sx)
                        out.push_back({{q.lo[0] + sx * half, q.lo[1] + sy * half}, half});
                continue;
            }
        }
        ++i;
    }
    return out;
}

WhitneyReport certify_whitney(const CellSet& omega, const std::vector<GridCube>& cubes,
                              double lo, double hi, bool exterior_is_complement) {
    const Grid& g = omega.grid;
    WhitneyReport rep;
    rep.lo = lo;
    rep.hi = hi;
    rep.cube_count = cubes.size();

    std::vector<std::uint32_t> cover(g.cell_count(), 0);
    bool out_of_omega = false;
    for (const auto& q : cubes)
        for (int dy = 0; dy < (g.dim() == 2 ? q.len : 1); ++dy)
            for (int dx = 0; dx < q.len; ++dx) {
                std::size_t idx = g.flat_index(q.lo[0] + dx, g.dim() == 2 ? q.lo[1] + dy : 0);
                ++cover[idx];
                if (!omega.member[idx]) out_of_omega = true;
            }
    rep.disjoint = true;
    rep.union_exact = !out_of_omega;
    for (std::size_t i = 0; i < cover.size(); ++i) {
        if (cover[i] > 1) rep.disjoint = false;
        if ((cover[i] > 0) != (omega.member[i] != 0)) rep.union_exact = false;
    }

    std::vector<double> d = distance_field(omega, exterior_is_complement);
    double h = g.cell_width();
    double sqrtn = std::sqrt(static_cast<double>(g.dim()));
    rep.upper_ok = true;
    rep.lower_ok_all = true;
    rep.lower_ok_resolvable = true;
    rep.min_lower_ratio = kInf;
    rep.max_upper_ratio = 0.0;
    for (const auto& q : cubes) {
        double dist = kInf;
        for (int dy = 0; dy < (g.dim() == 2 ? q.len : 1); ++dy)
            for (int dx = 0; dx < q.len; ++dx)
                dist = std::min(dist, d[g.flat_index(q.lo[0] + dx,
                                                     g.dim() == 2 ? q.lo[1] + dy : 0)]);
        double diam = sqrtn * q.len * h;
        double ratio = dist / diam;
        rep.min_lower_ratio = std::min(rep.min_lower_ratio, ratio);
        rep.max_upper_ratio = std::max(rep.max_upper_ratio, ratio);
        if (dist > hi * diam * (1.0 + 1e-12)) rep.upper_ok = false;
        if (dist < lo * diam * (1.0 - 1e-12)) {
            rep.lower_ok_all = false;
            // A finest-level cube below the floor cannot be fixed by any
            // decomposition with exact union: every cover of its cells is at
            // the same distance or closer.
            if (q.len == 1 && dist < lo * sqrtn * h) ++rep.boundary_cells;
            else rep.lower_ok_resolvable = false;
        }
    }
    if (cubes.empty()) {
        rep.min_lower_ratio = 0.0;
        rep.upper_ok = rep.lower_ok_all = rep.lower_ok_resolvable = true;
    }
    return rep;
}

std::string cubes_to_json(const std::vector<Cube>& cubes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : cubes) {
        nlohmann::json j;
        j["center"] = c.dim == 1 ? nlohmann::json{c.center[0]}
                                 : nlohmann::json{c.center[0], c.center[1]};
        j["side"] = c.side;
        arr.push_back(j);
    }
    return arr.dump();
}

} // namespace czlab
