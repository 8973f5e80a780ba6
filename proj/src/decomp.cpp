#include "czlab/decomp.hpp"

#include "czlab/weights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace czlab {

namespace {

int int_log2(int n) {
    int k = 0;
    while ((1 << k) < n) ++k;
    return k;
}

// Per-level sums of |phi| nu h^n, phi nu h^n, and nu h^n over the dyadic
// tree of the box. Level k blocks have 2^k cells per axis.
struct DyadicSums {
    int levels = 0;
    int n = 0;
    int dim = 1;
    std::vector<std::vector<long double>> abs_phi_nu;
    std::vector<std::vector<long double>> phi_nu;
    std::vector<std::vector<long double>> nu;

    long double avg_abs(int level, std::size_t c) const {
        return abs_phi_nu[level][c] / nu[level][c];
    }
};

DyadicSums build_sums(const GridFunction& phi, const WeightedMeasure& nu) {
    const Grid& g = phi.grid;
    DyadicSums s;
    s.dim = g.dim();
    s.n = g.cells_per_axis();
    s.levels = int_log2(s.n) + 1;
    s.abs_phi_nu.resize(s.levels);
    s.phi_nu.resize(s.levels);
    s.nu.resize(s.levels);
    double vol = g.cell_volume();
    std::size_t count = g.cell_count();
    s.abs_phi_nu[0].resize(count);
    s.phi_nu[0].resize(count);
    s.nu[0].resize(count);
    for (std::size_t c = 0; c < count; ++c) {
        long double d = nu.density.values[c] * static_cast<long double>(vol);
        s.nu[0][c] = d;
        s.phi_nu[0][c] = phi.values[c] * d;
        s.abs_phi_nu[0][c] = std::fabs(phi.values[c]) * d;
    }
    for (int k = 1; k < s.levels; ++k) {
        int nk = s.n >> k, prev = s.n >> (k - 1);
        std::size_t sz = s.dim == 1 ? nk : static_cast<std::size_t>(nk) * nk;
        s.abs_phi_nu[k].resize(sz);
        s.phi_nu[k].resize(sz);
        s.nu[k].resize(sz);
        for (std::size_t c = 0; c < sz; ++c) {
            int x = s.dim == 1 ? static_cast<int>(c) : static_cast<int>(c % nk);
            int y = s.dim == 1 ? 0 : static_cast<int>(c / nk);
            long double a = 0.0L, b = 0.0L, d = 0.0L;
            for (int sy = 0; sy < (s.dim == 2 ? 2 : 1); ++sy)
                for (int sx = 0; sx < 2; ++sx) {
                    std::size_t cc = s.dim == 1
                                         ? static_cast<std::size_t>(2 * x + sx)
                                         : static_cast<std::size_t>(2 * y + sy) * prev +
                                               (2 * x + sx);
                    a += s.abs_phi_nu[k - 1][cc];
                    b += s.phi_nu[k - 1][cc];
                    d += s.nu[k - 1][cc];
                }
            s.abs_phi_nu[k][c] = a;
            s.phi_nu[k][c] = b;
            s.nu[k][c] = d;
        }
    }
    return s;
}

PropertyCheck make_check(const std::string& name, double bound, double achieved,
                         double tolerance = 0.0) {
    PropertyCheck c;
    c.name = name;
    c.bound = bound;
    c.achieved = achieved;
    c.slack = bound - achieved;
    c.pass = achieved <= bound + tolerance;
    return c;
}

nlohmann::json properties_json(const std::vector<PropertyCheck>& props) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& p : props) {
        nlohmann::json j;
        j["name"] = p.name;
        j["bound"] = p.bound;
        j["achieved"] = p.achieved;
        j["slack"] = p.slack;
        j["pass"] = p.pass;
        arr.push_back(j);
    }
    return arr;
}

nlohmann::json grid_cubes_json(const Grid& g, const std::vector<GridCube>& cubes) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& q : cubes) {
        Cube c = q.to_cube(g);
        nlohmann::json j;
        j["center"] = c.dim == 1 ? nlohmann::json{c.center[0]}
                                 : nlohmann::json{c.center[0], c.center[1]};
        j["side"] = c.side;
        arr.push_back(j);
    }
    return arr;
}

} // namespace

bool CZDecomposition::all_pass() const {
    for (const auto& p : properties)
        if (!p.pass) return false;
    return true;
}

std::string CZDecomposition::report_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["engine"] = "calderon_zygmund";
    j["height"] = height;
    j["nu_a1_dyadic"] = nu_a1_dyadic;
    std::vector<GridCube> cubes;
    for (const auto& b : bad_parts) cubes.push_back(b.cube);
    j["cubes"] = grid_cubes_json(good.grid, cubes);
    j["properties"] = properties_json(properties);
    j["all_pass"] = all_pass();
    return j.dump(2);
}

CZDecomposition cz_decompose(const GridFunction& phi, const WeightedMeasure& nu, double height) {
    if (!(phi.grid == nu.grid())) throw std::invalid_argument("cz_decompose: grid mismatch");
    if (!(height > 0.0)) throw std::invalid_argument("cz_decompose: height must be positive");
    const Grid& g = phi.grid;
    const int n = g.cells_per_axis();
    const int dim = g.dim();

    DyadicSums sums = build_sums(phi, nu);

    CZDecomposition out(g);
    out.good = phi;
    out.height = height;
    out.nu_a1_dyadic =
        ap_characteristic(Weight(nu.density), 1.0, {FamilyKind::Dyadic}).value;

    double phi_l1 = static_cast<double>(sums.abs_phi_nu[sums.levels - 1][0]);
    if (phi_l1 == 0.0) {
        // phi vanishes: nothing to decompose, properties hold vacuously.
        out.properties.push_back(make_check("good_sup_bound", 0.0, 0.0, 1e-300));
        return out;
    }

    // Root: smallest dyadic cube containing supp(phi) whose nu-average of
    // |phi| does not exceed the height.
    auto supp = phi.support_box();
    int root_level = 0, root_x = 0, root_y = 0;
    bool found_root = false;
    for (int k = 0; k < sums.levels; ++k) {
        if (supp[0] >> k != supp[1] >> k || (dim == 2 && supp[2] >> k != supp[3] >> k))
            continue;
        int bx = supp[0] >> k, by = dim == 2 ? supp[2] >> k : 0;
        std::size_t c = dim == 1 ? static_cast<std::size_t>(bx)
                                 : static_cast<std::size_t>(by) * (n >> k) + bx;
        if (static_cast<double>(sums.avg_abs(k, c)) <= height) {
            root_level = k;
            root_x = bx;
            root_y = by;
            found_root = true;
            break;
        }
    }
    if (!found_root) {
        std::ostringstream os;
        os << "cz_decompose: no dyadic root has nu-average <= height " << height
           << "; the box average is "
           << static_cast<double>(sums.avg_abs(sums.levels - 1, 0))
           << " -- enlarge the box or raise the height";
        throw std::invalid_argument(os.str());
    }

    // Stopping time: select maximal dyadic cubes with average > height.
    struct Node { int level, bx, by; };
    std::vector<Node> stack{{root_level, root_x, root_y}};
    std::vector<Node> selected;
    double max_selected_avg = 0.0;
    bool sandwich_ok = true;
    while (!stack.empty()) {
        Node nd = stack.back();
        stack.pop_back();
        if (nd.level == 0) continue;
        int child_nk = n >> (nd.level - 1);
        for (int sy = 0; sy < (dim == 2 ? 2 : 1); ++sy)
            for (int sx = 0; sx < 2; ++sx) {
                Node ch{nd.level - 1, 2 * nd.bx + sx, 2 * nd.by + sy};
                std::size_t c = dim == 1 ? static_cast<std::size_t>(ch.bx)
                                         : static_cast<std::size_t>(ch.by) * child_nk + ch.bx;
                if (sums.nu[ch.level][c] == 0.0L) continue;
                double avg = static_cast<double>(sums.avg_abs(ch.level, c));
                if (avg > height) {
                    selected.push_back(ch);
                    max_selected_avg = std::max(max_selected_avg, avg);
                    // parent average must not exceed the height
                    std::size_t pc = dim == 1
                                         ? static_cast<std::size_t>(nd.bx)
                                         : static_cast<std::size_t>(nd.by) * (n >> nd.level) +
                                               nd.bx;
                    if (static_cast<double>(sums.avg_abs(nd.level, pc)) > height)
                        sandwich_ok = false;
                } else {
                    stack.push_back(ch);
                }
            }
    }

    // Split into good and bad parts.
    double vol = g.cell_volume();
    long double good_l1 = 0.0L, bad_l1 = 0.0L, sum_cube_nu = 0.0L;
    double max_mean_zero = 0.0, max_b_ratio = 0.0;
    for (const auto& s : selected) {
        int len = 1 << s.level;
        GridCube q{{s.bx * len, s.by * len}, len};
        std::size_t c = dim == 1 ? static_cast<std::size_t>(s.bx)
                                 : static_cast<std::size_t>(s.by) * (n >> s.level) + s.bx;
        long double nu_q = sums.nu[s.level][c];
        double avg = static_cast<double>(sums.phi_nu[s.level][c] / nu_q);
        GridFunction part(g, 0.0);
        long double part_l1 = 0.0L, part_mean = 0.0L;
        for (int dy = 0; dy < (dim == 2 ? len : 1); ++dy)
            for (int dx = 0; dx < len; ++dx) {
                std::size_t idx = g.flat_index(q.lo[0] + dx, dim == 2 ? q.lo[1] + dy : 0);
                double b = phi.values[idx] - avg;
                part.values[idx] = b;
                out.good.values[idx] = avg;
                long double w = nu.density.values[idx] * static_cast<long double>(vol);
                part_l1 += std::fabs(b) * w;
                part_mean += b * w;
            }
        sum_cube_nu += nu_q;
        bad_l1 += part_l1;
        max_mean_zero = std::max(
            max_mean_zero, static_cast<double>(std::fabs(part_mean)) /
                               (height * static_cast<double>(nu_q)));
        max_b_ratio = std::max(max_b_ratio,
                               static_cast<double>(part_l1 / nu_q));
        out.bad_parts.push_back({q, std::move(part)});
    }

    long double good_sup = 0.0L;
    for (std::size_t c = 0; c < out.good.values.size(); ++c) {
        good_sup = std::max(good_sup, static_cast<long double>(std::fabs(out.good.values[c])));
        good_l1 += std::fabs(out.good.values[c]) * nu.density.values[c] *
                   static_cast<long double>(vol);
    }

    const double dyadic_const = std::pow(2.0, dim) * out.nu_a1_dyadic;
    out.properties.push_back(make_check("good_sup_bound", dyadic_const * height,
                                        static_cast<double>(good_sup),
                                        1e-12 * dyadic_const * height));
    out.properties.push_back(
        make_check("good_l1_bound", phi_l1, static_cast<double>(good_l1), 1e-12 * phi_l1));
    out.properties.push_back(make_check("cube_measure_sum", phi_l1 / height,
                                        static_cast<double>(sum_cube_nu),
                                        1e-12 * phi_l1 / height));
    out.properties.push_back(make_check("bad_mean_zero", 1e-10, max_mean_zero));
    out.properties.push_back(make_check("bad_part_l1_bound", 2.0 * dyadic_const * height,
                                        max_b_ratio, 1e-12 * dyadic_const * height));
    out.properties.push_back(
        make_check("bad_l1_bound", 2.0 * phi_l1, static_cast<double>(bad_l1), 1e-12 * phi_l1));
    out.properties.push_back(make_check("stopping_sandwich", 1.0, sandwich_ok ? 0.0 : 2.0));
    return out;
}

bool NTVDecomposition::all_pass() const {
    for (const auto& p : properties)
        if (!p.pass) return false;
    return true;
}

std::string NTVDecomposition::report_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["engine"] = "nazarov_treil_volberg";
    j["t"] = t;
    j["t_root"] = t_root;
    j["m"] = m;
    j["nu_a1"] = nu_a1;
    j["c_weak"] = c_weak;
    j["family"] = family_name(family);
    j["omega_cells"] = omega.count();
    j["cubes"] = grid_cubes_json(good.grid, whitney_cubes);
    nlohmann::json ecubes = nlohmann::json::array();
    for (const auto& e : e_cubes) {
        nlohmann::json ej;
        ej["center"] = e.dim == 1 ? nlohmann::json{e.center[0]}
                                  : nlohmann::json{e.center[0], e.center[1]};
        ej["side"] = e.side;
        ecubes.push_back(ej);
    }
    j["e_cubes"] = ecubes;
    j["properties"] = properties_json(properties);
    j["all_pass"] = all_pass();
    return j.dump(2);
}

NTVDecomposition ntv_decompose(const GridFunction& phi, const WeightedMeasure& nu,
                               double t, int m) {
    if (!(phi.grid == nu.grid())) throw std::invalid_argument("ntv_decompose: grid mismatch");
    if (!(t > 0.0)) throw std::invalid_argument("ntv_decompose: t must be positive");
    if (m < 1) throw std::invalid_argument("ntv_decompose: m must be >= 1");
    for (double v : phi.values)
        if (v < 0.0) throw std::invalid_argument("ntv_decompose: phi must be nonnegative");
    const Grid& g = phi.grid;
    double t_root = std::pow(t, 1.0 / m);

    double total = integrate(GridFunction(g, 1.0), nu);
    if (!(total > 1.0 / t_root))
        throw std::invalid_argument(
            "ntv_decompose: non-triviality violated, nu(box) <= t^{-1/m}");

    FamilySpec family{g.dim() == 1 ? FamilyKind::Exhaustive1D : FamilyKind::AllSquares2D};

    NTVDecomposition out(g);
    out.t = t;
    out.t_root = t_root;
    out.m = m;
    out.family = family;
    out.good = phi;
    out.omega = CellSet(g);

    MaximalResult mr = weighted_maximal(phi, nu, family);
    for (std::size_t c = 0; c < mr.values.values.size(); ++c)
        out.omega.member[c] = mr.values.values[c] > t_root ? 1 : 0;

    double vol = g.cell_volume();
    long double phi_l1 = 0.0L;
    for (std::size_t c = 0; c < phi.values.size(); ++c)
        phi_l1 += phi.values[c] * nu.density.values[c] * static_cast<long double>(vol);

    out.nu_a1 = ap_characteristic(Weight(nu.density), 1.0, family).value;

    // Recorded weak (1,1) ratio of M_nu for this phi (sup over the distinct
    // maximal values), the constant property (2) is certified against.
    if (phi_l1 > 0.0L) {
        std::vector<std::size_t> order(mr.values.values.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            return mr.values.values[a] > mr.values.values[b];
        });
        long double cum = 0.0L;
        double sup = 0.0;
        std::size_t i = 0;
        while (i < order.size()) {
            double v = mr.values.values[order[i]];
            std::size_t j = i;
            while (j < order.size() && mr.values.values[order[j]] == v) {
                cum += nu.density.values[order[j]];
                ++j;
            }
            if (v > 0.0)
                sup = std::max(sup, v * static_cast<double>(cum) * vol);
            i = j;
        }
        out.c_weak = sup / static_cast<double>(phi_l1);
    }

    long double omega_nu = 0.0L;
    for (std::size_t c = 0; c < out.omega.member.size(); ++c)
        if (out.omega.member[c])
            omega_nu += nu.density.values[c] * static_cast<long double>(vol);

    if (!out.omega.empty()) {
        out.whitney_cubes = whitney_decompose(out.omega);
        for (const auto& q : out.whitney_cubes) {
            GridFunction part(g, 0.0);
            for (int dy = 0; dy < (g.dim() == 2 ? q.len : 1); ++dy)
                for (int dx = 0; dx < q.len; ++dx) {
                    std::size_t idx =
                        g.flat_index(q.lo[0] + dx, g.dim() == 2 ? q.lo[1] + dy : 0);
                    part.values[idx] = phi.values[idx];
                    out.good.values[idx] = 0.0;
                }
            out.bad_parts.push_back({q, std::move(part)});
        }
    }

    // Property (1): sup of g is capped by the level-set threshold (exact),
    // and g is a restriction of phi.
    double good_sup = 0.0;
    long double good_l1 = 0.0L;
    for (std::size_t c = 0; c < out.good.values.size(); ++c) {
        good_sup = std::max(good_sup, out.good.values[c]);
        good_l1 += out.good.values[c] * nu.density.values[c] * static_cast<long double>(vol);
    }
    out.properties.push_back(make_check("good_sup_bound", t_root, good_sup));
    out.properties.push_back(make_check("good_l1_bound", static_cast<double>(phi_l1),
                                        static_cast<double>(good_l1),
                                        1e-12 * static_cast<double>(phi_l1)));

    // Property (2): the cubes tile Omega exactly and nu(Omega) obeys the
    // recorded weak (1,1) constant.
    long double sum_cube_nu = 0.0L, bad_l1 = 0.0L;
    double max_b_ratio = 0.0;
    double dil_factor = 17.0 * std::sqrt(static_cast<double>(g.dim()));
    double prop3_const = std::pow(dil_factor, g.dim()) * out.nu_a1;
    bool dilation_meets_complement = true;
    for (const auto& b : out.bad_parts) {
        long double nu_q = 0.0L, b_l1 = 0.0L;
        for (int dy = 0; dy < (g.dim() == 2 ? b.cube.len : 1); ++dy)
            for (int dx = 0; dx < b.cube.len; ++dx) {
                std::size_t idx =
                    g.flat_index(b.cube.lo[0] + dx, g.dim() == 2 ? b.cube.lo[1] + dy : 0);
                nu_q += nu.density.values[idx] * static_cast<long double>(vol);
                b_l1 += b.part.values[idx] * nu.density.values[idx] *
                        static_cast<long double>(vol);
            }
        sum_cube_nu += nu_q;
        bad_l1 += b_l1;
        max_b_ratio =
            std::max(max_b_ratio, static_cast<double>(b_l1 / nu_q) / t_root);

        // The 17 sqrt(n) dilation must reach the complement (or the box
        // boundary, which the harness counts as exterior).
        Cube dil = dilate(b.cube.to_cube(g), dil_factor);
        bool meets = false;
        for (int axis = 0; axis < g.dim() && !meets; ++axis)
            if (dil.lo(axis) < -g.half_width() || dil.hi(axis) > g.half_width()) meets = true;
        if (!meets) {
            int n = g.cells_per_axis();
            double h = g.cell_width();
            int x0 = std::max(0, static_cast<int>(std::floor((dil.lo(0) + g.half_width()) / h)));
            int x1 = std::min(n - 1,
                              static_cast<int>(std::ceil((dil.hi(0) + g.half_width()) / h)));
            int y0 = 0, y1 = 0;
            if (g.dim() == 2) {
                y0 = std::max(0,
                              static_cast<int>(std::floor((dil.lo(1) + g.half_width()) / h)));
                y1 = std::min(n - 1,
                              static_cast<int>(std::ceil((dil.hi(1) + g.half_width()) / h)));
            }
            for (int iy = y0; iy <= y1 && !meets; ++iy)
                for (int ix = x0; ix <= x1 && !meets; ++ix)
                    if (!out.omega.member[g.flat_index(ix, iy)]) meets = true;
        }
        dilation_meets_complement = dilation_meets_complement && meets;
    }
    out.properties.push_back(make_check(
        "cube_measure_sum_equals_omega", static_cast<double>(omega_nu),
        static_cast<double>(sum_cube_nu), 1e-12 * static_cast<double>(omega_nu)));
    double weak_bound =
        out.c_weak * static_cast<double>(phi_l1) / t_root;
    out.properties.push_back(make_check("cube_measure_weak_bound", weak_bound,
                                        static_cast<double>(sum_cube_nu),
                                        1e-12 * weak_bound));
    out.properties.push_back(
        make_check("bad_part_l1_bound", prop3_const, max_b_ratio, 1e-12 * prop3_const));
    out.properties.push_back(make_check("bad_l1_bound", static_cast<double>(phi_l1),
                                        static_cast<double>(bad_l1),
                                        1e-12 * static_cast<double>(phi_l1)));
    out.properties.push_back(make_check("dilation_meets_complement", 1.0,
                                        dilation_meets_complement ? 0.0 : 2.0));

    out.e_cubes = construct_e_cubes(out, nu, t);
    return out;
}

std::vector<Cube> construct_e_cubes(const NTVDecomposition& d, const WeightedMeasure& nu,
                                    double t) {
    const Grid& g = nu.grid();
    double t_root = std::pow(t, 1.0 / d.m);
    double dil_factor = 17.0 * std::sqrt(static_cast<double>(g.dim()));
    double inv_const = std::pow(dil_factor, -g.dim()) / d.nu_a1;
    double vol = g.cell_volume();

    std::vector<Cube> out;
    for (const auto& b : d.bad_parts) {
        long double b_l1 = 0.0L, nu_q = 0.0L;
        for (int dy = 0; dy < (g.dim() == 2 ? b.cube.len : 1); ++dy)
            for (int dx = 0; dx < b.cube.len; ++dx) {
                std::size_t idx =
                    g.flat_index(b.cube.lo[0] + dx, g.dim() == 2 ? b.cube.lo[1] + dy : 0);
                b_l1 += std::fabs(b.part.values[idx]) * nu.density.values[idx] *
                        static_cast<long double>(vol);
                nu_q += nu.density.values[idx] * static_cast<long double>(vol);
            }
        Cube q = b.cube.to_cube(g);
        double target = static_cast<double>(b_l1) * inv_const / t_root;
        if (target == 0.0) {
            out.push_back(Cube{g.dim(), q.center, 0.0});
            continue;
        }
        if (target > static_cast<double>(nu_q) * (1.0 + 1e-9))
            throw std::runtime_error(
                "construct_e_cubes: target measure exceeds nu(Q); property (3) violated");

        double lo = 0.0, hi = q.side;
        for (int it = 0; it < 200; ++it) {
            double mid = 0.5 * (lo + hi);
            Cube e{g.dim(), q.center, mid};
            if (cube_measure(e, nu) < target) lo = mid;
            else hi = mid;
            if (hi - lo <= 1e-15 * q.side) break;
        }
        Cube e{g.dim(), q.center, hi};
        double achieved = cube_measure(e, nu);
        if (std::fabs(achieved - target) > 1e-9 * target)
            throw std::runtime_error("construct_e_cubes: bisection failed to meet the target");
        out.push_back(e);
    }
    return out;
}

} // namespace czlab
