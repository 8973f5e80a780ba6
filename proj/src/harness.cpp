#include "czlab/harness.hpp"

#include "czlab/maximal.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace czlab {

WeakNormResult weak_quasinorm(const GridFunction& g, const WeightedMeasure& mu, double p,
                              bool keep_trace) {
    if (!(p > 0.0)) throw std::invalid_argument("weak_quasinorm requires p > 0");
    if (!(g.grid == mu.grid())) throw std::invalid_argument("weak_quasinorm: grid mismatch");

    WeakNormResult out;
    out.p = p;

    std::vector<std::size_t> order(g.values.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::fabs(g.values[a]) > std::fabs(g.values[b]);
    });

    double vol = g.grid.cell_volume();
    long double cum = 0.0L;
    std::size_t i = 0;
    while (i < order.size()) {
        double v = std::fabs(g.values[order[i]]);
        std::size_t j = i;
        while (j < order.size() && std::fabs(g.values[order[j]]) == v) {
            cum += mu.density.values[order[j]];
            ++j;
        }
        if (v > 0.0) {
            // measure of {|g| > t} for t just below v is the measure of {|g| >= v}
            double t = v * (1.0 - 1e-12);
            double measure = static_cast<double>(cum) * vol;
            double val = std::pow(t, p) * measure;
            if (val > out.sup_tp_mu) {
                out.sup_tp_mu = val;
                out.argmax_t = v;
            }
            if (keep_trace) out.trace.push_back({v, measure});
        }
        i = j;
    }
    out.quasinorm = out.sup_tp_mu > 0.0 ? std::pow(out.sup_tp_mu, 1.0 / p) : 0.0;
    if (keep_trace) std::reverse(out.trace.begin(), out.trace.end());
    return out;
}

namespace {

std::map<std::string, std::string> parse_kv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(in, line)) {
        auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        auto trim = [](std::string s) {
            auto a = s.find_first_not_of(" \t\r");
            auto b = s.find_last_not_of(" \t\r");
            return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
        };
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (!key.empty()) kv[key] = value;
    }
    return kv;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

WeightSpecEntry parse_weight(const std::string& text) {
    auto parts = split(text, ':');
    WeightSpecEntry w;
    if (parts.empty()) throw std::invalid_argument("empty weight spec");
    w.kind = parts[0];
    if (w.kind == "const") {
        w.value = parts.size() > 1 ? std::stod(parts[1]) : 1.0;
    } else if (w.kind == "power") {
        if (parts.size() < 2) throw std::invalid_argument("power weight needs an exponent");
        w.value = std::stod(parts[1]);
        if (parts.size() > 2) w.center[0] = std::stod(parts[2]);
        if (parts.size() > 3) w.center[1] = std::stod(parts[3]);
    } else {
        throw std::invalid_argument("unknown weight kind: " + w.kind);
    }
    return w;
}

FunctionSpecEntry parse_function(const std::string& text) {
    auto parts = split(text, ':');
    FunctionSpecEntry f;
    if (parts.empty()) throw std::invalid_argument("empty function spec");
    f.kind = parts[0];
    if (f.kind == "indicator") {
        if (parts.size() < 3) throw std::invalid_argument("indicator needs bounds a:b");
        f.a[0] = std::stod(parts[1]);
        f.b[0] = std::stod(parts[2]);
        if (parts.size() > 4) {
            f.a[1] = std::stod(parts[3]);
            f.b[1] = std::stod(parts[4]);
        }
    } else if (f.kind == "tent") {
        if (parts.size() < 3)
            throw std::invalid_argument("tent needs center:halfwidth");
        f.a[0] = std::stod(parts[1]);   // center
        f.b[0] = std::stod(parts[2]);   // halfwidth
        if (parts.size() > 3) f.a[1] = std::stod(parts[3]);
    } else if (f.kind == "zero") {
        // explicitly vanishing input
    } else {
        throw std::invalid_argument("unknown function kind: " + f.kind);
    }
    return f;
}

} // namespace

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
    return from_map(parse_kv_file(path));
}

ExperimentConfig ExperimentConfig::from_map(const std::map<std::string, std::string>& kv) {
    ExperimentConfig cfg;
    auto get = [&kv](const std::string& key) -> const std::string* {
        auto it = kv.find(key);
        return it == kv.end() ? nullptr : &it->second;
    };
    if (auto v = get("n")) cfg.n = std::stoi(*v);
    if (auto v = get("m")) cfg.m = std::stoi(*v);
    if (auto v = get("N")) cfg.N = std::stoi(*v);
    if (auto v = get("L")) cfg.L = std::stod(*v);
    if (auto v = get("kernel")) cfg.kernel = *v;
    if (auto v = get("epsilon")) cfg.epsilon = (*v == "h") ? -1.0 : std::stod(*v);
    if (auto v = get("t_mode")) cfg.t_mode = *v;
    if (auto v = get("seed")) cfg.seed = std::stoull(*v);
    if (auto v = get("out_dir")) cfg.out_dir = *v;
    if (auto v = get("config_id")) cfg.config_id = *v;
    if (auto v = get("family")) cfg.family = *v;
    if (auto v = get("allow_large")) cfg.allow_large = (*v == "true" || *v == "1");
    for (int i = 1; i <= cfg.m; ++i) {
        if (auto v = get("weight." + std::to_string(i)))
            cfg.weights.push_back(parse_weight(*v));
        if (auto v = get("f." + std::to_string(i)))
            cfg.functions.push_back(parse_function(*v));
        cfg.scales.push_back(1.0);
        if (auto v = get("scale." + std::to_string(i))) cfg.scales.back() = std::stod(*v);
    }
    if (cfg.n != 1 && cfg.n != 2) throw std::invalid_argument("config: n must be 1 or 2");
    if (cfg.m < 1 || cfg.m > 3) throw std::invalid_argument("config: m must be 1, 2, or 3");
    for (const auto& w : cfg.weights)
        if (w.kind == "power" && (w.value < 0.0 || w.value >= 1.0))
            throw std::invalid_argument("config: power weight exponents must lie in [0, 1)");
    return cfg;
}

Grid make_grid(const ExperimentConfig& cfg) { return Grid(cfg.n, cfg.L, cfg.N); }

Weight make_weight(const Grid& g, const WeightSpecEntry& spec) {
    if (spec.kind == "const") return constant_weight(g, spec.value);
    if (spec.kind == "power") return power_weight(g, spec.value, spec.center);
    throw std::invalid_argument("unknown weight kind: " + spec.kind);
}

GridFunction make_function(const Grid& g, const FunctionSpecEntry& spec) {
    if (spec.kind == "zero") return GridFunction(g, 0.0);
    if (spec.kind == "indicator") {
        return sample_function(g, [&](double x, double y) {
            bool in = x >= spec.a[0] && x < spec.b[0];
            if (g.dim() == 2) in = in && y >= spec.a[1] && y < spec.b[1];
            return in ? 1.0 : 0.0;
        });
    }
    if (spec.kind == "tent") {
        return sample_function(g, [&](double x, double y) {
            double r = g.dim() == 1 ? std::fabs(x - spec.a[0])
                                    : std::max(std::fabs(x - spec.a[0]), std::fabs(y - spec.a[1]));
            return std::max(0.0, 1.0 - r / spec.b[0]);
        });
    }
    throw std::invalid_argument("unknown function kind: " + spec.kind);
}

FamilySpec resolve_family(const ExperimentConfig& cfg, const Grid& g) {
    if (cfg.family == "default") return default_family(g);
    return family_from_name(cfg.family);
}

std::string Theorem4Report::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    j["config_id"] = config_id;
    j["m"] = m;
    j["characteristic_exponent"] = characteristic_exponent;
    j["lhs_sup"] = lhs_sup;
    j["lhs_quasinorm"] = lhs_quasinorm;
    j["rhs_norm_product"] = rhs_norm_product;
    j["nu_characteristic"] = nu_characteristic;
    j["rhs"] = rhs;
    j["ratio"] = ratio;
    if (m == 1) j["linear_case_bound"] = linear_case_bound;
    j["note"] = "kernel boundedness is probed empirically via the strong-type "
                "ratio battery, not proven; the ratio is a diagnostic, no bound "
                "on it is asserted";
    return j.dump(2);
}

std::string Theorem4Report::trace_csv() const {
    std::ostringstream os;
    os << "config_id,t,level_measure,t_pow_p_times_measure\n";
    os.precision(17);
    for (const auto& row : trace)
        os << config_id << "," << row[0] << "," << row[1] << "," << row[2] << "\n";
    return os.str();
}

Theorem4Report theorem4_experiment(const ExperimentConfig& cfg) {
    Grid g = make_grid(cfg);
    KernelSpec kernel = make_kernel(cfg.kernel);
    if (kernel.m != cfg.m || kernel.n != cfg.n)
        throw std::invalid_argument("config: kernel does not match (n, m)");
    // Worst-case kernel-evaluation count N^{n(m+1)}; larger runs need the
    // explicit opt-in.
    double budget = std::pow(static_cast<double>(cfg.N), cfg.n * (cfg.m + 1));
    if (budget > 2e9 && !cfg.allow_large)
        throw std::invalid_argument(
            "config: N exceeds the desk-scale budget for this (n, m); set "
            "allow_large = true to run it anyway");
    if (static_cast<int>(cfg.functions.size()) != cfg.m)
        throw std::invalid_argument("config: need one f.i entry per linear slot");

    std::vector<Weight> weights;
    for (int i = 0; i < cfg.m; ++i)
        weights.push_back(i < static_cast<int>(cfg.weights.size())
                              ? make_weight(g, cfg.weights[i])
                              : constant_weight(g, 1.0));

    std::vector<GridFunction> f;
    for (const auto& spec : cfg.functions) f.push_back(make_function(g, spec));
    for (std::size_t i = 0; i < f.size(); ++i) {
        double s = i < cfg.scales.size() ? cfg.scales[i] : 1.0;
        if (s != 1.0)
            for (auto& v : f[i].values) v *= s;
    }
    for (const auto& fi : f) {
        auto box = fi.support_box();
        if (box[1] < box[0]) continue;  // identically zero
        double lo = g.axis_left(box[0]);
        double hi = g.axis_left(box[1]) + g.cell_width();
        if (lo < -g.half_width() / 2 || hi > g.half_width() / 2)
            throw std::invalid_argument(
                "config: test functions must be supported inside box/2");
        if (g.dim() == 2) {
            double lo2 = g.axis_left(box[2]);
            double hi2 = g.axis_left(box[3]) + g.cell_width();
            if (lo2 < -g.half_width() / 2 || hi2 > g.half_width() / 2)
                throw std::invalid_argument(
                    "config: test functions must be supported inside box/2");
        }
    }

    WeightVector wv(weights, std::vector<double>(cfg.m, 1.0));
    Weight nu = nu_w(wv);
    WeightedMeasure nu_measure = nu.measure();

    // Arguments f_i w_i nu^{(1-m)/m}; the output is multiplied by nu^{-1}.
    double e = (1.0 - cfg.m) / static_cast<double>(cfg.m);
    std::vector<GridFunction> args;
    for (int i = 0; i < cfg.m; ++i) {
        GridFunction u(g, 0.0);
        for (std::size_t c = 0; c < u.values.size(); ++c)
            u.values[c] = f[i].values[c] * weights[i].density.values[c] *
                          std::pow(nu.density.values[c], e);
        args.push_back(std::move(u));
    }

    double epsilon = cfg.epsilon > 0.0 ? cfg.epsilon : g.cell_width();
    OperatorResult T = apply_operator(kernel, args, epsilon);
    GridFunction result(g, 0.0);
    for (std::size_t c = 0; c < result.values.size(); ++c)
        result.values[c] = T.values.values[c] / nu.density.values[c];

    WeakNormResult weak = weak_quasinorm(result, nu_measure, 1.0 / cfg.m, true);

    Theorem4Report rep;
    rep.config_id = cfg.config_id;
    rep.m = cfg.m;
    rep.characteristic_exponent = 2 * cfg.m * cfg.m + 2 * cfg.m - 2;
    rep.lhs_sup = weak.sup_tp_mu;
    rep.lhs_quasinorm = weak.quasinorm;
    rep.rhs_norm_product = 1.0;
    for (int i = 0; i < cfg.m; ++i) {
        GridFunction absf(g, 0.0);
        for (std::size_t c = 0; c < absf.values.size(); ++c)
            absf.values[c] = std::fabs(f[i].values[c]);
        rep.rhs_norm_product *= integrate(absf, weights[i].measure());
    }
    FamilySpec family = resolve_family(cfg, g);
    rep.nu_characteristic = ap_characteristic(nu, 1.0, family).value;
    rep.rhs = std::pow(rep.nu_characteristic, rep.characteristic_exponent) * rep.rhs_norm_product;
    rep.ratio = rep.rhs > 0.0 ? rep.lhs_quasinorm / rep.rhs : 0.0;
    if (cfg.m == 1) {
        double w_ap = rep.nu_characteristic;
        rep.linear_case_bound =
            w_ap * std::max(1.0, std::log(std::exp(1.0) + w_ap)) * rep.rhs_norm_product;
    }

    // t-trace rows (t, measure, t^{1/m} measure).
    std::size_t stride = 1;
    if (cfg.t_mode.rfind("grid:", 0) == 0) {
        std::size_t want = std::stoul(cfg.t_mode.substr(5));
        if (want > 0 && weak.trace.size() > want) stride = weak.trace.size() / want;
    } else if (cfg.t_mode != "exact") {
        throw std::invalid_argument("config: t_mode must be 'exact' or 'grid:<count>'");
    }
    for (std::size_t i = 0; i < weak.trace.size(); i += stride) {
        auto [t, measure] = weak.trace[i];
        rep.trace.push_back({t, measure, std::pow(t, 1.0 / cfg.m) * measure});
    }
    return rep;
}

bool BatteryReport::hard_pass() const {
    for (const auto& c : checks)
        if (c.hard && !c.pass) return false;
    return true;
}

std::string BatteryReport::to_json() const {
    nlohmann::json j;
    j["schema_version"] = 1;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& c : checks) {
        nlohmann::json cj;
        cj["name"] = c.name;
        cj["hard"] = c.hard;
        cj["pass"] = c.pass;
        cj["value"] = c.value;
        if (std::isfinite(c.bound)) cj["bound"] = c.bound;
        else cj["bound"] = "unbounded";
        if (!c.detail.empty()) cj["detail"] = c.detail;
        arr.push_back(cj);
    }
    j["checks"] = arr;
    j["hard_pass"] = hard_pass();
    return j.dump(2);
}

namespace {

// Baseline strong-type ratios frozen from the default battery
// (theorem5_max_ratio with seed 777, 20 inputs, N = 128 and N = 256).
double theorem5_baseline(const std::string& kernel) {
    if (kernel == "hilbert") return 4.105057;
    if (kernel == "riesz2") return 1.180417;
    if (kernel == "riesz3") return 0.594043;
    return -1.0;
}

} // namespace

BatteryReport lemma_battery(const ExperimentConfig& cfg) {
    BatteryReport rep;
    Grid g = make_grid(cfg);
    FamilySpec family = resolve_family(cfg, g);

    std::vector<Weight> weights;
    for (const auto& spec : cfg.weights) weights.push_back(make_weight(g, spec));
    if (weights.empty()) weights.push_back(constant_weight(g, 1.0));
    std::vector<GridFunction> functions;
    for (const auto& spec : cfg.functions) functions.push_back(make_function(g, spec));
    if (functions.empty())
        functions.push_back(make_function(g, FunctionSpecEntry{}));

    auto add = [&rep](BatteryCheck c) { rep.checks.push_back(std::move(c)); };

    // Lemma 1: [w^γ]_{A1} <= [w]_{A1}^γ on the config weights.
    for (std::size_t i = 0; i < weights.size(); ++i)
        for (double gamma : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            auto [lhs, rhs] = power_of_weight_check(weights[i], gamma, family);
            BatteryCheck c;
            c.name = "lemma1_power_w" + std::to_string(i + 1) + "_g" + std::to_string(gamma);
            c.value = lhs;
            c.bound = rhs;
            c.pass = lhs <= rhs + 1e-12 * std::max(1.0, rhs);
            add(std::move(c));
        }

    // Remark 2 inequalities for the vector with P = (1, ..., 1).
    if (weights.size() > 1 || cfg.m == 1) {
        std::vector<Weight> vec = weights;
        while (static_cast<int>(vec.size()) < cfg.m) vec.push_back(constant_weight(g, 1.0));
        WeightVector wv(vec, std::vector<double>(vec.size(), 1.0));
        Remark2Report r2 = remark2_check(wv, family);
        BatteryCheck c;
        c.name = "remark2_min_residual";
        c.value = r2.min_residual;
        c.bound = -1e-9;
        c.pass = r2.min_residual >= -1e-9;
        c.detail = r2.to_json();
        add(std::move(c));
    }

    // m = 1 coincidence of the multilinear and linear characteristics.
    {
        WeightVector single({weights.front()}, {2.0});
        double ml = multilinear_characteristic(single, family).value;
        double ap = ap_characteristic(weights.front(), 2.0, family).value;
        BatteryCheck c;
        c.name = "m1_coincidence_p2";
        c.value = std::fabs(std::pow(ml, 2.0) - ap);
        c.bound = 1e-12 * std::max(1.0, ap);
        c.pass = c.value <= c.bound;
        add(std::move(c));
    }

    // Weak (1,1) ratios of M_w across the weight battery.
    double unweighted_ratio = 0.0;
    for (std::size_t fi = 0; fi < functions.size(); ++fi) {
        if (lp_norm(functions[fi], WeightedMeasure::lebesgue(g),
                    std::numeric_limits<double>::infinity()) == 0.0)
            continue;
        double base = weak11_ratio(functions[fi], WeightedMeasure::lebesgue(g), family);
        unweighted_ratio = std::max(unweighted_ratio, base);
        BatteryCheck c;
        c.name = "weak11_unweighted_f" + std::to_string(fi + 1);
        c.value = base;
        c.bound = 4.0;
        c.pass = base <= 4.0;
        add(std::move(c));
        for (std::size_t wi = 0; wi < weights.size(); ++wi) {
            double ratio = weak11_ratio(functions[fi], weights[wi].measure(), family);
            BatteryCheck c2;
            c2.name = "weak11_w" + std::to_string(wi + 1) + "_f" + std::to_string(fi + 1);
            c2.value = ratio;
            c2.bound = 1.5 * base;
            c2.pass = ratio <= c2.bound;
            add(std::move(c2));
        }
    }

    // Radial majorant bound (1D only).
    if (g.dim() == 1) {
        for (std::size_t fi = 0; fi < functions.size(); ++fi) {
            double scale = lp_norm(functions[fi], WeightedMeasure::lebesgue(g),
                                   std::numeric_limits<double>::infinity());
            if (scale == 0.0) continue;
            RadialProfile ball{[](double) { return 0.5; }, 1.0, "indicator"};
            RadialMajorantReport ind = radial_majorant_check(functions[fi], ball);
            BatteryCheck c;
            c.name = "lemma3_indicator_f" + std::to_string(fi + 1);
            c.value = ind.max_violation;
            c.bound = 1e-12 * ind.k_l1 * scale;
            c.pass = ind.max_violation <= c.bound;
            add(std::move(c));

            double r = g.half_width() / 8.0;
            // Monotone envelope of the r^δ / |x|^{n+δ} tail cut at r/2.
            RadialProfile tail{[r](double s) {
                                   double d = std::max(s, 0.5 * r);
                                   return r / (d * d);
                               },
                               g.half_width(), "power_tail"};
            RadialMajorantReport tl = radial_majorant_check(functions[fi], tail);
            BatteryCheck c2;
            c2.name = "lemma3_power_tail_f" + std::to_string(fi + 1);
            c2.value = tl.max_violation;
            c2.bound = 1e-12 * tl.k_l1 * scale;
            c2.pass = tl.max_violation <= c2.bound;
            add(std::move(c2));
        }
    }

    // Two-sided Hörmander estimate on a single centered cube.
    if (g.dim() == 1) {
        KernelSpec kernel = make_kernel(cfg.kernel);
        if (kernel.n == 1) {
            std::vector<std::vector<Cube>> fams(1);
            fams[0].push_back(Cube{1, {0.0, 0.0}, g.half_width() / 8.0});
            Lemma4Report l4 = lemma4_estimate(kernel, weights.front(), fams, family);
            BatteryCheck c;
            c.name = "lemma4_finite";
            c.value = l4.lhs;
            c.bound = std::numeric_limits<double>::infinity();
            c.pass = std::isfinite(l4.lhs) && std::isfinite(l4.rhs) && l4.rhs > 0.0;
            c.detail = "lhs/rhs = " + std::to_string(l4.lhs / l4.rhs);
            add(std::move(c));

            Lemma4Report wider = lemma4_estimate(kernel, weights.front(), fams, family,
                                                 3.0 * std::sqrt(1.0));
            BatteryCheck c2;
            c2.name = "lemma4_exclusion_monotone";
            c2.value = wider.lhs;
            c2.bound = l4.lhs;
            c2.pass = wider.lhs <= l4.lhs * (1.0 + 1e-12);
            add(std::move(c2));
        }
    }

    // Empirical strong type against the frozen baseline.
    {
        double baseline = theorem5_baseline(cfg.kernel);
        if (baseline > 0.0 && g.dim() == 1) {
            KernelSpec kernel = make_kernel(cfg.kernel);
            double worst = 0.0;
            for (int N : {128, 256})
                worst = std::max(worst,
                                 theorem5_max_ratio(kernel, N, g.half_width(), 10, 777));
            BatteryCheck c;
            c.name = "theorem5_ratio";
            c.value = worst;
            c.bound = 2.0 * baseline;
            c.pass = worst <= c.bound;
            add(std::move(c));
        }
    }

    // Decomposition property suites on the config data.
    {
        Weight nu = weights.size() > 1
                        ? nu_w(WeightVector(weights,
                                            std::vector<double>(weights.size(), 1.0)))
                        : weights.front();
        WeightedMeasure nu_measure = nu.measure();
        for (std::size_t fi = 0; fi < functions.size(); ++fi) {
            double l1 = lp_norm(functions[fi], nu_measure, 1.0);
            if (l1 == 0.0) continue;
            double total = integrate(GridFunction(g, 1.0), nu_measure);
            double height = 2.0 * l1 / total;  // root average is half the height
            CZDecomposition cz = cz_decompose(functions[fi], nu_measure, height);
            BatteryCheck c;
            c.name = "cz_properties_f" + std::to_string(fi + 1);
            c.value = cz.all_pass() ? 1.0 : 0.0;
            c.bound = 1.0;
            c.pass = cz.all_pass();
            add(std::move(c));

            GridFunction nonneg(g, 0.0);
            for (std::size_t cc = 0; cc < nonneg.values.size(); ++cc)
                nonneg.values[cc] = std::fabs(functions[fi].values[cc]);
            double t_root = height;
            double t = std::pow(t_root, static_cast<double>(cfg.m));
            NTVDecomposition ntv = ntv_decompose(nonneg, nu_measure, t, cfg.m);
            BatteryCheck c2;
            c2.name = "ntv_properties_f" + std::to_string(fi + 1);
            c2.value = ntv.all_pass() ? 1.0 : 0.0;
            c2.bound = 1.0;
            c2.pass = ntv.all_pass();
            add(std::move(c2));
        }
    }

    return rep;
}

} // namespace czlab
