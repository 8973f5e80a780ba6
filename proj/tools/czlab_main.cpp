#include "czlab/decomp.hpp"
#include "czlab/harness.hpp"
#include "czlab/maximal.hpp"
#include "czlab/operators.hpp"
#include "czlab/weights.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#ifdef _OPENMP
#include <omp.h>
#endif

using namespace czlab;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitConfigError = 2;

struct GlobalOpts {
    std::string config_path;
    std::string out_dir;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = 0;
};

ExperimentConfig load_config(const GlobalOpts& g) {
    ExperimentConfig cfg = g.config_path.empty() ? ExperimentConfig{}
                                                 : ExperimentConfig::from_file(g.config_path);
    if (g.seed_set) cfg.seed = g.seed;
    if (!g.out_dir.empty()) cfg.out_dir = g.out_dir;
    return cfg;
}

void write_file(const ExperimentConfig& cfg, const std::string& name,
                const std::string& body) {
    std::filesystem::create_directories(cfg.out_dir);
    std::ofstream out(std::filesystem::path(cfg.out_dir) / name);
    out << body;
}

Weight primary_weight(const ExperimentConfig& cfg, const Grid& g) {
    if (cfg.weights.empty()) return constant_weight(g, 1.0);
    return make_weight(g, cfg.weights.front());
}

Weight nu_of(const ExperimentConfig& cfg, const Grid& g) {
    if (cfg.weights.empty()) return constant_weight(g, 1.0);
    std::vector<Weight> ws;
    for (const auto& spec : cfg.weights) ws.push_back(make_weight(g, spec));
    if (ws.size() == 1) return ws.front();
    return nu_w(WeightVector(ws, std::vector<double>(ws.size(), 1.0)));
}

GridFunction primary_function(const ExperimentConfig& cfg, const Grid& g) {
    if (cfg.functions.empty())
        throw std::invalid_argument("config must provide at least f.1");
    return make_function(g, cfg.functions.front());
}

int run_characteristic(const ExperimentConfig& cfg, double p, bool multilinear) {
    Grid g = make_grid(cfg);
    FamilySpec family = resolve_family(cfg, g);
    std::string body;
    if (multilinear) {
        std::vector<Weight> ws;
        for (const auto& spec : cfg.weights) ws.push_back(make_weight(g, spec));
        if (ws.empty()) throw std::invalid_argument("multilinear characteristic needs weights");
        WeightVector wv(ws, std::vector<double>(ws.size(), 1.0));
        body = multilinear_characteristic(wv, family).to_json();
    } else {
        body = ap_characteristic(primary_weight(cfg, g), p, family).to_json();
    }
    std::cout << body << "\n";
    write_file(cfg, "characteristic_" + cfg.config_id + ".json", body);
    return kExitOk;
}

int run_decompose_cz(const ExperimentConfig& cfg, double height) {
    Grid g = make_grid(cfg);
    GridFunction phi = primary_function(cfg, g);
    WeightedMeasure nu = nu_of(cfg, g).measure();
    if (height <= 0.0) {
        double l1 = lp_norm(phi, nu, 1.0);
        double total = integrate(GridFunction(g, 1.0), nu);
        height = 2.0 * l1 / total;
    }
    CZDecomposition d = cz_decompose(phi, nu, height);
    std::string body = d.report_json();
    std::cout << body << "\n";
    write_file(cfg, "decompose_cz_" + cfg.config_id + ".json", body);
    return d.all_pass() ? kExitOk : kExitInvariantFailure;
}

int run_decompose_ntv(const ExperimentConfig& cfg, double t) {
    Grid g = make_grid(cfg);
    GridFunction phi = primary_function(cfg, g);
    for (auto& v : phi.values) v = std::fabs(v);
    WeightedMeasure nu = nu_of(cfg, g).measure();
    if (t <= 0.0) {
        double l1 = lp_norm(phi, nu, 1.0);
        double total = integrate(GridFunction(g, 1.0), nu);
        t = std::pow(2.0 * l1 / total, static_cast<double>(cfg.m));
    }
    NTVDecomposition d = ntv_decompose(phi, nu, t, cfg.m);
    std::string body = d.report_json();
    std::cout << body << "\n";
    write_file(cfg, "decompose_ntv_" + cfg.config_id + ".json", body);
    return d.all_pass() ? kExitOk : kExitInvariantFailure;
}

int run_whitney(const ExperimentConfig& cfg, double t, const std::string& mode) {
    Grid g = make_grid(cfg);
    GridFunction phi = primary_function(cfg, g);
    WeightedMeasure nu = nu_of(cfg, g).measure();
    CellSet omega(g);
    if (mode == "maximal") {
        FamilySpec family{g.dim() == 1 ? FamilyKind::Exhaustive1D : FamilyKind::AllSquares2D};
        MaximalResult m = weighted_maximal(phi, nu, family);
        for (std::size_t c = 0; c < omega.member.size(); ++c)
            omega.member[c] = m.values.values[c] > t ? 1 : 0;
    } else if (mode == "levelset") {
        for (std::size_t c = 0; c < omega.member.size(); ++c)
            omega.member[c] = std::fabs(phi.values[c]) > t ? 1 : 0;
    } else {
        throw std::invalid_argument("omega mode must be 'maximal' or 'levelset'");
    }
    auto cubes = whitney_decompose(omega);
    auto rep = certify_whitney(omega, cubes);

    nlohmann::json j;
    j["schema_version"] = 1;
    j["omega_cells"] = omega.count();
    j["cube_count"] = rep.cube_count;
    j["disjoint"] = rep.disjoint;
    j["union_exact"] = rep.union_exact;
    j["upper_ok"] = rep.upper_ok;
    j["lower_ok_resolvable"] = rep.lower_ok_resolvable;
    j["lower_ok_all"] = rep.lower_ok_all;
    j["boundary_cells"] = rep.boundary_cells;
    j["min_lower_ratio"] = rep.min_lower_ratio;
    j["max_upper_ratio"] = rep.max_upper_ratio;
    std::vector<Cube> geo;
    for (const auto& q : cubes) geo.push_back(q.to_cube(g));
    j["cubes"] = nlohmann::json::parse(cubes_to_json(geo));
    std::string body = j.dump(2);
    std::cout << body << "\n";
    write_file(cfg, "whitney_" + cfg.config_id + ".json", body);
    bool ok = rep.disjoint && rep.union_exact && rep.upper_ok && rep.lower_ok_resolvable;
    return ok ? kExitOk : kExitInvariantFailure;
}

int run_apply(const ExperimentConfig& cfg, bool epsilon_sweep) {
    Grid g = make_grid(cfg);
    KernelSpec kernel = make_kernel(cfg.kernel);
    if (kernel.m != cfg.m || kernel.n != cfg.n)
        throw std::invalid_argument("kernel does not match configured (n, m)");
    if (static_cast<int>(cfg.functions.size()) != cfg.m)
        throw std::invalid_argument("apply needs one f.i per slot");
    std::vector<GridFunction> f;
    for (const auto& spec : cfg.functions) f.push_back(make_function(g, spec));

    double h = g.cell_width();
    std::vector<double> epsilons{cfg.epsilon > 0.0 ? cfg.epsilon : h};
    if (epsilon_sweep) epsilons = {h, 2.0 * h, 4.0 * h};

    nlohmann::json sweep = nlohmann::json::array();
    std::string primary_body;
    for (double eps : epsilons) {
        OperatorResult r = apply_operator(kernel, f, eps);
        nlohmann::json entry;
        entry["epsilon"] = eps;
        entry["kernel_name"] = r.kernel;
        entry["l1_norm"] = lp_norm(r.values, WeightedMeasure::lebesgue(g), 1.0);
        entry["values"] = nlohmann::json::parse(to_json(r.values));
        if (primary_body.empty()) primary_body = entry.dump(2);
        sweep.push_back(std::move(entry));
    }
    std::string body = epsilon_sweep ? sweep.dump(2) : primary_body;
    std::cout << body << "\n";
    write_file(cfg, "apply_" + cfg.config_id + ".json", body);
    return kExitOk;
}

int run_weaknorm(const ExperimentConfig& cfg, double p) {
    Grid g = make_grid(cfg);
    GridFunction f = primary_function(cfg, g);
    WeightedMeasure mu = nu_of(cfg, g).measure();
    WeakNormResult w = weak_quasinorm(f, mu, p);
    nlohmann::json j;
    j["schema_version"] = 1;
    j["p"] = p;
    j["sup_tp_mu"] = w.sup_tp_mu;
    j["quasinorm"] = w.quasinorm;
    j["argmax_t"] = w.argmax_t;
    std::string body = j.dump(2);
    std::cout << body << "\n";
    write_file(cfg, "weaknorm_" + cfg.config_id + ".json", body);
    return kExitOk;
}

int run_battery(const ExperimentConfig& cfg) {
    BatteryReport rep = lemma_battery(cfg);
    std::string body = rep.to_json();
    std::cout << body << "\n";
    write_file(cfg, "lemma_battery_" + cfg.config_id + ".json", body);
    return rep.hard_pass() ? kExitOk : kExitInvariantFailure;
}

int run_theorem4(const ExperimentConfig& cfg) {
    Theorem4Report rep = theorem4_experiment(cfg);
    std::string body = rep.to_json();
    std::cout << body << "\n";
    write_file(cfg, "theorem4_" + cfg.config_id + ".json", body);
    write_file(cfg, "theorem4_" + cfg.config_id + "_trace.csv", rep.trace_csv());
    return std::isfinite(rep.ratio) ? kExitOk : kExitInvariantFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"czlab: a numerical laboratory for weighted multilinear "
                 "Calderon-Zygmund estimates"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalOpts global;
    app.add_option("--config", global.config_path, "key=value experiment config file");
    app.add_option("--out-dir", global.out_dir, "report output directory");
    auto* seed_opt = app.add_option("--seed", global.seed, "RNG seed override");
    app.add_option("--threads", global.threads, "worker thread count (0 = default)");

    double p = 1.0, height = -1.0, t = -1.0;
    bool multilinear = false, epsilon_sweep = false;
    std::string omega_mode = "maximal";

    auto* c_char = app.add_subcommand("characteristic", "A_p or multilinear characteristic");
    c_char->add_option("--p", p, "integrability exponent (>= 1)");
    c_char->add_flag("--multilinear", multilinear, "joint characteristic of all weights");

    auto* c_cz = app.add_subcommand("decompose-cz", "Calderon-Zygmund decomposition of f.1");
    c_cz->add_option("--height", height, "stopping height (default: 2 nu-avg of |f.1|)");

    auto* c_ntv = app.add_subcommand("decompose-ntv", "level-set decomposition of f.1");
    c_ntv->add_option("--t", t, "level t (default from the nu-average)");

    auto* c_whitney = app.add_subcommand("whitney", "Whitney decomposition of a level set");
    c_whitney->add_option("--t", t, "threshold")->required();
    c_whitney->add_option("--omega-mode", omega_mode, "maximal | levelset");

    auto* c_apply = app.add_subcommand("apply", "apply the configured kernel to f.1..f.m");
    c_apply->add_flag("--epsilon-sweep", epsilon_sweep, "run epsilon in {h, 2h, 4h}");

    auto* c_weak = app.add_subcommand("weaknorm", "weak-L^{p,inf} quasinorm of f.1");
    c_weak->add_option("--p", p, "quasinorm exponent (> 0)");

    auto* c_battery = app.add_subcommand("lemma-battery", "run the lemma check battery");
    auto* c_t4 = app.add_subcommand("theorem4", "end-to-end weak-type experiment");

    CLI11_PARSE(app, argc, argv);
    global.seed_set = seed_opt->count() > 0;

#ifdef _OPENMP
    if (global.threads > 0) omp_set_num_threads(global.threads);
#endif

    try {
        ExperimentConfig cfg = load_config(global);
        if (c_char->parsed()) return run_characteristic(cfg, p, multilinear);
        if (c_cz->parsed()) return run_decompose_cz(cfg, height);
        if (c_ntv->parsed()) return run_decompose_ntv(cfg, t);
        if (c_whitney->parsed()) return run_whitney(cfg, t, omega_mode);
        if (c_apply->parsed()) return run_apply(cfg, epsilon_sweep);
        if (c_weak->parsed()) return run_weaknorm(cfg, p);
        if (c_battery->parsed()) return run_battery(cfg);
        if (c_t4->parsed()) return run_theorem4(cfg);
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kExitConfigError;
    } catch (const std::exception& e) {
        std::cerr << "invariant failure: " << e.what() << "\n";
        return kExitInvariantFailure;
    }
    return kExitConfigError;
}
