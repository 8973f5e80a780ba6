#pragma once

#include "czlab/decomp.hpp"
#include "czlab/grid.hpp"
#include "czlab/operators.hpp"
#include "czlab/weights.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace czlab {

struct WeakNormResult {
    double p = 1.0;
    double sup_tp_mu = 0.0;      // sup_t t^p μ({|g| > t})
    double quasinorm = 0.0;      // sup_tp_mu^{1/p}
    double argmax_t = 0.0;       // maximizer; a distinct value of |g|
    std::vector<std::pair<double, double>> trace;  // (t, μ({|g| > t}))
};

/// Exact discrete weak-L^{p,∞} evaluation: the sup of t^p μ({|g| > t}) over
/// the distinct values of |g| (evaluated just below each value).
WeakNormResult weak_quasinorm(const GridFunction& g, const WeightedMeasure& mu, double p,
                              bool keep_trace = false);

/// One weight of an experiment: constant c or |x - c|^{-a}.
struct WeightSpecEntry {
    std::string kind = "const";      // "const" | "power"
    double value = 1.0;              // constant value or exponent a
    std::array<double, 2> center{0.0, 0.0};
};

/// One test function: indicator:a:b, tent:center:halfwidth, or hat (2D).
struct FunctionSpecEntry {
    std::string kind = "indicator";
    std::array<double, 2> a{0.0, 0.0};
    std::array<double, 2> b{1.0, 1.0};
};

struct ExperimentConfig {
    int n = 1;
    int m = 2;
    int N = 256;
    double L = 4.0;
    std::string kernel = "riesz2";
    double epsilon = -1.0;           // < 0 means h
    std::vector<WeightSpecEntry> weights;
    std::vector<FunctionSpecEntry> functions;
    std::vector<double> scales;      // per-slot amplitude on f_i, default 1
    std::string t_mode = "exact";    // "exact" | "grid:<count>"
    std::uint64_t seed = 12345;
    std::string out_dir = ".";
    std::string config_id = "default";
    std::string family = "default";
    bool allow_large = false;        // unlocks N beyond the desk-scale budget

    static ExperimentConfig from_file(const std::string& path);
    static ExperimentConfig from_map(const std::map<std::string, std::string>& kv);
};

struct Theorem4Report {
    std::string config_id;
    int m = 1;
    int characteristic_exponent = 2;              // 2m² + 2m - 2
    double lhs_sup = 0.0;                // sup_t t^{1/m} ν({|Tν^{-1}| > t})
    double lhs_quasinorm = 0.0;          // lhs_sup^m, the L^{1/m,∞}(ν) quasinorm
    double rhs_norm_product = 0.0;       // prod ||f_i||_{L¹(w_i)}
    double nu_characteristic = 1.0;      // [ν]_{A1}
    double rhs = 0.0;                    // nu_characteristic^characteristic_exponent * rhs_norm_product
    double ratio = 0.0;                  // lhs_quasinorm / rhs
    double linear_case_bound = 0.0;      // m = 1 only: [w] max{1, log(e + [w])} * ||f||
    std::vector<std::array<double, 3>> trace;  // (t, ν({>t}), t^{1/m} ν)

    std::string to_json() const;
    std::string trace_csv() const;
};

Theorem4Report theorem4_experiment(const ExperimentConfig& cfg);

struct BatteryCheck {
    std::string name;
    bool hard = true;
    bool pass = false;
    double value = 0.0;
    double bound = 0.0;
    std::string detail;
};

struct BatteryReport {
    std::vector<BatteryCheck> checks;
    bool hard_pass() const;
    std::string to_json() const;
};

/// Runs the lemma checks (power-of-weight, Remark 2, weak (1,1), radial
/// majorant, Hörmander two-sided, empirical strong type) and both
/// decomposition property suites on the config's weights and functions.
BatteryReport lemma_battery(const ExperimentConfig& cfg);

// Helpers shared by the CLI and the experiment drivers.
Grid make_grid(const ExperimentConfig& cfg);
Weight make_weight(const Grid& g, const WeightSpecEntry& spec);
GridFunction make_function(const Grid& g, const FunctionSpecEntry& spec);
FamilySpec resolve_family(const ExperimentConfig& cfg, const Grid& g);

} // namespace czlab
