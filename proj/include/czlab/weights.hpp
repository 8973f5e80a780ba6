#pragma once

#include "czlab/cubes.hpp"
#include "czlab/families.hpp"
#include "czlab/grid.hpp"

#include <optional>
#include <string>
#include <vector>

namespace czlab {

/// Reporting tag for weights sampled from |x - c|^{-a}.
struct PowerForm {
    double exponent = 0.0;                 // a in [0, 1)
    std::array<double, 2> center{0.0, 0.0};
};

/// Strictly positive grid function used as a Muckenhoupt weight.
/// Characteristics are always computed from the sampled values; the
/// analytic form is carried for provenance only.
struct Weight {
    GridFunction density;
    std::optional<PowerForm> analytic_form;

    explicit Weight(GridFunction d, std::optional<PowerForm> form = std::nullopt);
    const Grid& grid() const { return density.grid; }
    WeightedMeasure measure() const { return WeightedMeasure(density); }
};

/// |x - c|^{-a} sampled at cell centers; c is snapped to the nearest cell
/// boundary so no sample point meets the singularity.
Weight power_weight(const Grid& g, double exponent, std::array<double, 2> center = {0.0, 0.0});
Weight constant_weight(const Grid& g, double value);

/// Weight vector (w_1, ..., w_m) with exponents P = (p_1, ..., p_m),
/// 1/p = sum 1/p_i.
struct WeightVector {
    std::vector<Weight> weights;
    std::vector<double> exponents;

    WeightVector(std::vector<Weight> w, std::vector<double> p);
    int m() const { return static_cast<int>(weights.size()); }
    double p() const;
    const Grid& grid() const { return weights.front().grid(); }
};

struct CharacteristicReport {
    double value = 1.0;
    Cube witness;
    std::string family;
    std::size_t family_size = 0;

    std::string to_json() const;
};

/// [w]_{A_p} over the cube family: sup_Q (avg_Q w) (avg_Q w^{1-p'})^{p-1},
/// with the p = 1 branch (avg_Q w) (inf_Q w)^{-1}. Averages use Lebesgue
/// cell measure.
CharacteristicReport ap_characteristic(const Weight& w, double p, const FamilySpec& family);

/// ([w^γ]_{A_1}, [w]_{A_1}^γ) over the same family; the first never exceeds
/// the second (per-cube Hölder, exact in the discrete model).
std::pair<double, double> power_of_weight_check(const Weight& w, double gamma,
                                                const FamilySpec& family);

/// ν_w = prod w_i^{p/p_i}.
Weight nu_w(const WeightVector& v);

/// [w⃗]_{A_P⃗} = sup_Q (avg_Q ν)^{1/p} prod (avg_Q w_i^{1-p_i'})^{1/p_i'},
/// with (inf_Q w_i)^{-1} when p_i = 1.
CharacteristicReport multilinear_characteristic(const WeightVector& v, const FamilySpec& family);

/// The four characteristic inequalities relating [w⃗]_{A_P⃗} to the linear
/// characteristics of ν and the w_i. Residuals are bound minus value and
/// stay ≥ 0 up to float noise.
struct Remark2Report {
    double multilinear = 1.0;                 // [w⃗]_{A_P⃗}
    double nu_amp = 1.0;                      // [ν]_{A_{mp}}
    std::vector<double> component = {};       // [w_i^{1-p_i'}]_{A_{mp_i'}} or [w_i^{1/m}]_{A_1}
    double residual_nu = 0.0;                 // [w⃗]^p - [ν]_{A_{mp}}
    std::vector<double> residual_component = {};
    double residual_reverse = 0.0;            // [ν]^{1/p} prod [..]^{1/p_i'} - [w⃗]
    double min_residual = 0.0;

    std::string to_json() const;
};

Remark2Report remark2_check(const WeightVector& v, const FamilySpec& family);

} // namespace czlab
