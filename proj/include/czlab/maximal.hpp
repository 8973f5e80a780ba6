#pragma once

#include "czlab/families.hpp"
#include "czlab/grid.hpp"
#include "czlab/weights.hpp"

#include <functional>
#include <vector>

namespace czlab {

struct MaximalResult {
    GridFunction values;
    FamilySpec family;
};

/// Hardy-Littlewood maximal function: at each cell, sup over family cubes
/// containing it of the Lebesgue average of |f|.
MaximalResult hl_maximal(const GridFunction& f, const FamilySpec& family);

/// Uncentered weighted maximal function M_w: sup over cubes containing the
/// cell of (1/w(Q)) ∫_Q |f| w.
MaximalResult weighted_maximal(const GridFunction& f, const WeightedMeasure& w,
                               const FamilySpec& family);

/// sup_t t · w({M_w f > t}) / ||f||_{L¹(w)}, the sup taken exactly over the
/// distinct values of the discrete maximal function.
double weak11_ratio(const GridFunction& f, const WeightedMeasure& w, const FamilySpec& family);

/// Nonincreasing radial profile k(r), truncated to the grid: sampled at the
/// center-to-center radii |j|·h and zero beyond max_radius.
struct RadialProfile {
    std::function<double(double)> k;
    double max_radius = 0.0;
    std::string name;
};

struct RadialMajorantReport {
    double max_violation = 0.0;   // max over cells of (|f|*K - ||K||₁ M f)
    double k_l1 = 0.0;            // discrete ||K||₁ on the truncated domain
    double slack = 0.0;           // the ε_h discretization allowance
};

/// Checks the radial-majorant convolution bound (|f|*K)(x) ≤ ||K||₁ M f(x)
/// against the exhaustive-family maximal function. 1D only: the layer-cake
/// argument is exact on cell-aligned windows, so the violation is float
/// noise; ε_h is reported for reference. Rejects non-monotone profiles.
RadialMajorantReport radial_majorant_check(const GridFunction& f, const RadialProfile& profile);

} // namespace czlab
