#pragma once

#include "czlab/cubes.hpp"
#include "czlab/grid.hpp"
#include "czlab/weights.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace czlab {

/// m-linear Calderón-Zygmund kernel evaluator. `eval` receives the output
/// point x (n doubles) and the m input points packed row-major (m*n
/// doubles); it is defined wherever x differs from at least one y_j.
struct KernelSpec {
    std::string name;
    int m = 1;
    int n = 1;
    double delta = 1.0;
    std::function<double(const double* x, const double* y)> eval;
};

/// Catalog: "hilbert" (m=1, n=1), "riesz2" (m=2, n=1), "riesz3" (m=3, n=1),
/// "riesz2_2d" (m=2, n=2). All satisfy the size/smoothness conditions with
/// delta = 1.
KernelSpec make_kernel(const std::string& name);
std::vector<std::string> kernel_catalog();

struct ConditionReport {
    std::string condition;       // "size" or "smoothness"
    double constant = 0.0;       // sampled sup of the normalized ratio
    std::size_t samples = 0;
    std::uint64_t seed = 0;
};

/// Sampled sup of |K| (Σ|x-y_i|)^{nm} over random tuples with log-uniform
/// radii in [r_min, r_max]. Non-finite kernel values at sampled tuples are
/// hard failures.
ConditionReport check_size(const KernelSpec& k, std::size_t samples, std::uint64_t seed,
                           double r_min, double r_max);

/// Sampled sup of |ΔK| (Σ|x-y_i|)^{nm+δ} / |shift|^δ over admissible x- and
/// y_j-shifts (|shift| ≤ ½ max_i |x-y_i|).
ConditionReport check_smoothness(const KernelSpec& k, std::size_t samples, std::uint64_t seed,
                                 double r_min, double r_max);

struct OperatorResult {
    GridFunction values;
    double epsilon = 0.0;
    std::string kernel;
};

/// Direct m-fold summation of K(x, y⃗) ∏ f_i(y_i) h^{nm} over cell-center
/// tuples, omitting tuples with max_i |x-y_i| < epsilon (the principal
/// value surrogate; tuples near the partial diagonal are kept).
OperatorResult apply_operator(const KernelSpec& k, const std::vector<GridFunction>& f,
                              double epsilon);

struct Lemma4Report {
    double lhs = 0.0;
    double rhs = 0.0;
    double a1_characteristic = 1.0;
    double exclusion_factor = 0.0;
    std::size_t excluded_cells = 0;
};

/// Two-sided evaluation of the weighted Hörmander estimate: LHS is the
/// discretized triple sum with the sup over (y_1..y_l) sampled at cube
/// corners, center, and seeded interior points; RHS is
/// [w]_{A1}^{(2m-2)/m} Σ_i w(Ω_i). The x-integral runs over the box minus
/// the union of exclusion_factor-dilated cubes (paper value 2√n).
Lemma4Report lemma4_estimate(const KernelSpec& k, const Weight& w,
                             const std::vector<std::vector<Cube>>& families,
                             const FamilySpec& char_family,
                             double exclusion_factor = -1.0,
                             std::uint64_t seed = 2026);

/// Max over seeded random compactly supported inputs of
/// ||T(f⃗)||_{L¹} / prod ||f_i||_{L^m} (the strong-type ratio used by the
/// empirical boundedness check).
double theorem5_max_ratio(const KernelSpec& k, int N, double L, int count, std::uint64_t seed);

} // namespace czlab
