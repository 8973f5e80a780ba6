#pragma once

#include "czlab/cubes.hpp"
#include "czlab/families.hpp"
#include "czlab/grid.hpp"
#include "czlab/maximal.hpp"

#include <string>
#include <vector>

namespace czlab {

struct PropertyCheck {
    std::string name;
    double bound = 0.0;
    double achieved = 0.0;
    double slack = 0.0;     // bound - achieved
    bool pass = false;
};

struct BadPart {
    GridCube cube;
    GridFunction part;
};

/// Calderón-Zygmund decomposition of φ at the given height with respect to
/// ν dx: dyadic stopping time from the smallest admissible root, good part
/// capped by the dyadic-parent constant, bad parts mean-zero per cube.
struct CZDecomposition {
    explicit CZDecomposition(const Grid& g) : good(g) {}

    GridFunction good;
    std::vector<BadPart> bad_parts;
    double height = 0.0;
    double nu_a1_dyadic = 1.0;   // [ν]_{A1} over the dyadic family
    std::vector<PropertyCheck> properties;

    bool all_pass() const;
    std::string report_json() const;
};

CZDecomposition cz_decompose(const GridFunction& phi, const WeightedMeasure& nu, double height);

/// Level-set decomposition of Proof 2: Ω = {M_ν φ > t^{1/m}}, Whitney cubes
/// of Ω, g = φ outside Ω, b restricted to the cubes, and the E_{i,j} cubes
/// of prescribed ν-measure.
struct NTVDecomposition {
    explicit NTVDecomposition(const Grid& g) : omega(g), good(g) {}

    CellSet omega;
    std::vector<GridCube> whitney_cubes;
    GridFunction good;
    std::vector<BadPart> bad_parts;
    std::vector<Cube> e_cubes;
    double t = 0.0;
    double t_root = 0.0;         // t^{1/m}
    int m = 1;
    double nu_a1 = 1.0;          // [ν]_{A1} over the maximal family
    double c_weak = 0.0;         // recorded weak (1,1) ratio of M_ν for this φ
    FamilySpec family;
    std::vector<PropertyCheck> properties;

    bool all_pass() const;
    std::string report_json() const;
};

/// φ must be nonnegative and ν(box) > t^{-1/m} (the non-triviality
/// assumption). The maximal family defaults to the exhaustive one in 1D and
/// all squares in 2D; property (3) is asserted with the exact factor
/// (17√n)^n [ν]_{A1}.
NTVDecomposition ntv_decompose(const GridFunction& phi, const WeightedMeasure& nu,
                               double t, int m);

/// For each bad cube, the concentric cube E with
/// ν(E) = ||b||_{L¹(ν)} (17√n)^{-n} [ν]_{A1}^{-1} t^{-1/m}, found by
/// bisection (relative tolerance 1e-9). E ⊆ Q is guaranteed by property (3).
std::vector<Cube> construct_e_cubes(const NTVDecomposition& d, const WeightedMeasure& nu, double t);

} // namespace czlab
