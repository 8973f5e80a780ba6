#pragma once

#include "czlab/grid.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace czlab {

/// Axis-aligned cube: center and side length. side > 0 except for the
/// degenerate side = 0 cubes produced by a vanishing E_{i,j} target.
struct Cube {
    int dim = 1;
    std::array<double, 2> center{0.0, 0.0};
    double side = 0.0;

    double lo(int axis) const { return center[axis] - 0.5 * side; }
    double hi(int axis) const { return center[axis] + 0.5 * side; }
    double diam() const;    // sqrt(dim) * side
};

/// Same center, side scaled by r (r > 0).
Cube dilate(const Cube& q, double r);

/// Grid-aligned cube: len cells per axis starting at cell index lo.
struct GridCube {
    std::array<int, 2> lo{0, 0};
    int len = 1;

    Cube to_cube(const Grid& g) const;
    bool contains_cell(int ix, int iy) const;
};

/// Subset of grid cells (the open sets Ω of the decompositions).
struct CellSet {
    Grid grid;
    std::vector<std::uint8_t> member;

    explicit CellSet(const Grid& g);
    std::size_t count() const;
    bool empty() const { return count() == 0; }
};

/// μ-measure of Q ∩ box with boundary cells weighted by their overlap
/// volume ratio, so r ↦ cube_measure(Q(c,r), μ) is continuous and strictly
/// increasing while the cube grows inside the box.
double cube_measure(const Cube& q, const WeightedMeasure& mu);

/// Lebesgue volume of Q ∩ box.
double cube_box_volume(const Cube& q, const Grid& g);

/// Average of f over Q ∩ box against Lebesgue measure, fractional cells
/// included; min of f over every cell with positive overlap (the
/// conservative inf convention).
double cube_average(const Cube& q, const GridFunction& f);
double cube_inf(const Cube& q, const GridFunction& f);

/// Euclidean distance between the closed cube of `q` and the complement
/// cell set of Ω (cells of the box outside Ω, plus the exterior of the box
/// when `exterior_is_complement`).
double whitney_distance(const GridCube& q, const CellSet& omega, bool exterior_is_complement = true);

struct WhitneyReport {
    std::size_t cube_count = 0;
    bool disjoint = false;
    bool union_exact = false;
    bool upper_ok = false;           // dist <= hi * diam on every cube
    bool lower_ok_resolvable = false;// dist >= lo * diam on every resolvable cube
    bool lower_ok_all = false;       // ... on every cube, including boundary cells
    std::size_t boundary_cells = 0;  // finest-level cubes below the lo*diam floor
    double min_lower_ratio = 0.0;    // min over cubes of dist/diam
    double max_upper_ratio = 0.0;    // max over cubes of dist/diam
    double lo = 2.0;
    double hi = 8.0;
};

/// Decompose Ω into pairwise-disjoint grid-aligned dyadic cubes with union
/// exactly Ω. Maximal dyadic selection under dist ≥ 2·diam; cells adjacent
/// to the complement cannot satisfy the lower bound at any resolution and
/// are emitted at the finest level. Ω must be a proper nonempty subset.
std::vector<GridCube> whitney_decompose(const CellSet& omega, bool exterior_is_complement = true);

/// Post-hoc certification of a Whitney family against the (lo, hi) sandwich
/// lo·diam ≤ dist(Q, Ωᶜ) ≤ hi·diam, plus disjointness and exact union.
WhitneyReport certify_whitney(const CellSet& omega, const std::vector<GridCube>& cubes,
                              double lo = 2.0, double hi = 8.0,
                              bool exterior_is_complement = true);

std::string cubes_to_json(const std::vector<Cube>& cubes);

} // namespace czlab
