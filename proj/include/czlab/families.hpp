#pragma once

#include "czlab/cubes.hpp"
#include "czlab/grid.hpp"

#include <cstddef>
#include <functional>
#include <string>

namespace czlab {

/// Cube families the sup-scans run over. Exhaustive1D is every grid-aligned
/// interval (exact sups in 1D); AllSquares2D is every grid-aligned square;
/// DyadicShifted2D is the dyadic tree plus the 3^n - 1 shifted grids;
/// Dyadic is the plain dyadic tree of the box (the CZ stopping-time family).
enum class FamilyKind {
    Exhaustive1D,
    AllSquares2D,
    DyadicShifted2D,
    Dyadic,
};

struct FamilySpec {
    FamilyKind kind = FamilyKind::Exhaustive1D;
};

FamilySpec default_family(const Grid& g);
std::string family_name(const FamilySpec& spec);
FamilySpec family_from_name(const std::string& name);
std::size_t family_size(const FamilySpec& spec, const Grid& g);

/// Visit every cube of the family. The callback receives grid-aligned
/// cubes; iteration order is unspecified.
void for_each_cube(const FamilySpec& spec, const Grid& g,
                   const std::function<void(const GridCube&)>& fn);

/// Sliding minimum of `v` over windows of `len` cells (monotone deque),
/// writing the min for window starting at each position. out has
/// size N - len + 1.
void sliding_min(const std::vector<double>& v, int len, std::vector<double>& out);

/// Separable min/max filter over len x len windows of an N x N field.
void window_min_2d(const std::vector<double>& v, int n, int len, std::vector<double>& out);
void window_max_2d(const std::vector<double>& v, int n, int len, std::vector<double>& out);

} // namespace czlab
