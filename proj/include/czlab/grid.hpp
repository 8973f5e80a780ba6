#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <string>
#include <vector>

namespace czlab {

/// Uniform discretization of the half-open box [-L, L)^n, n in {1, 2}.
/// Cell i along an axis occupies [-L + i*h, -L + (i+1)*h) with h = 2L/N,
/// so dyadic children partition their parent exactly and the origin sits
/// on a cell boundary (N is even).
class Grid {
public:
    Grid(int dim, double half_width, int cells_per_axis);

    int dim() const { return dim_; }
    double half_width() const { return half_width_; }
    int cells_per_axis() const { return n_; }
    double cell_width() const { return h_; }
    double cell_volume() const;         // h^dim
    std::size_t cell_count() const;     // N^dim

    double axis_left(int i) const { return -half_width_ + i * h_; }
    double axis_center(int i) const { return -half_width_ + (i + 0.5) * h_; }

    std::size_t flat_index(int ix, int iy = 0) const;
    std::array<int, 2> axis_indices(std::size_t flat) const;
    std::array<double, 2> cell_center(std::size_t flat) const;

    bool operator==(const Grid& other) const = default;

private:
    int dim_;
    double half_width_;
    int n_;
    double h_;
};

/// Real function on a grid with cell-average semantics. Zero outside the box.
struct GridFunction {
    Grid grid;
    std::vector<double> values;

    GridFunction(const Grid& g, double fill = 0.0);
    GridFunction(const Grid& g, std::vector<double> vals);

    double& operator[](std::size_t i) { return values[i]; }
    double operator[](std::size_t i) const { return values[i]; }

    /// Per-axis [lo, hi] cell index bounds of the nonzero cells, or
    /// lo > hi when the function vanishes identically.
    std::array<int, 4> support_box() const;
};

GridFunction sample_function(const Grid& g, const std::function<double(double, double)>& f);

/// Strictly positive density against Lebesgue measure on the grid;
/// the measure of a cell is density * h^n.
struct WeightedMeasure {
    GridFunction density;

    explicit WeightedMeasure(GridFunction d);
    const Grid& grid() const { return density.grid; }

    static WeightedMeasure lebesgue(const Grid& g);
};

double integrate(const GridFunction& f, const WeightedMeasure& mu);

/// (∫ |f|^p dμ)^{1/p}; p may be infinity (sup of |values| over cells of
/// positive density). Finite p must be positive.
double lp_norm(const GridFunction& f, const WeightedMeasure& mu, double p);

/// μ({|f| > t}), strict inequality.
double level_set_measure(const GridFunction& f, const WeightedMeasure& mu, double t);

std::string to_json(const GridFunction& f);
GridFunction grid_function_from_json(const std::string& text);

} // namespace czlab
