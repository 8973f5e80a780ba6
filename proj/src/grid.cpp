#include "czlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <json.hpp>

namespace czlab {

namespace {

bool is_power_of_two(int n) { return n >= 1 && (n & (n - 1)) == 0; }

void require_same_grid(const Grid& a, const Grid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

} // namespace

Grid::Grid(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), n_(cells_per_axis),
      h_(2.0 * half_width / cells_per_axis) {
    if (dim != 1 && dim != 2) throw std::invalid_argument("grid dimension must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw std::invalid_argument("grid half-width must be positive and finite");
    if (n_ < 2 || !is_power_of_two(n_))
        throw std::invalid_argument("cells per axis must be a power of two >= 2");
}

double Grid::cell_volume() const {
    return dim_ == 1 ? h_ : h_ * h_;
}

std::size_t Grid::cell_count() const {
    std::size_t n = static_cast<std::size_t>(n_);
    return dim_ == 1 ? n : n * n;
}

std::size_t Grid::flat_index(int ix, int iy) const {
    return static_cast<std::size_t>(iy) * static_cast<std::size_t>(n_) +
           static_cast<std::size_t>(ix);
}

std::array<int, 2> Grid::axis_indices(std::size_t flat) const {
    int ix = static_cast<int>(flat % static_cast<std::size_t>(n_));
    int iy = static_cast<int>(flat / static_cast<std::size_t>(n_));
    return {ix, iy};
}

std::array<double, 2> Grid::cell_center(std::size_t flat) const {
    auto [ix, iy] = axis_indices(flat);
    return {axis_center(ix), dim_ == 2 ? axis_center(iy) : 0.0};
}

GridFunction::GridFunction(const Grid& g, double fill)
    : grid(g), values(g.cell_count(), fill) {}

GridFunction::GridFunction(const Grid& g, std::vector<double> vals)
    : grid(g), values(std::move(vals)) {
    if (values.size() != grid.cell_count())
        throw std::invalid_argument("grid function value count does not match grid");
    for (double v : values)
        if (!std::isfinite(v)) throw std::invalid_argument("grid function values must be finite");
}

std::array<int, 4> GridFunction::support_box() const {
    int n = grid.cells_per_axis();
    std::array<int, 4> box{n, -1, n, -1};  // lox, hix, loy, hiy
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i] == 0.0) continue;
        auto [ix, iy] = grid.axis_indices(i);
        box[0] = std::min(box[0], ix);
        box[1] = std::max(box[1], ix);
        box[2] = std::min(box[2], iy);
        box[3] = std::max(box[3], iy);
    }
    if (grid.dim() == 1 && box[1] >= 0) { box[2] = 0; box[3] = 0; }
    return box;
}

GridFunction sample_function(const Grid& g, const std::function<double(double, double)>& f) {
    GridFunction out(g);
    for (std::size_t i = 0; i < out.values.size(); ++i) {
        auto c = g.cell_center(i);
        out.values[i] = f(c[0], c[1]);
    }
    return out;
}

WeightedMeasure::WeightedMeasure(GridFunction d) : density(std::move(d)) {
    for (double v : density.values)
        if (!(v > 0.0)) throw std::invalid_argument("measure density must be strictly positive");
}

WeightedMeasure WeightedMeasure::lebesgue(const Grid& g) {
    return WeightedMeasure(GridFunction(g, 1.0));
}

double integrate(const GridFunction& f, const WeightedMeasure& mu) {
    require_same_grid(f.grid, mu.grid());
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc += static_cast<long double>(f.values[i]) * mu.density.values[i];
    return static_cast<double>(acc) * f.grid.cell_volume();
}

double lp_norm(const GridFunction& f, const WeightedMeasure& mu, double p) {
    require_same_grid(f.grid, mu.grid());
    if (std::isinf(p)) {
        double m = 0.0;
        for (std::size_t i = 0; i < f.values.size(); ++i)
            if (mu.density.values[i] > 0.0) m = std::max(m, std::fabs(f.values[i]));
        return m;
    }
    if (!(p > 0.0)) throw std::invalid_argument("lp_norm requires p > 0 or p = infinity");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        acc += static_cast<long double>(std::pow(std::fabs(f.values[i]), p)) *
               mu.density.values[i];
    acc *= f.grid.cell_volume();
    return std::pow(static_cast<double>(acc), 1.0 / p);
}

double level_set_measure(const GridFunction& f, const WeightedMeasure& mu, double t) {
    require_same_grid(f.grid, mu.grid());
    if (t < 0.0) throw std::invalid_argument("level_set_measure requires t >= 0");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < f.values.size(); ++i)
        if (std::fabs(f.values[i]) > t) acc += mu.density.values[i];
    return static_cast<double>(acc) * f.grid.cell_volume();
}

std::string to_json(const GridFunction& f) {
    nlohmann::json j;
    j["n"] = f.grid.dim();
    j["L"] = f.grid.half_width();
    j["N"] = f.grid.cells_per_axis();
    j["values"] = f.values;
    return j.dump();
}

GridFunction grid_function_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Grid g(j.at("n").get<int>(), j.at("L").get<double>(), j.at("N").get<int>());
    return GridFunction(g, j.at("values").get<std::vector<double>>());
}

} // namespace czlab
