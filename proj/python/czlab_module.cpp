#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "czlab/decomp.hpp"
#include "czlab/harness.hpp"
#include "czlab/maximal.hpp"
#include "czlab/operators.hpp"
#include "czlab/weights.hpp"

namespace py = pybind11;
using namespace czlab;

namespace {

GridFunction function_from_array(const Grid& g, py::array_t<double, py::array::c_style> arr) {
    auto buf = arr.request();
    if (static_cast<std::size_t>(buf.size) != g.cell_count())
        throw std::invalid_argument("array size does not match the grid");
    const double* ptr = static_cast<const double*>(buf.ptr);
    return GridFunction(g, std::vector<double>(ptr, ptr + buf.size));
}

py::array_t<double> array_from_function(const GridFunction& f) {
    py::array_t<double> out(f.values.size());
    std::copy(f.values.begin(), f.values.end(), out.mutable_data());
    return out;
}

FamilySpec family_for(const Grid& g, const std::string& name) {
    return name == "default" ? default_family(g) : family_from_name(name);
}

py::dict cube_dict(const Cube& c) {
    py::dict d;
    d["center"] = c.dim == 1 ? py::cast(std::vector<double>{c.center[0]})
                             : py::cast(std::vector<double>{c.center[0], c.center[1]});
    d["side"] = c.side;
    return d;
}

} // namespace

PYBIND11_MODULE(_czlab, m) {
    m.doc() = "Grid-scale laboratory for weighted multilinear Calderon-Zygmund estimates";

    py::class_<Grid>(m, "Grid")
        .def(py::init<int, double, int>(), py::arg("dim"), py::arg("half_width"),
             py::arg("cells_per_axis"))
        .def_property_readonly("dim", &Grid::dim)
        .def_property_readonly("half_width", &Grid::half_width)
        .def_property_readonly("cells_per_axis", &Grid::cells_per_axis)
        .def_property_readonly("cell_width", &Grid::cell_width)
        .def_property_readonly("cell_count", &Grid::cell_count)
        .def("cell_centers", [](const Grid& g) {
            py::array_t<double> out({g.cell_count(), static_cast<std::size_t>(g.dim())});
            auto r = out.mutable_unchecked<2>();
            for (std::size_t c = 0; c < g.cell_count(); ++c) {
                auto cc = g.cell_center(c);
                for (int a = 0; a < g.dim(); ++a) r(c, a) = cc[a];
            }
            return out;
        });

    m.def("integrate",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density) {
              return integrate(function_from_array(g, f),
                               WeightedMeasure(function_from_array(g, density)));
          },
          py::arg("grid"), py::arg("values"), py::arg("density"));

    m.def("lp_norm",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density, double p) {
              return lp_norm(function_from_array(g, f),
                             WeightedMeasure(function_from_array(g, density)), p);
          },
          py::arg("grid"), py::arg("values"), py::arg("density"), py::arg("p"));

    m.def("level_set_measure",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density, double t) {
              return level_set_measure(function_from_array(g, f),
                                       WeightedMeasure(function_from_array(g, density)), t);
          },
          py::arg("grid"), py::arg("values"), py::arg("density"), py::arg("t"));

    m.def("ap_characteristic",
          [](const Grid& g, py::array_t<double> w, double p, const std::string& family) {
              auto rep = ap_characteristic(Weight(function_from_array(g, w)), p,
                                           family_for(g, family));
              py::dict d;
              d["value"] = rep.value;
              d["witness"] = cube_dict(rep.witness);
              d["family"] = rep.family;
              d["family_size"] = rep.family_size;
              return d;
          },
          py::arg("grid"), py::arg("weight"), py::arg("p") = 1.0,
          py::arg("family") = "default");

    m.def("nu_w",
          [](const Grid& g, std::vector<py::array_t<double>> weights,
             std::vector<double> exponents) {
              std::vector<Weight> ws;
              for (auto& w : weights) ws.push_back(Weight(function_from_array(g, w)));
              return array_from_function(nu_w(WeightVector(ws, exponents)).density);
          },
          py::arg("grid"), py::arg("weights"), py::arg("exponents"));

    m.def("multilinear_characteristic",
          [](const Grid& g, std::vector<py::array_t<double>> weights,
             std::vector<double> exponents, const std::string& family) {
              std::vector<Weight> ws;
              for (auto& w : weights) ws.push_back(Weight(function_from_array(g, w)));
              auto rep = multilinear_characteristic(WeightVector(ws, exponents),
                                                    family_for(g, family));
              py::dict d;
              d["value"] = rep.value;
              d["family_size"] = rep.family_size;
              return d;
          },
          py::arg("grid"), py::arg("weights"), py::arg("exponents"),
          py::arg("family") = "default");

    m.def("hl_maximal",
          [](const Grid& g, py::array_t<double> f, const std::string& family) {
              return array_from_function(
                  hl_maximal(function_from_array(g, f), family_for(g, family)).values);
          },
          py::arg("grid"), py::arg("values"), py::arg("family") = "default");

    m.def("weighted_maximal",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density,
             const std::string& family) {
              return array_from_function(
                  weighted_maximal(function_from_array(g, f),
                                   WeightedMeasure(function_from_array(g, density)),
                                   family_for(g, family))
                      .values);
          },
          py::arg("grid"), py::arg("values"), py::arg("density"),
          py::arg("family") = "default");

    m.def("weak11_ratio",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density,
             const std::string& family) {
              return weak11_ratio(function_from_array(g, f),
                                  WeightedMeasure(function_from_array(g, density)),
                                  family_for(g, family));
          },
          py::arg("grid"), py::arg("values"), py::arg("density"),
          py::arg("family") = "default");

    m.def("apply_operator",
          [](const Grid& g, const std::string& kernel,
             std::vector<py::array_t<double>> inputs, double epsilon) {
              KernelSpec k = make_kernel(kernel);
              std::vector<GridFunction> f;
              for (auto& a : inputs) f.push_back(function_from_array(g, a));
              if (epsilon <= 0.0) epsilon = g.cell_width();
              return array_from_function(apply_operator(k, f, epsilon).values);
          },
          py::arg("grid"), py::arg("kernel"), py::arg("inputs"), py::arg("epsilon") = -1.0);

    m.def("kernel_catalog", &kernel_catalog);

    m.def("weak_quasinorm",
          [](const Grid& g, py::array_t<double> f, py::array_t<double> density, double p) {
              auto w = weak_quasinorm(function_from_array(g, f),
                                      WeightedMeasure(function_from_array(g, density)), p);
              py::dict d;
              d["sup_tp_mu"] = w.sup_tp_mu;
              d["quasinorm"] = w.quasinorm;
              d["argmax_t"] = w.argmax_t;
              return d;
          },
          py::arg("grid"), py::arg("values"), py::arg("density"), py::arg("p"));

    m.def("whitney_decompose",
          [](const Grid& g, py::array_t<bool, py::array::c_style> mask) {
              auto buf = mask.request();
              if (static_cast<std::size_t>(buf.size) != g.cell_count())
                  throw std::invalid_argument("mask size does not match the grid");
              CellSet omega(g);
              const bool* ptr = static_cast<const bool*>(buf.ptr);
              for (std::size_t i = 0; i < omega.member.size(); ++i) omega.member[i] = ptr[i];
              auto cubes = whitney_decompose(omega);
              auto rep = certify_whitney(omega, cubes);
              py::list out;
              for (const auto& q : cubes) out.append(cube_dict(q.to_cube(g)));
              py::dict d;
              d["cubes"] = out;
              d["disjoint"] = rep.disjoint;
              d["union_exact"] = rep.union_exact;
              d["upper_ok"] = rep.upper_ok;
              d["lower_ok_resolvable"] = rep.lower_ok_resolvable;
              d["boundary_cells"] = rep.boundary_cells;
              return d;
          },
          py::arg("grid"), py::arg("mask"));

    m.def("cz_decompose",
          [](const Grid& g, py::array_t<double> phi, py::array_t<double> density,
             double height) {
              auto d = cz_decompose(function_from_array(g, phi),
                                    WeightedMeasure(function_from_array(g, density)), height);
              py::dict out;
              out["good"] = array_from_function(d.good);
              py::list cubes;
              for (const auto& b : d.bad_parts) cubes.append(cube_dict(b.cube.to_cube(g)));
              out["cubes"] = cubes;
              out["all_pass"] = d.all_pass();
              out["report"] = d.report_json();
              return out;
          },
          py::arg("grid"), py::arg("phi"), py::arg("density"), py::arg("height"));

    m.def("ntv_decompose",
          [](const Grid& g, py::array_t<double> phi, py::array_t<double> density, double t,
             int m_lin) {
              auto d = ntv_decompose(function_from_array(g, phi),
                                     WeightedMeasure(function_from_array(g, density)), t,
                                     m_lin);
              py::dict out;
              out["good"] = array_from_function(d.good);
              py::list cubes, ecubes;
              for (const auto& b : d.bad_parts) cubes.append(cube_dict(b.cube.to_cube(g)));
              for (const auto& e : d.e_cubes) ecubes.append(cube_dict(e));
              out["cubes"] = cubes;
              out["e_cubes"] = ecubes;
              out["all_pass"] = d.all_pass();
              out["report"] = d.report_json();
              return out;
          },
          py::arg("grid"), py::arg("phi"), py::arg("density"), py::arg("t"), py::arg("m") = 1);

    m.def("theorem4_experiment",
          [](const std::map<std::string, std::string>& kv) {
              auto rep = theorem4_experiment(ExperimentConfig::from_map(kv));
              py::dict d;
              d["characteristic_exponent"] = rep.characteristic_exponent;
              d["lhs_sup"] = rep.lhs_sup;
              d["lhs_quasinorm"] = rep.lhs_quasinorm;
              d["rhs"] = rep.rhs;
              d["ratio"] = rep.ratio;
              d["nu_characteristic"] = rep.nu_characteristic;
              d["json"] = rep.to_json();
              return d;
          },
          py::arg("config"));
}
