#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <memory>
#include <sstream>

#include "robinfem/diagnostics.hpp"
#include "robinfem/runner.hpp"

namespace py = pybind11;
using namespace robinfem;

namespace {

// The C++ surface passes immutable meshes/specs as shared_ptr<const T>;
// pybind holders want the non-const form. Nothing exposed here mutates.
template <class T>
std::shared_ptr<T> unconst(std::shared_ptr<const T> p) {
  return std::const_pointer_cast<T>(std::move(p));
}

std::shared_ptr<ProblemSpec> problem_from_config_text(const std::string& text) {
  auto parsed = parse_config(text);
  if (!parsed.ok()) {
    std::ostringstream os;
    for (const auto& e : parsed.errors) os << "line " << e.line << ": " << e.message << "\n";
    throw std::invalid_argument(os.str());
  }
  return unconst(build_problem(parsed.config, build_mesh(parsed.config)));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "p-Laplacian Robin problems with singular boundary data";

  m.def("truncate", static_cast<double (*)(double, double)>(&robinfem::truncate),
        py::arg("s"), py::arg("k"));
  m.def("v_delta", &v_delta, py::arg("s"), py::arg("delta"));
  m.def("phi_t_eps", &phi_t_eps, py::arg("s"), py::arg("t"), py::arg("eps"));
  m.def("g_integrability_exponent", &g_integrability_exponent, py::arg("N"), py::arg("eta"));
  m.def(
      "marcinkiewicz_exponents",
      [](int N, double p) {
        const auto e = marcinkiewicz_exponents(N, p);
        return py::make_tuple(e.interior, e.boundary, e.gradient);
      },
      py::arg("N"), py::arg("p"));

  py::class_<Mesh2D, std::shared_ptr<Mesh2D>>(m, "Mesh2D")
      .def_property_readonly("vertex_count", &Mesh2D::vertex_count)
      .def_property_readonly("triangle_count", &Mesh2D::triangle_count)
      .def_property_readonly("boundary_edge_count",
                             [](const Mesh2D& mm) { return mm.boundary_edges().size(); })
      .def_property_readonly("total_area", &Mesh2D::total_area)
      .def_property_readonly("boundary_length", &Mesh2D::boundary_length)
      .def_property_readonly("max_edge_length", &Mesh2D::max_edge_length)
      .def("is_delaunay", &Mesh2D::is_delaunay, py::arg("tol") = 1e-9)
      .def("vertices",
           [](const Mesh2D& mm) {
             std::vector<std::pair<double, double>> out;
             for (const auto& v : mm.vertices()) out.push_back({v.x, v.y});
             return out;
           })
      .def("write_text", [](const Mesh2D& mm) {
        std::ostringstream os;
        mm.write_text(os);
        return os.str();
      });

  py::class_<DiscreteField>(m, "DiscreteField")
      .def(py::init([](std::shared_ptr<Mesh2D> mesh, std::vector<double> values) {
             return DiscreteField(std::move(mesh), std::move(values));
           }),
           py::arg("mesh"), py::arg("values"))
      .def_property_readonly("values", [](const DiscreteField& f) { return f.values(); })
      .def_property_readonly("min_value", &DiscreteField::min_value)
      .def_property_readonly("min_boundary_value", &DiscreteField::min_boundary_value)
      .def("max_abs_diff", &DiscreteField::max_abs_diff);

  m.def("generate_unit_square", [](int mm) { return unconst(generate_unit_square(mm)); },
        py::arg("m"));
  m.def("generate_unit_disk", [](int mm) { return unconst(generate_unit_disk(mm)); },
        py::arg("m"));
  m.def("refine_uniform",
        [](const std::shared_ptr<Mesh2D>& mm) { return unconst(refine_uniform(*mm)); });

  py::class_<ProblemSpec, std::shared_ptr<ProblemSpec>>(m, "ProblemSpec")
      .def("validate",
           [](const ProblemSpec& s, std::uint64_t seed) { return s.validate(seed); },
           py::arg("seed") = 0);

  m.def("problem_from_config", &problem_from_config_text, py::arg("config_text"),
        "Build a problem from config text (same grammar as the CLI)");

  py::class_<SolverConfig> sc(m, "SolverConfig");
  sc.def(py::init<>())
      .def_readwrite("tol_fp", &SolverConfig::tol_fp)
      .def_readwrite("tol_res", &SolverConfig::tol_res)
      .def_readwrite("tol_ladder", &SolverConfig::tol_ladder)
      .def_readwrite("damping", &SolverConfig::damping)
      .def_readwrite("max_outer", &SolverConfig::max_outer)
      .def_readwrite("n_max", &SolverConfig::n_max)
      .def_readwrite("schedule", &SolverConfig::schedule)
      .def_property(
          "mode",
          [](const SolverConfig& c) {
            return c.mode == SolverConfig::Mode::Picard ? "picard" : "newton";
          },
          [](SolverConfig& c, const std::string& mode) {
            c.mode = mode == "picard" ? SolverConfig::Mode::Picard : SolverConfig::Mode::Newton;
          });

  m.def(
      "solve_ladder",
      [](std::shared_ptr<ProblemSpec> spec, const SolverConfig& cfg) {
        auto [u, rep] = solve_ladder(spec, cfg);
        py::dict info;
        info["final_level"] = rep.final_level;
        info["levels"] = rep.levels.size();
        info["ladder_converged"] = rep.ladder_converged;
        info["min_node"] = u.min_value();
        return py::make_tuple(u, info);
      },
      py::arg("spec"), py::arg("config") = SolverConfig{});

  m.def(
      "solve_barrier",
      [](std::shared_ptr<ProblemSpec> spec, const SolverConfig& cfg) {
        auto [v, cbar] = solve_barrier(*spec, cfg);
        return py::make_tuple(v, cbar);
      },
      py::arg("spec"), py::arg("config") = SolverConfig{});

  m.def(
      "entropy_residual",
      [](const DiscreteField& u, const DiscreteField& v, double k,
         std::shared_ptr<ProblemSpec> spec) {
        const auto er = entropy_residual(u, v, k, *spec);
        py::dict out;
        out["residual"] = er.residual;
        out["lhs"] = er.lhs;
        out["rhs"] = er.rhs;
        out["applicable"] = er.applicable;
        return out;
      },
      py::arg("u"), py::arg("v"), py::arg("k"), py::arg("spec"));

  m.def(
      "marcinkiewicz_quasinorm",
      [](const std::vector<double>& values, const std::vector<double>& measures, double r) {
        return marcinkiewicz_quasinorm(values, measures, r).sup;
      },
      py::arg("values"), py::arg("measures"), py::arg("r"));

  m.def(
      "exact_disk_example",
      [](double alpha, const std::shared_ptr<Mesh2D>& mesh) {
        auto [spec, u] = exact_disk_example(alpha, mesh);
        return py::make_tuple(unconst(std::move(spec)), u);
      },
      py::arg("alpha"), py::arg("disk_mesh"));
  m.def("scaled_weak_residual",
        [](std::shared_ptr<ProblemSpec> spec, const DiscreteField& u) {
          return scaled_weak_residual(*spec, u);
        });
}
