#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hookwalk/diagram_io.hpp"
#include "hookwalk/inverse.hpp"
#include "hookwalk/moments.hpp"
#include "hookwalk/polyroots.hpp"
#include "hookwalk/transition.hpp"
#include "hookwalk/walk.hpp"

namespace py = pybind11;
using namespace hookwalk;

namespace {

// A parsed diagram spec together with its rotated diagram.
struct PyDiagram {
  DiagramSpec spec;
  Diagram diagram;

  explicit PyDiagram(DiagramSpec s) : spec(std::move(s)), diagram(to_diagram(spec)) {}
};

PyDiagram from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("diagram spec is not valid JSON: ") + e.what());
  }
  return PyDiagram(parse_diagram_spec(j));
}

const RectangularDiagram& rectangular(const PyDiagram& d) {
  const auto* r = std::get_if<RectangularDiagram>(&d.spec);
  if (!r) throw InvalidInput("atoms need a rectangular diagram");
  return *r;
}

py::tuple atoms_tuple(const AtomicMeasure& m) {
  return py::make_tuple(m.locations, m.weights);
}

MomentVector moments_of(MomentKind kind, std::vector<double> v) { return {kind, std::move(v)}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Transition measures of continual Young diagrams and their hook walks";

  py::class_<PyDiagram>(m, "Diagram")
      .def(py::init(&from_json), py::arg("spec_json"))
      .def("kind", [](const PyDiagram& d) { return kind_name(d.spec); })
      .def("to_json", [](const PyDiagram& d) { return to_json(d.spec).dump(); })
      .def("center", [](const PyDiagram& d) { return center(d.diagram); })
      .def("area", [](const PyDiagram& d) { return area(d.diagram); })
      .def("interval",
           [](const PyDiagram& d) {
             const Interval I = interval(d.diagram);
             return py::make_tuple(I.a, I.b);
           })
      .def("__call__", [](const PyDiagram& d, double x) { return evaluate(d.diagram, x); });

  m.def("exterior_atoms", [](const PyDiagram& d) { return atoms_tuple(exterior_atoms(rectangular(d))); });
  m.def("interior_atoms", [](const PyDiagram& d) { return atoms_tuple(interior_atoms(rectangular(d))); });
  m.def(
      "rect_from_exterior_atoms",
      [](std::vector<double> x, std::vector<double> w) {
        return PyDiagram(rect_from_exterior_atoms({std::move(x), std::move(w)}));
      },
      py::arg("locations"), py::arg("weights"));
  m.def(
      "rect_from_interior_atoms",
      [](std::vector<double> x, std::vector<double> w, double A, double z) {
        return PyDiagram(rect_from_interior_atoms({std::move(x), std::move(w)},
                                                  InteriorInverseParams{A, z}));
      },
      py::arg("locations"), py::arg("weights"), py::arg("area"), py::arg("center"));

  m.def(
      "density",
      [](const PyDiagram& d, const std::string& kind, const std::vector<double>& xs) {
        const TransitionDensity rho(d.diagram, parse_walk_kind(kind));
        std::vector<double> out;
        out.reserve(xs.size());
        for (double x : xs) out.push_back(rho(x));
        return out;
      },
      py::arg("diagram"), py::arg("walk"), py::arg("x"));
  m.def(
      "density_mass",
      [](const PyDiagram& d, const std::string& kind) {
        return TransitionDensity(d.diagram, parse_walk_kind(kind)).mass();
      },
      py::arg("diagram"), py::arg("walk"));
  m.def(
      "density_grid",
      [](const PyDiagram& d, const std::string& kind, int n) {
        const TransitionDensity rho(d.diagram, parse_walk_kind(kind));
        const DensityGrid g = sample_density(rho, graded_grid(rho, n));
        return py::dict(py::arg("grid") = g.grid, py::arg("values") = g.values,
                        py::arg("interval") = py::make_tuple(g.interval.a, g.interval.b),
                        py::arg("left_exponent") = g.left_exponent,
                        py::arg("right_exponent") = g.right_exponent);
      },
      py::arg("diagram"), py::arg("walk"), py::arg("n"));
  m.def(
      "invert_density",
      [](std::vector<double> grid, std::vector<double> values, std::pair<double, double> I,
         const std::string& kind, double left_exponent, double right_exponent,
         std::optional<double> A, std::optional<double> z) {
        DensityGrid g{std::move(grid), std::move(values), {I.first, I.second},
                      parse_walk_kind(kind), left_exponent, right_exponent};
        g.validate();
        SlopeFunction s;
        if (g.kind == WalkKind::exterior) {
          s = recover_slopes(g);
        } else {
          if (!A || !z) throw InvalidInput("interior inversion needs area and center");
          s = recover_slopes(g, InteriorInverseParams{*A, *z});
        }
        return PyDiagram(diagram_from_slopes(s));
      },
      py::arg("grid"), py::arg("values"), py::arg("interval"), py::arg("walk"),
      py::arg("left_exponent") = 0.0, py::arg("right_exponent") = 0.0,
      py::arg("area") = py::none(), py::arg("center") = py::none());
  m.def(
      "cauchy_identity",
      [](const PyDiagram& d, double x, const std::string& kind) {
        const IdentitySides s = cauchy_identity(d.diagram, x, parse_walk_kind(kind));
        return py::make_tuple(s.lhs, s.rhs);
      },
      py::arg("diagram"), py::arg("x"), py::arg("walk"));

  m.def(
      "p_moments", [](const PyDiagram& d, int N) { return p_moments(d.diagram, N).values; },
      py::arg("diagram"), py::arg("max_order"));
  m.def("h_from_p", [](std::vector<double> p) {
    return h_from_p(moments_of(MomentKind::p, std::move(p))).values;
  });
  m.def(
      "g_from_p",
      [](std::vector<double> p, double A) {
        return g_from_p(moments_of(MomentKind::p, std::move(p)), A).values;
      },
      py::arg("p"), py::arg("area"));
  m.def("p_from_h", [](std::vector<double> h) {
    return p_from_h(moments_of(MomentKind::h, std::move(h))).values;
  });

  m.def(
      "simulate",
      [](const PyDiagram& d, const std::string& kind, std::size_t n, std::uint64_t seed,
         double epsilon, int max_steps, int threads) {
        const WalkConfig cfg{epsilon, max_steps, seed};
        const WalkKind k = parse_walk_kind(kind);
        Simulation sim;
        {
          py::gil_scoped_release release;
          sim = simulate(d.diagram, k, n, cfg, threads);
        }
        std::vector<double> xs;
        xs.reserve(sim.samples.size());
        for (const auto& s : sim.samples) xs.push_back(s.limit_x);
        return py::make_tuple(xs, sim.truncated);
      },
      py::arg("diagram"), py::arg("walk"), py::arg("samples"), py::arg("seed") = 0,
      py::arg("epsilon") = 1e-9, py::arg("max_steps") = 10000, py::arg("threads") = 0);
  m.def(
      "ks_distance",
      [](std::vector<double> samples, const std::function<double(double)>& cdf) {
        return ks_distance(EmpiricalCDF(std::move(samples)), cdf);
      },
      py::arg("samples"), py::arg("cdf"));

  m.def(
      "root_fractional_parts",
      [](int n, int threads) { return derivative_root_fractional_parts(n, threads).lambdas; },
      py::arg("n"), py::arg("threads") = 1);
  m.def("limit_curve", &limit_curve, py::arg("x"));
}
