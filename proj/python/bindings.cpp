#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qbmsym/assembly.hpp"
#include "qbmsym/discrete.hpp"
#include "qbmsym/equations.hpp"
#include "qbmsym/errors.hpp"
#include "qbmsym/lm.hpp"
#include "qbmsym/report_io.hpp"
#include "qbmsym/verifier.hpp"

namespace py = pybind11;
using namespace qbmsym;

namespace {

py::object json_to_py(const nlohmann::json& body) {
  const py::object loads = py::module_::import("json").attr("loads");
  return loads(body.dump());
}

struct VisibleSystem {
  MachineSpec spec;
  Partition part;
  GeneratorSet gen;
  EquationSystem sys;
};

VisibleSystem visible_system(const std::string& document) {
  VisibleSystem out;
  out.spec = parse_spec(document);
  out.part = partition(out.spec);
  if (out.part.visible.empty()) throw input_error("machine has no purely visible terms");
  out.gen = find_generator(out.part.visible);
  out.sys = generate_equations(out.part.visible, out.gen);
  return out;
}

Eigen::MatrixXcd element_unitary(const SymmetryGroupReport& report, const std::string& element,
                                 bool full_register) {
  const auto& spec = report.machine;
  if (!element.empty() && element.find_first_not_of("IXYZ") == std::string::npos &&
      static_cast<int>(element.size()) == spec.num_qubits) {
    const auto label = PauliLabel::from_string(element);
    return full_register ? to_dense(label) : to_dense(label.slice(0, spec.num_visible));
  }
  int index = -1;
  for (std::size_t p = 0; p < report.pairs.size(); ++p) {
    if (report.pairs[p].name == element) index = static_cast<int>(p);
  }
  if (index < 0) {
    try {
      index = std::stoi(element);
    } catch (const std::exception&) {
      throw input_error("unknown symmetry element '" + element + "'");
    }
  }
  if (index < 0 || index >= static_cast<int>(report.pairs.size())) {
    throw input_error("element index out of range");
  }
  const auto& pair = report.pairs[index];
  const auto rv = realize_unitary(report.discrete_visible.elements[pair.v], report.gen_visible,
                                  spec.num_visible);
  if (!rv.found) throw input_error("no unitary realization found for " + pair.name);
  if (!full_register || spec.num_hidden == 0) return rv.matrix;
  const auto rh = realize_unitary(report.discrete_hidden.elements[pair.h], report.gen_hidden,
                                  spec.num_hidden);
  if (!rh.found) throw input_error("no unitary realization found for " + pair.name);
  Eigen::MatrixXcd full(rv.matrix.rows() * rh.matrix.rows(),
                        rv.matrix.cols() * rh.matrix.cols());
  for (Eigen::Index r = 0; r < rv.matrix.rows(); ++r)
    for (Eigen::Index c = 0; c < rv.matrix.cols(); ++c)
      full.block(r * rh.matrix.rows(), c * rh.matrix.cols(), rh.matrix.rows(),
                 rh.matrix.cols()) = rv.matrix(r, c) * rh.matrix;
  return full;
}

}  // namespace

PYBIND11_MODULE(_qbmsym, m) {
  m.doc() = "symmetry groups of qubit Boltzmann machines";
  m.attr("__version__") = "0.1.0";

  py::register_exception<input_error>(m, "InputError", PyExc_ValueError);
  py::register_exception<resource_error>(m, "ResourceError", PyExc_RuntimeError);

  // Pauli label calculus on letter strings (optional +/-/+i/-i prefix where a
  // phase makes sense).
  m.def(
      "nu", [](const std::string& a, const std::string& b) {
        return nu(PauliLabel::from_string(a), PauliLabel::from_string(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "omega", [](const std::string& a, const std::string& b) {
        return omega(PauliLabel::from_string(a), PauliLabel::from_string(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "commutes", [](const std::string& a, const std::string& b) {
        return commutes(PauliLabel::from_string(a), PauliLabel::from_string(b));
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "multiply", [](const std::string& a, const std::string& b) {
        return multiply(PhasedPauli::from_string(a), PhasedPauli::from_string(b)).str();
      },
      py::arg("a"), py::arg("b"));
  m.def(
      "dense", [](const std::string& p) { return to_dense(PhasedPauli::from_string(p)); },
      py::arg("pauli"), "dense matrix of a phased Pauli string");

  m.def(
      "parse_spec", [](const std::string& document) { return json_to_py(machine_json(parse_spec(document))); },
      py::arg("document"), "parse a machine document and echo it");

  m.def(
      "analyze", [](const std::string& document) {
        return json_to_py(analyze_report_json(analyze_machine(parse_spec(document))));
      },
      py::arg("document"), "construct the symmetry group of a machine document");

  m.def(
      "equations", [](const std::string& document, bool dump) {
        const auto vs = visible_system(document);
        auto body = equations_report_json(vs.spec, vs.sys);
        if (dump) body["dump"] = vs.sys.dump();
        return json_to_py(body);
      },
      py::arg("document"), py::arg("dump") = false,
      "generate the basic equations and report per-family counts");

  m.def(
      "solve", [](const std::string& document, int restarts, std::uint64_t seed, double tolerance,
                  int max_iter, const std::string& branch, int threads) {
        const auto vs = visible_system(document);
        SolverConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed;
        cfg.tolerance = tolerance;
        cfg.max_iterations = max_iter;
        cfg.threads = threads;
        SweepBranch b = SweepBranch::Auto;
        if (branch == "direct") b = SweepBranch::Direct;
        else if (branch == "zero-pattern") b = SweepBranch::ZeroPattern;
        else if (branch != "auto") throw input_error("unknown branch '" + branch + "'");
        return json_to_py(solution_set_json(sweep(vs.sys, vs.part.visible, vs.gen, cfg, b)));
      },
      py::arg("document"), py::arg("restarts") = 100, py::arg("seed") = 0,
      py::arg("tolerance") = 1e-6, py::arg("max_iter") = 500, py::arg("branch") = "auto",
      py::arg("threads") = 0, "random-restart sweep over the basic equations");

  m.def(
      "boltzmann_state", [](const std::string& document, const Eigen::VectorXd& a) {
        return boltzmann_state(parse_spec(document), a).rho;
      },
      py::arg("document"), py::arg("a"));
  m.def(
      "reduce_visible", [](const Eigen::MatrixXcd& rho, int n_v, int n_h) {
        return reduce_visible(DensityMatrix::validated(rho, 1e-9), n_v, n_h).rho;
      },
      py::arg("rho"), py::arg("n_visible"), py::arg("n_hidden"));
  m.def(
      "relative_entropy", [](const Eigen::MatrixXcd& s, const Eigen::MatrixXcd& t) {
        return relative_entropy(DensityMatrix::validated(s, 1e-9),
                                DensityMatrix::validated(t, 1e-9));
      },
      py::arg("s"), py::arg("t"));

  m.def(
      "minimize_sm", [](const std::string& document, const Eigen::MatrixXcd& target,
                        std::uint64_t seed) {
        MinimizeConfig cfg;
        cfg.seed = seed;
        const auto result =
            minimize_sm(parse_spec(document), DensityMatrix::validated(target, 1e-9), cfg);
        py::dict out;
        out["a"] = result.a;
        out["s_m"] = result.s_m;
        out["boundary"] = result.boundary;
        out["converged"] = result.converged;
        return out;
      },
      py::arg("document"), py::arg("target"), py::arg("seed") = 1,
      "minimal relative entropy between the target and the representable states");

  m.def(
      "element_unitary", [](const std::string& document, const std::string& element,
                            bool full_register) {
        return element_unitary(analyze_machine(parse_spec(document)), element, full_register);
      },
      py::arg("document"), py::arg("element"), py::arg("full_register") = false,
      "realize a symmetry element (by listed name, index, or Pauli string) as a unitary");

  m.def(
      "check_equivalence", [](const std::string& document, const Eigen::MatrixXcd& target,
                              const std::string& element, std::uint64_t seed) {
        const auto spec = parse_spec(document);
        const auto u = element_unitary(analyze_machine(spec), element, false);
        MinimizeConfig cfg;
        cfg.seed = seed;
        const auto report =
            check_target_equivalence(spec, DensityMatrix::validated(target, 1e-9), u, cfg);
        py::dict out;
        out["s_original"] = report.s_original;
        out["s_transformed"] = report.s_transformed;
        out["difference"] = report.difference;
        out["pass"] = report.pass;
        return out;
      },
      py::arg("document"), py::arg("target"), py::arg("element"), py::arg("seed") = 1);

  m.def(
      "check_degeneracy", [](const std::string& document, const Eigen::MatrixXcd& target,
                             const std::string& element, std::uint64_t seed) {
        const auto spec = parse_spec(document);
        const auto analysis = analyze_machine(spec);
        const auto u_full = element_unitary(analysis, element, true);
        const auto u_vis = element_unitary(analysis, element, false);
        MinimizeConfig cfg;
        cfg.seed = seed;
        const auto dm = DensityMatrix::validated(target, 1e-9);
        const auto optimum = minimize_sm(spec, dm, cfg);
        const auto report = check_solution_degeneracy(spec, dm, optimum.a, u_full, u_vis, cfg);
        py::dict out;
        out["a_star"] = report.a_star;
        out["a_prime"] = report.a_prime;
        out["s_star"] = report.s_star;
        out["s_prime"] = report.s_prime;
        out["span_residual"] = report.span_residual;
        out["pass"] = report.pass;
        return out;
      },
      py::arg("document"), py::arg("target"), py::arg("element"), py::arg("seed") = 1);
}
