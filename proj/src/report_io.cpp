#include "qbmsym/report_io.hpp"

#include <bit>

namespace qbmsym {

using nlohmann::json;

namespace {

json labels_json(const std::vector<PauliLabel>& labels) {
  json out = json::array();
  for (const auto& g : labels) out.push_back(g.str());
  return out;
}

json generator_set_json(const GeneratorSet& gen) {
  json derived = json::array();
  for (std::size_t i = 0; i < gen.labels.size(); ++i) {
    if (std::popcount(gen.decompositions[i]) < 2) continue;
    json factors = json::array();
    for (int k = 0; k < gen.num_generators(); ++k) {
      if ((gen.decompositions[i] >> k) & 1) factors.push_back(gen.generators[k].str());
    }
    derived.push_back({{"label", gen.labels[i].str()},
                       {"factors", factors},
                       {"phase_exp", gen.phase_exps[i]}});
  }
  return json{{"generators", labels_json(gen.generators)}, {"derived", derived}};
}

json graph_json(const CommGraph& graph) {
  json edges = json::array();
  for (std::size_t u = 0; u < graph.vertices.size(); ++u)
    for (std::size_t v = u + 1; v < graph.vertices.size(); ++v)
      if (graph.adjacency[u][v])
        edges.push_back(json::array({graph.vertices[u].str(), graph.vertices[v].str()}));
  return edges;
}

json discrete_json(const DiscreteGroupReport& report) {
  json elements = json::array();
  for (const auto& e : report.elements) {
    json images = json::object();
    for (std::size_t i = 0; i < report.gen.labels.size(); ++i) {
      images[report.gen.labels[i].str()] = e.induced[i].str();
    }
    elements.push_back({{"name", e.name},
                        {"images", images},
                        {"absorbed_by_continuous", e.absorbed_by_continuous},
                        {"class", e.class_id}});
  }
  return json{{"order", report.order()},
              {"classes_mod_continuous", report.classes_mod_continuous},
              {"elements", elements},
              {"pauli_factor_note", report.factor_note}};
}

}  // namespace

json machine_json(const MachineSpec& spec) {
  return json{{"name", spec.name},
              {"qubits", spec.num_qubits},
              {"visible", spec.num_visible},
              {"hidden", spec.num_hidden},
              {"terms", labels_json(spec.terms)}};
}

json analyze_report_json(const SymmetryGroupReport& report) {
  json pairs = json::array();
  for (const auto& p : report.pairs) {
    pairs.push_back({{"visible", report.discrete_visible.elements[p.v].name},
                     {"hidden", p.h >= 0 ? json(report.discrete_hidden.elements[p.h].name)
                                         : json(nullptr)},
                     {"name", p.name},
                     {"class", p.class_id}});
  }
  json out{
      {"machine", machine_json(report.machine)},
      {"partition",
       {{"visible", labels_json(report.part.visible)},
        {"hidden", labels_json(report.part.hidden)},
        {"coupling", labels_json(report.part.coupling)}}},
      {"generators", {{"visible", generator_set_json(report.gen_visible)}}},
      {"graph", {{"visible", graph_json(report.graph_visible)}}},
      {"continuous",
       {{"visible", labels_json(report.continuous_visible.labels)},
        {"hidden", labels_json(report.continuous_hidden.labels)}}},
      {"discrete", {{"visible", discrete_json(report.discrete_visible)}}},
      {"group",
       {{"pairs", pairs},
        {"order_mod_pauli", report.order_mod_pauli},
        {"classes_mod_continuous", report.classes_mod_continuous},
        {"pauli_factor", report.pauli_factor_note},
        {"classification", report.classification}}},
      {"warnings", report.warnings},
  };
  if (report.has_hidden()) {
    out["generators"]["hidden"] = generator_set_json(report.gen_hidden);
    out["graph"]["hidden"] = graph_json(report.graph_hidden);
    out["discrete"]["hidden"] = discrete_json(report.discrete_hidden);
  }
  return out;
}

json equations_report_json(const MachineSpec& spec, const EquationSystem& sys) {
  const auto counts = sys.counts_by_tag();
  return json{{"machine", spec.name},
              {"unknowns", sys.layout.count()},
              {"counts",
               {{kEqTagNames[0], counts[0]},
                {kEqTagNames[1], counts[1]},
                {kEqTagNames[2], counts[2]},
                {kEqTagNames[3], counts[3]},
                {"total", sys.size()}}}};
}

json solution_set_json(const SolutionSet& set) {
  json classes = json::object();
  for (const auto& [name, hits] : set.class_frequency) classes[name] = hits;
  json solutions = json::array();
  for (const auto& solution : set.solutions) {
    std::vector<double> u(solution.u.data(), solution.u.data() + solution.u.size());
    solutions.push_back({{"class", solution.class_name},
                         {"hits", solution.hits},
                         {"f", solution.f_value},
                         {"detail", solution.detail},
                         {"u", u}});
  }
  return json{{"classes", classes},
              {"local_minima", set.local_minima},
              {"runs_total", set.runs_total},
              {"unclassified", set.unclassified_count()},
              {"solutions", solutions},
              {"warnings", set.warnings}};
}

}  // namespace qbmsym
