#include "qbmsym/assembly.hpp"

#include <algorithm>
#include <sstream>
#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

namespace {

std::string join_labels(const std::vector<PauliLabel>& labels) {
  std::string out;
  for (const auto& g : labels) {
    if (!out.empty()) out += ", ";
    out += g.str();
  }
  return out.empty() ? "none" : out;
}

// Per-label criterion against an arbitrary reference term set.
bool continuous_label_survives(const PauliLabel& g, const std::vector<PauliLabel>& terms,
                               const std::unordered_set<PauliLabel, LabelHash>& term_set) {
  for (const auto& t : terms) {
    if (!term_set.contains(g ^ t) && !commutes(g, t)) return false;
  }
  return true;
}

struct TrivialHidden {
  GeneratorSet gen;
  CommGraph graph;
  ContinuousGenerators cont;
  DiscreteGroupReport dis;
};

// Placeholder hidden-side structures for machines without hidden qubits (or
// without pure-hidden terms): a single identity element over zero generators.
TrivialHidden trivial_hidden(int n_sub) {
  TrivialHidden t;
  t.cont.num_qubits = n_sub;
  CliffordMap identity_map;
  identity_map.name = "identity";
  t.dis.elements.push_back(identity_map);
  t.dis.classes_mod_continuous = 1;
  t.dis.factor_note = "trivial";
  return t;
}

}  // namespace

SymmetryGroupReport assemble(const MachineSpec& machine, const Partition& part,
                             const GeneratorSet& gen_v, const CommGraph& graph_v,
                             const ContinuousGenerators& cont_v, const DiscreteGroupReport& dis_v,
                             const GeneratorSet& gen_h, const CommGraph& graph_h,
                             const ContinuousGenerators& cont_h, const DiscreteGroupReport& dis_h) {
  SymmetryGroupReport report;
  report.machine = machine;
  report.part = part;
  report.gen_visible = gen_v;
  report.gen_hidden = gen_h;
  report.graph_visible = graph_v;
  report.graph_hidden = graph_h;
  report.discrete_visible = dis_v;
  report.discrete_hidden = dis_h;

  const int nv = machine.num_visible, nh = machine.num_hidden;
  std::unordered_set<PauliLabel, LabelHash> term_set(machine.terms.begin(), machine.terms.end());
  std::unordered_set<PauliLabel, LabelHash> coupling_set(part.coupling.begin(),
                                                         part.coupling.end());

  // Continuous generators re-filtered against the full term set (embedding the
  // subsystem label into the machine).
  const auto filter_continuous = [&](const ContinuousGenerators& cont, bool visible_side) {
    ContinuousGenerators out;
    out.num_qubits = cont.num_qubits;
    for (const auto& g : cont.labels) {
      const PauliLabel embedded = visible_side
                                      ? PauliLabel::concat(g, PauliLabel::zero(nh))
                                      : PauliLabel::concat(PauliLabel::zero(nv), g);
      if (continuous_label_survives(embedded, machine.terms, term_set)) out.labels.push_back(g);
    }
    return out;
  };
  report.continuous_visible = filter_continuous(cont_v, true);
  report.continuous_hidden = filter_continuous(cont_h, false);

  // Coupling filter over discrete pairs.
  for (std::size_t iv = 0; iv < dis_v.elements.size(); ++iv) {
    for (std::size_t ih = 0; ih < dis_h.elements.size(); ++ih) {
      bool survives = true;
      for (const auto& c : part.coupling) {
        const PauliLabel cv = c.slice(0, nv);
        const PauliLabel ch = c.slice(nv, nh);
        PauliLabel image_v = cv, image_h = ch;
        if (!cv.is_zero()) {
          if (!gen_v.decompose(cv)) {
            report.warnings.push_back("coupling term " + c.str() +
                                      ": visible part outside the visible generator span; "
                                      "pair filter treats it as failing");
            survives = false;
            break;
          }
          image_v = dis_v.elements[iv].apply(cv, gen_v);
        }
        if (!ch.is_zero()) {
          if (!gen_h.decompose(ch)) {
            report.warnings.push_back("coupling term " + c.str() +
                                      ": hidden part outside the hidden generator span; "
                                      "pair filter treats it as failing");
            survives = false;
            break;
          }
          image_h = dis_h.elements[ih].apply(ch, gen_h);
        }
        if (!coupling_set.contains(PauliLabel::concat(image_v, image_h))) {
          survives = false;
          break;
        }
      }
      if (survives) {
        SymmetryGroupReport::Pair pair;
        pair.v = static_cast<int>(iv);
        pair.h = nh > 0 ? static_cast<int>(ih) : -1;
        pair.name = nh > 0 ? dis_v.elements[iv].name + " (x) " + dis_h.elements[ih].name
                           : dis_v.elements[iv].name;
        report.pairs.push_back(pair);
      }
    }
  }

  // Group axioms on the surviving pairs, checked componentwise at label level.
  const auto pair_index = [&](const std::vector<PauliLabel>& v_images,
                              const std::vector<PauliLabel>& h_images) {
    for (std::size_t p = 0; p < report.pairs.size(); ++p) {
      const auto& pr = report.pairs[p];
      if (dis_v.elements[pr.v].generator_images != v_images) continue;
      const auto& h_el = dis_h.elements[pr.h < 0 ? 0 : pr.h];
      if (h_el.generator_images == h_images) return static_cast<int>(p);
    }
    return -1;
  };
  for (const auto& a : report.pairs) {
    for (const auto& b : report.pairs) {
      const auto cv = compose(dis_v.elements[a.v], dis_v.elements[b.v], gen_v);
      const auto ch = compose(dis_h.elements[a.h < 0 ? 0 : a.h],
                              dis_h.elements[b.h < 0 ? 0 : b.h], gen_h);
      if (pair_index(cv.generator_images, ch.generator_images) < 0) {
        throw input_error("assembled symmetry pairs are not closed under composition");
      }
    }
  }

  // Classes modulo the continuous subgroup, componentwise.
  const auto cont_actions_v = continuous_label_actions(report.continuous_visible, gen_v);
  const auto cont_actions_h = continuous_label_actions(report.continuous_hidden, gen_h);
  const auto in_actions = [](const std::vector<std::vector<PauliLabel>>& actions,
                             const std::vector<PauliLabel>& images) {
    return std::find(actions.begin(), actions.end(), images) != actions.end();
  };
  std::vector<int> reps;
  for (auto& pair : report.pairs) {
    int assigned = -1;
    for (std::size_t c = 0; c < reps.size() && assigned < 0; ++c) {
      const auto& rep = report.pairs[reps[c]];
      const auto qv = compose(dis_v.elements[pair.v],
                              *inverse(dis_v.elements[rep.v], gen_v), gen_v);
      const auto qh = compose(dis_h.elements[pair.h < 0 ? 0 : pair.h],
                              *inverse(dis_h.elements[rep.h < 0 ? 0 : rep.h], gen_h), gen_h);
      if (in_actions(cont_actions_v, qv.generator_images) &&
          in_actions(cont_actions_h, qh.generator_images)) {
        assigned = static_cast<int>(c);
      }
    }
    if (assigned < 0) {
      assigned = static_cast<int>(reps.size());
      reps.push_back(static_cast<int>(&pair - report.pairs.data()));
    }
    pair.class_id = assigned;
  }
  report.classes_mod_continuous = static_cast<int>(reps.size());
  report.order_mod_pauli = static_cast<int>(report.pairs.size());

  {
    std::ostringstream note;
    if (nh > 0) {
      note << "x P(1.." << nv << ") (x) P(" << nv + 1 << ".." << nv + nh << ")";
    } else {
      note << "x P(1.." << nv << ")";
    }
    report.pauli_factor_note = note.str();
  }
  {
    std::ostringstream text;
    text << "G = ";
    const bool cont_trivial =
        report.continuous_visible.trivial() && report.continuous_hidden.trivial();
    if (!cont_trivial) {
      text << "{exp(i sum a_g sigma_g): g in {" << join_labels(report.continuous_visible.labels);
      if (nh > 0) text << " | hidden: " << join_labels(report.continuous_hidden.labels);
      text << "}} x ";
    }
    text << "{";
    bool first = true;
    std::unordered_set<int> seen_class;
    for (const auto& pair : report.pairs) {
      if (!seen_class.insert(pair.class_id).second) continue;  // one per class
      if (!first) text << ", ";
      text << pair.name;
      first = false;
    }
    text << "} " << report.pauli_factor_note;
    if (report.classes_mod_continuous < report.order_mod_pauli) {
      text << "  (" << report.order_mod_pauli << " elements, "
           << report.classes_mod_continuous
           << " classes after absorbing exchanges into the continuous subgroup)";
    }
    report.classification = text.str();
  }
  return report;
}

SymmetryGroupReport analyze_machine(const MachineSpec& spec, const AnalyzeOptions& opts) {
  const Partition part = partition(spec);

  if (part.visible.empty()) {
    throw input_error("machine has no purely visible terms; the visible subgroup is unconstrained");
  }
  const GeneratorSet gen_v = find_generator(part.visible);
  const CommGraph graph_v = build_graph(part.visible);
  const ContinuousGenerators cont_v =
      compute_continuous(part.visible, spec.num_visible, opts.scan_cap);
  const DiscreteGroupReport dis_v =
      enumerate_discrete(part.visible, gen_v, graph_v, cont_v, opts.order_cap);

  if (spec.num_hidden == 0) {
    const auto hidden = trivial_hidden(0);
    return assemble(spec, part, gen_v, graph_v, cont_v, dis_v, hidden.gen, hidden.graph,
                    hidden.cont, hidden.dis);
  }

  if (part.hidden.empty()) {
    auto hidden = trivial_hidden(spec.num_hidden);
    auto report = assemble(spec, part, gen_v, graph_v, cont_v, dis_v, hidden.gen, hidden.graph,
                           hidden.cont, hidden.dis);
    report.warnings.push_back(
        "hidden subsystem has no free terms; only the identity is considered on that factor");
    return report;
  }

  const GeneratorSet gen_h = find_generator(part.hidden);
  const CommGraph graph_h = build_graph(part.hidden);
  const ContinuousGenerators cont_h =
      compute_continuous(part.hidden, spec.num_hidden, opts.scan_cap);
  const DiscreteGroupReport dis_h =
      enumerate_discrete(part.hidden, gen_h, graph_h, cont_h, opts.order_cap);
  return assemble(spec, part, gen_v, graph_v, cont_v, dis_v, gen_h, graph_h, cont_h, dis_h);
}

std::string SymmetryGroupReport::text_report() const {
  std::ostringstream out;
  out << "machine: " << machine.name << " (qubits=" << machine.num_qubits
      << ", visible=" << machine.num_visible << ", hidden=" << machine.num_hidden << ")\n";
  out << "terms:";
  for (const auto& t : machine.terms) out << " " << t.str();
  out << "\n";
  out << "partition: visible=" << part.visible.size() << " hidden=" << part.hidden.size()
      << " coupling=" << part.coupling.size() << "\n";
  out << "generators (visible):";
  for (const auto& g : gen_visible.generators) out << " " << g.str();
  out << "\n";
  if (has_hidden()) {
    out << "generators (hidden):";
    for (const auto& g : gen_hidden.generators) out << " " << g.str();
    out << "\n";
  }
  out << "G_c generators (visible): " << join_labels(continuous_visible.labels) << "\n";
  if (has_hidden()) {
    out << "G_c generators (hidden): " << join_labels(continuous_hidden.labels) << "\n";
  }
  out << "discrete elements modulo Pauli factors: " << order_mod_pauli << "\n";
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& pair = pairs[p];
    out << "  [" << p << "] " << pair.name << ":";
    const auto& ev = discrete_visible.elements[pair.v];
    for (std::size_t i = 0; i < gen_visible.labels.size(); ++i) {
      out << " " << gen_visible.labels[i].str() << "->" << ev.induced[i].str();
    }
    if (has_hidden()) {
      const auto& eh = discrete_hidden.elements[pair.h];
      out << " |";
      for (std::size_t i = 0; i < gen_hidden.labels.size(); ++i) {
        out << " " << gen_hidden.labels[i].str() << "->" << eh.induced[i].str();
      }
    }
    if (ev.absorbed_by_continuous &&
        (!has_hidden() || discrete_hidden.elements[pair.h].absorbed_by_continuous)) {
      out << "  (absorbed by G_c)";
    }
    out << "\n";
  }
  out << pauli_factor_note << "\n";
  out << classification << "\n";
  for (const auto& w : warnings) out << "warning: " << w << "\n";
  return out.str();
}

}  // namespace qbmsym
