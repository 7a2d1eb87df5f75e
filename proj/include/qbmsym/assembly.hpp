#pragma once
#include <string>
#include <vector>

#include "qbmsym/comm_graph.hpp"
#include "qbmsym/continuous.hpp"
#include "qbmsym/discrete.hpp"
#include "qbmsym/machine.hpp"

namespace qbmsym {

struct AnalyzeOptions {
  int scan_cap = 10;             // continuous-subgroup exhaustive scan
  std::size_t order_cap = 1000000;  // discrete enumeration
  int dense_cap = kDenseCapDefault;
};

/// The assembled symmetry group of a machine: continuous generators per
/// factor, the discrete element pairs surviving the coupling filter, and the
/// human-readable classification. For machines without hidden qubits the
/// hidden parts are empty and each pair holds h = -1.
struct SymmetryGroupReport {
  MachineSpec machine;
  Partition part;

  GeneratorSet gen_visible, gen_hidden;
  CommGraph graph_visible, graph_hidden;
  ContinuousGenerators continuous_visible, continuous_hidden;  // coupling-filtered
  DiscreteGroupReport discrete_visible, discrete_hidden;

  struct Pair {
    int v = -1;
    int h = -1;
    std::string name;
    int class_id = 0;  // modulo the continuous subgroup
  };
  std::vector<Pair> pairs;

  int order_mod_pauli = 0;
  int classes_mod_continuous = 0;
  std::string pauli_factor_note;
  std::string classification;
  std::vector<std::string> warnings;

  bool has_hidden() const { return machine.num_hidden > 0; }
  std::string text_report() const;
};

/// The coupling filter: a pair (m_v, m_h) survives iff the image of every
/// coupling label, split across the factors, is again a coupling label.
/// Continuous generators survive iff the per-label criterion holds against
/// the full term set.
SymmetryGroupReport assemble(const MachineSpec& machine, const Partition& part,
                             const GeneratorSet& gen_v, const CommGraph& graph_v,
                             const ContinuousGenerators& cont_v, const DiscreteGroupReport& dis_v,
                             const GeneratorSet& gen_h, const CommGraph& graph_h,
                             const ContinuousGenerators& cont_h, const DiscreteGroupReport& dis_h);

/// Steps 1-4 of the construction procedure: partition, per-factor generator
/// sets, anticommutation graphs, continuous and discrete subgroups, coupling
/// filter.
SymmetryGroupReport analyze_machine(const MachineSpec& spec, const AnalyzeOptions& opts = {});

}  // namespace qbmsym
