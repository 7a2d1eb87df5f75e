#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbmsym/comm_graph.hpp"
#include "qbmsym/continuous.hpp"
#include "qbmsym/machine.hpp"

namespace qbmsym {

/// One discrete symmetry element modulo the subsystem Pauli group: a signed
/// label permutation, classified at label level (signs are absorbed by Pauli
/// factors and resolved only when a unitary realization is requested).
struct CliffordMap {
  std::vector<PauliLabel> generator_images;  // parallel to gen.generators
  std::vector<PauliLabel> induced;           // parallel to gen.labels
  std::string name;
  /// Label action reproduced by the continuous subgroup alone.
  bool absorbed_by_continuous = false;
  /// Elements equal modulo the continuous subgroup share a class id.
  int class_id = 0;

  /// Extends the map to any label in the generator span.
  PauliLabel apply(const PauliLabel& label, const GeneratorSet& gen) const;
  bool is_identity(const GeneratorSet& gen) const;
};

struct DiscreteGroupReport {
  GeneratorSet gen;
  std::vector<CliffordMap> elements;
  std::string factor_note;          // the dropped Pauli factor
  int classes_mod_continuous = 0;   // distinct class ids

  int order() const { return static_cast<int>(elements.size()); }
  const CliffordMap* find(const std::vector<PauliLabel>& generator_images) const;
};

/// Procedure step 2b: generator-image search on the anticommutation graph,
/// generation-rule filtering, and group-axiom verification. The continuous
/// generators are used to flag elements whose action already lies in the
/// continuous subgroup and to group elements into classes modulo it.
DiscreteGroupReport enumerate_discrete(const std::vector<PauliLabel>& terms,
                                       const GeneratorSet& gen, const CommGraph& graph,
                                       const ContinuousGenerators& continuous,
                                       std::size_t order_cap = 1000000);

/// Group law: (a o b)(x) = a(b(x)). Throws input_error on mismatched sources.
CliffordMap compose(const CliffordMap& a, const CliffordMap& b, const GeneratorSet& gen);

std::optional<CliffordMap> inverse(const CliffordMap& m, const GeneratorSet& gen);

struct UnitaryRealization {
  bool found = false;
  Eigen::MatrixXcd matrix;             // 2^n x 2^n
  std::vector<std::string> gate_word;  // leftmost gate acts last
  std::string note;
};

/// Searches breadth-first over words in {H(i), S(i), SWAP(i,j), CX(i,j)} for
/// a unitary conjugating each generator to (plus or minus) its image, and
/// verifies the result by dense conjugation. Not finding one within the state
/// cap is reported, not thrown.
UnitaryRealization realize_unitary(const CliffordMap& m, const GeneratorSet& gen, int num_qubits,
                                   std::size_t state_cap = 2000000);

/// Quarter-turn label actions of exp(i theta sigma_g), g in continuous, close
/// into a finite set of span maps; used for absorption flags and class ids.
std::vector<std::vector<PauliLabel>> continuous_label_actions(
    const ContinuousGenerators& continuous, const GeneratorSet& gen, std::size_t cap = 100000);

/// Human-readable classification: identity, qubit permutation, basis-exchange
/// times permutation, short gate word, or a raw mapping dump.
std::string classify_map_name(const std::vector<PauliLabel>& generator_images,
                              const GeneratorSet& gen, int num_qubits);

}  // namespace qbmsym
