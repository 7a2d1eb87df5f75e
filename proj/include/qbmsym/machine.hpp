#pragma once
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "qbmsym/pauli.hpp"

namespace qbmsym {

/// A machine type: the ordered set of Pauli term labels spanning the allowed
/// Hamiltonian space, split into visible and hidden qubits. Visible qubits
/// are 1..num_visible, hidden qubits follow.
struct MachineSpec {
  std::string name;
  int num_qubits = 0;
  int num_visible = 0;
  int num_hidden = 0;
  std::vector<PauliLabel> terms;
};

/// Parses the machine document format:
///
///   # comment
///   name = my-machine
///   visible = 2
///   hidden = 0
///   XI
///   ZI
///   ...
///
/// One term per line as a Pauli string of length visible+hidden. Throws
/// input_error with a line number on malformed input.
MachineSpec parse_spec(std::string_view document);
MachineSpec load_spec(const std::filesystem::path& path);
std::string spec_document(const MachineSpec& spec);

/// The three-way split of the term set. Visible and hidden members are stored
/// restricted to their own factor; coupling terms keep full length.
struct Partition {
  std::vector<PauliLabel> visible;
  std::vector<PauliLabel> hidden;
  std::vector<PauliLabel> coupling;
};

Partition partition(const MachineSpec& spec);

/// A maximal XOR-independent subset of a label set, chosen greedily in input
/// order, together with the (unique) decomposition of every input label over
/// it and the phase c = i^phase_exp making
///   sigma_label = i^phase_exp * prod_{g in subset, ascending} sigma_g
/// exact.
struct GeneratorSet {
  std::vector<PauliLabel> labels;          // the input set, order preserved
  std::vector<PauliLabel> generators;      // independent subset, input order
  std::vector<std::uint64_t> decompositions;  // per label: bitmask over generators
  std::vector<int> phase_exps;             // per label

  int num_generators() const { return static_cast<int>(generators.size()); }
  PauliLabel xor_of_mask(std::uint64_t mask) const;
  /// Decomposition mask of an arbitrary label over the generators, or nullopt
  /// when the label lies outside the generated span.
  std::optional<std::uint64_t> decompose(const PauliLabel& label) const;
  /// Position of a label in `labels`, or -1.
  int label_index(const PauliLabel& label) const;
};

GeneratorSet find_generator(const std::vector<PauliLabel>& labels);

/// phase_exp such that sigma_gamma = i^phase_exp * prod sigma_g over gamma's
/// decomposition subset taken in ascending generator order. Throws input_error
/// when gamma is not generated.
int decomposition_phase(const PauliLabel& gamma, const GeneratorSet& gen);

}  // namespace qbmsym
