#pragma once
#include <string>
#include <vector>

#include "qbmsym/machine.hpp"
#include "qbmsym/pauli.hpp"

namespace qbmsym {

/// Anticommutation graph on a label set: an edge joins two labels whose Pauli
/// operators anticommute (nu parity odd). No self loops; adjacency symmetric.
struct CommGraph {
  std::vector<PauliLabel> vertices;
  std::vector<std::vector<bool>> adjacency;

  bool edge(int u, int v) const { return adjacency[u][v]; }
  int degree(int v) const;
  int edge_count() const;
  /// `u v` per line, vertices named by their Pauli strings.
  std::string edge_list() const;
};

CommGraph build_graph(const std::vector<PauliLabel>& labels);

/// All injective maps from gen.generators into graph.vertices whose images are
/// XOR-independent, preserve the anticommutation adjacency of every generator
/// pair, and generate the full label set by the original decomposition rule
/// (the XOR of the images of each label's decomposition subset is again a
/// vertex). Each map is returned as a vector of vertex indices parallel to
/// gen.generators; the list is exhaustive and deterministic (generators
/// assigned in order, candidates tried in vertex-list order).
std::vector<std::vector<int>> generator_images(const CommGraph& graph, const GeneratorSet& gen);

}  // namespace qbmsym
