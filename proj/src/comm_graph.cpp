#include "qbmsym/comm_graph.hpp"

#include <algorithm>
#include <bit>
#include <sstream>
#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

int CommGraph::degree(int v) const {
  return static_cast<int>(std::count(adjacency[v].begin(), adjacency[v].end(), true));
}

int CommGraph::edge_count() const {
  int total = 0;
  for (std::size_t v = 0; v < vertices.size(); ++v) total += degree(static_cast<int>(v));
  return total / 2;
}

std::string CommGraph::edge_list() const {
  std::ostringstream out;
  for (std::size_t u = 0; u < vertices.size(); ++u)
    for (std::size_t v = u + 1; v < vertices.size(); ++v)
      if (adjacency[u][v]) out << vertices[u].str() << " " << vertices[v].str() << "\n";
  return out.str();
}

CommGraph build_graph(const std::vector<PauliLabel>& labels) {
  CommGraph graph;
  graph.vertices = labels;
  const auto n = labels.size();
  graph.adjacency.assign(n, std::vector<bool>(n, false));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      const bool anti = !commutes(labels[u], labels[v]);
      graph.adjacency[u][v] = anti;
      graph.adjacency[v][u] = anti;
    }
  }
  return graph;
}

namespace {

// Incremental F2 independence tracker for the image stack.
struct IndependenceStack {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> reduced;  // echelon rows

  static int leading_bit(std::uint64_t a, std::uint64_t b) {
    if (a) return std::countr_zero(a);
    return 64 + std::countr_zero(b);
  }

  bool push(const PauliLabel& label) {
    std::uint64_t a = label.alpha_word(), b = label.beta_word();
    for (const auto& [ra, rb] : reduced) {
      const int lead = leading_bit(ra, rb);
      const bool hit = lead < 64 ? ((a >> lead) & 1) : ((b >> (lead - 64)) & 1);
      if (hit) {
        a ^= ra;
        b ^= rb;
      }
    }
    if (a == 0 && b == 0) return false;
    reduced.emplace_back(a, b);
    std::sort(reduced.begin(), reduced.end(), [](const auto& x, const auto& y) {
      return leading_bit(x.first, x.second) < leading_bit(y.first, y.second);
    });
    return true;
  }
};

struct Search {
  const CommGraph& graph;
  const GeneratorSet& gen;
  std::vector<std::vector<bool>> pattern;  // adjacency among generators
  std::vector<int> pattern_degree;
  std::unordered_set<PauliLabel, LabelHash> vertex_set;
  std::vector<int> assignment;
  std::vector<bool> used;
  std::vector<std::vector<int>> results;

  explicit Search(const CommGraph& g, const GeneratorSet& gs) : graph(g), gen(gs) {
    const int k = gen.num_generators();
    pattern.assign(k, std::vector<bool>(k, false));
    pattern_degree.assign(k, 0);
    for (int i = 0; i < k; ++i) {
      for (int j = 0; j < k; ++j) {
        if (i != j && !commutes(gen.generators[i], gen.generators[j])) {
          pattern[i][j] = true;
          ++pattern_degree[i];
        }
      }
    }
    for (const auto& v : graph.vertices) vertex_set.insert(v);
    assignment.assign(k, -1);
    used.assign(graph.vertices.size(), false);
  }

  bool independent_prefix(int depth) const {
    IndependenceStack stack;
    for (int i = 0; i <= depth; ++i) {
      if (!stack.push(graph.vertices[assignment[i]])) return false;
    }
    return true;
  }

  bool generation_rule_holds() const {
    for (std::size_t i = 0; i < gen.labels.size(); ++i) {
      PauliLabel image = PauliLabel::zero(gen.labels[i].size());
      const std::uint64_t mask = gen.decompositions[i];
      for (int k = 0; k < gen.num_generators(); ++k) {
        if ((mask >> k) & 1) image = image ^ graph.vertices[assignment[k]];
      }
      if (!vertex_set.contains(image)) return false;
    }
    return true;
  }

  void run(int depth) {
    const int k = gen.num_generators();
    if (depth == k) {
      if (generation_rule_holds()) results.push_back(assignment);
      return;
    }
    for (int v = 0; v < static_cast<int>(graph.vertices.size()); ++v) {
      if (used[v]) continue;
      if (graph.degree(v) < pattern_degree[depth]) continue;
      bool ok = true;
      for (int i = 0; i < depth && ok; ++i) {
        ok = graph.edge(assignment[i], v) == pattern[i][depth];
      }
      if (!ok) continue;
      assignment[depth] = v;
      if (independent_prefix(depth)) {
        used[v] = true;
        run(depth + 1);
        used[v] = false;
      }
      assignment[depth] = -1;
    }
  }
};

}  // namespace

std::vector<std::vector<int>> generator_images(const CommGraph& graph, const GeneratorSet& gen) {
  for (const auto& g : gen.generators) {
    if (std::find(graph.vertices.begin(), graph.vertices.end(), g) == graph.vertices.end()) {
      throw input_error("generator_images: generator " + g.str() + " is not a graph vertex");
    }
  }
  Search search(graph, gen);
  search.run(0);
  return search.results;
}

}  // namespace qbmsym
