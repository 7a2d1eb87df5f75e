#include "qbmsym/continuous.hpp"

#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

ContinuousGenerators compute_continuous(const std::vector<PauliLabel>& term_labels, int n_sub,
                                        int scan_cap) {
  if (n_sub > scan_cap) {
    throw resource_error("continuous-subgroup scan over " + std::to_string(n_sub) +
                         " qubits exceeds the cap of " + std::to_string(scan_cap));
  }
  std::unordered_set<PauliLabel, LabelHash> term_set(term_labels.begin(), term_labels.end());

  ContinuousGenerators result;
  result.num_qubits = n_sub;
  const std::uint64_t limit = 1ull << (2 * n_sub);
  const std::uint64_t mask = n_sub == 0 ? 0 : ((1ull << n_sub) - 1ull);
  for (std::uint64_t code = 1; code < limit; ++code) {
    const PauliLabel g(n_sub, code & mask, code >> n_sub);
    bool keep = true;
    for (const auto& t : term_labels) {
      if (!term_set.contains(g ^ t) && !commutes(g, t)) {
        keep = false;
        break;
      }
    }
    if (keep) result.labels.push_back(g);
  }
  return result;
}

}  // namespace qbmsym
