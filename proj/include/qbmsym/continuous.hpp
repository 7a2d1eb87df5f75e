#pragma once
#include <vector>

#include "qbmsym/pauli.hpp"

namespace qbmsym {

/// Generator labels of the continuous symmetry subgroup
/// { exp(i sum_g a_g sigma_g) } over a subsystem. Empty means the subgroup is
/// trivial (identity only).
struct ContinuousGenerators {
  int num_qubits = 0;
  std::vector<PauliLabel> labels;

  bool trivial() const { return labels.empty(); }
};

/// Exhaustive scan of all 4^n_sub labels g (the all-zero label excluded):
/// g is kept iff for every term label t, g^t is again a term label or
/// sigma_g commutes with sigma_t. Throws resource_error when n_sub exceeds
/// the scan cap.
ContinuousGenerators compute_continuous(const std::vector<PauliLabel>& term_labels, int n_sub,
                                        int scan_cap = 10);

}  // namespace qbmsym
