// Test-only reference implementations, kept independent of the library code
// paths they check.
#pragma once
#include <Eigen/Dense>
#include <complex>
#include <random>
#include <string>
#include <vector>

#include "qbmsym/pauli.hpp"

namespace qbmsym::testing {

// Dense Pauli built letter by letter from hardcoded 2x2 matrices.
inline Eigen::MatrixXcd dense_from_letters(const std::string& letters,
                                           std::complex<double> scale = 1.0) {
  const std::complex<double> im(0, 1);
  Eigen::Matrix2cd mats[4];
  mats[0] << 1, 0, 0, 1;
  mats[1] << 0, 1, 1, 0;
  mats[2] << 0, -im, im, 0;
  mats[3] << 1, 0, 0, -1;
  const auto pick = [&](char c) -> const Eigen::Matrix2cd& {
    switch (c) {
      case 'X': return mats[1];
      case 'Y': return mats[2];
      case 'Z': return mats[3];
      default: return mats[0];
    }
  };
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Constant(1, 1, scale);
  for (const char c : letters) {
    const Eigen::Matrix2cd& f = pick(c);
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r)
      for (Eigen::Index col = 0; col < out.cols(); ++col)
        next.block(2 * r, 2 * col, 2, 2) = out(r, col) * f;
    out = std::move(next);
  }
  return out;
}

inline Eigen::MatrixXcd dense_oracle(const PhasedPauli& p) {
  const std::complex<double> im(0, 1);
  std::complex<double> scale = 1.0;
  for (int k = 0; k < (p.phase_exp & 3); ++k) scale *= im;
  return dense_from_letters(p.label.str(), scale);
}

inline PauliLabel random_label(int n, std::mt19937_64& rng) {
  std::uniform_int_distribution<std::uint64_t> dist(0, (1ull << n) - 1);
  return PauliLabel(n, dist(rng), dist(rng));
}

// All labels on n qubits, in code order.
inline std::vector<PauliLabel> all_labels(int n) {
  std::vector<PauliLabel> out;
  const std::uint64_t mask = (1ull << n) - 1;
  for (std::uint64_t code = 0; code < (1ull << (2 * n)); ++code) {
    out.emplace_back(n, code & mask, code >> n);
  }
  return out;
}

// Exhaustive injective-assignment search used to cross-check the backtracking
// generator-image search on small graphs.
template <typename Predicate>
std::vector<std::vector<int>> brute_force_assignments(int pattern_size, int vertex_count,
                                                      Predicate&& keep) {
  std::vector<std::vector<int>> results;
  std::vector<int> assignment(pattern_size, -1);
  std::vector<bool> used(vertex_count, false);
  const auto recurse = [&](auto&& self, int depth) -> void {
    if (depth == pattern_size) {
      if (keep(assignment)) results.push_back(assignment);
      return;
    }
    for (int v = 0; v < vertex_count; ++v) {
      if (used[v]) continue;
      used[v] = true;
      assignment[depth] = v;
      self(self, depth + 1);
      used[v] = false;
    }
  };
  recurse(recurse, 0);
  return results;
}

}  // namespace qbmsym::testing
