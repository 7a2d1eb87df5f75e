#pragma once
#include <Eigen/Dense>
#include <complex>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qbmsym {

inline constexpr int kDenseCapDefault = 12;

/// An n-qubit Pauli operator without phase, encoded as one (alpha, beta) bit
/// pair per qubit: sigma = sigma_x^alpha * sigma_z^beta up to the fixed phase
/// convention (see PhasedPauli). Qubit i (0-based) lives in bit i of both
/// words, so XOR of labels is a word-parallel operation.
///
/// Letters: I=(0,0)  X=(1,0)  Y=(1,1)  Z=(0,1).
class PauliLabel {
 public:
  PauliLabel() = default;
  PauliLabel(int num_qubits, std::uint64_t alpha, std::uint64_t beta);

  static PauliLabel zero(int num_qubits) { return PauliLabel(num_qubits, 0, 0); }

  /// Parses an uppercase letter string over {I,X,Y,Z}; leftmost letter is
  /// qubit 1.
  static PauliLabel from_string(std::string_view s);

  int size() const { return n_; }
  std::uint64_t alpha_word() const { return alpha_; }
  std::uint64_t beta_word() const { return beta_; }

  bool alpha_bit(int qubit) const { return (alpha_ >> qubit) & 1u; }
  bool beta_bit(int qubit) const { return (beta_ >> qubit) & 1u; }
  bool is_zero() const { return alpha_ == 0 && beta_ == 0; }
  char letter(int qubit) const;

  PauliLabel operator^(const PauliLabel& other) const;
  bool operator==(const PauliLabel& other) const = default;

  /// Restriction to qubits [begin, begin+count).
  PauliLabel slice(int begin, int count) const;
  /// Tensor concatenation: `a` on the leading qubits, `b` on the trailing.
  static PauliLabel concat(const PauliLabel& a, const PauliLabel& b);

  std::string str() const;

 private:
  int n_ = 0;
  std::uint64_t alpha_ = 0;
  std::uint64_t beta_ = 0;
};

struct LabelHash {
  std::size_t operator()(const PauliLabel& g) const noexcept {
    std::size_t h = std::hash<std::uint64_t>{}(g.alpha_word());
    h ^= std::hash<std::uint64_t>{}(g.beta_word()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h ^= std::hash<int>{}(g.size()) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    return h;
  }
};

/// i^phase_exp * sigma_label, with phase_exp in {0,1,2,3}.
struct PhasedPauli {
  PauliLabel label;
  int phase_exp = 0;

  static PhasedPauli identity(int num_qubits) { return {PauliLabel::zero(num_qubits), 0}; }
  /// Accepts an optional phase prefix among {+, -, +i, -i} before the letters.
  static PhasedPauli from_string(std::string_view s);
  std::string str() const;
  bool operator==(const PhasedPauli& other) const = default;
};

/// The antisymmetric form sum_i (alpha_i beta'_i - alpha'_i beta_i).
/// Its parity decides commutation; the exact integer enters phases.
int nu(const PauliLabel& g, const PauliLabel& h);

/// The symmetric form sum_i [(a+a')(b+b') - (a^a')(b^b')], kept as an exact
/// integer (per-qubit values are 0, 2 or 4) and reduced mod 4 only when a
/// phase exponent is composed.
int omega(const PauliLabel& g, const PauliLabel& h);

/// True iff sigma_g and sigma_h commute (nu parity even).
bool commutes(const PauliLabel& g, const PauliLabel& h);

/// sigma_g sigma_h = i^{omega - nu} sigma_{g^h}, extended with the operand
/// phases.
PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b);

std::complex<double> phase_value(int phase_exp);

/// Dense 2^n x 2^n realization; qubit 1 is the leftmost (most significant)
/// tensor factor. Throws resource_error when n exceeds the cap.
Eigen::MatrixXcd to_dense(const PhasedPauli& a, int cap = kDenseCapDefault);
Eigen::MatrixXcd to_dense(const PauliLabel& g, int cap = kDenseCapDefault);

}  // namespace qbmsym
