#include "qbmsym/pauli.hpp"

#include <bit>

#include "qbmsym/errors.hpp"

namespace qbmsym {

namespace {

void check_same_size(const PauliLabel& g, const PauliLabel& h) {
  if (g.size() != h.size()) {
    throw input_error("Pauli label length mismatch: " + std::to_string(g.size()) +
                      " vs " + std::to_string(h.size()));
  }
}

int popcount(std::uint64_t w) { return std::popcount(w); }

}  // namespace

PauliLabel::PauliLabel(int num_qubits, std::uint64_t alpha, std::uint64_t beta)
    : n_(num_qubits), alpha_(alpha), beta_(beta) {
  if (num_qubits < 0 || num_qubits > 64) {
    throw input_error("Pauli label size out of range: " + std::to_string(num_qubits));
  }
  const std::uint64_t mask = num_qubits == 64 ? ~0ull : ((1ull << num_qubits) - 1ull);
  if ((alpha & ~mask) || (beta & ~mask)) {
    throw input_error("Pauli label words have bits beyond the qubit count");
  }
}

PauliLabel PauliLabel::from_string(std::string_view s) {
  if (s.size() > 64) throw input_error("Pauli string longer than 64 qubits");
  std::uint64_t a = 0, b = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    switch (s[i]) {
      case 'I': break;
      case 'X': a |= 1ull << i; break;
      case 'Y': a |= 1ull << i; b |= 1ull << i; break;
      case 'Z': b |= 1ull << i; break;
      default:
        throw input_error(std::string("invalid Pauli letter '") + s[i] +
                          "' (expected I, X, Y or Z)");
    }
  }
  return PauliLabel(static_cast<int>(s.size()), a, b);
}

char PauliLabel::letter(int qubit) const {
  static constexpr char kLetters[4] = {'I', 'X', 'Z', 'Y'};  // index = alpha + 2*beta
  return kLetters[(alpha_bit(qubit) ? 1 : 0) + (beta_bit(qubit) ? 2 : 0)];
}

PauliLabel PauliLabel::operator^(const PauliLabel& other) const {
  check_same_size(*this, other);
  return PauliLabel(n_, alpha_ ^ other.alpha_, beta_ ^ other.beta_);
}

PauliLabel PauliLabel::slice(int begin, int count) const {
  if (begin < 0 || count < 0 || begin + count > n_) {
    throw input_error("Pauli label slice out of range");
  }
  const std::uint64_t mask = count == 64 ? ~0ull : ((1ull << count) - 1ull);
  return PauliLabel(count, (alpha_ >> begin) & mask, (beta_ >> begin) & mask);
}

PauliLabel PauliLabel::concat(const PauliLabel& a, const PauliLabel& b) {
  if (a.size() + b.size() > 64) throw input_error("concatenated label exceeds 64 qubits");
  return PauliLabel(a.size() + b.size(), a.alpha_ | (b.alpha_ << a.size()),
                    a.beta_ | (b.beta_ << a.size()));
}

std::string PauliLabel::str() const {
  std::string s(static_cast<std::size_t>(n_), 'I');
  for (int i = 0; i < n_; ++i) s[static_cast<std::size_t>(i)] = letter(i);
  return s;
}

PhasedPauli PhasedPauli::from_string(std::string_view s) {
  int phase = 0;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    const bool minus = s[0] == '-';
    s.remove_prefix(1);
    bool imaginary = false;
    if (!s.empty() && s[0] == 'i') {
      imaginary = true;
      s.remove_prefix(1);
    }
    phase = imaginary ? (minus ? 3 : 1) : (minus ? 2 : 0);
  }
  return {PauliLabel::from_string(s), phase};
}

std::string PhasedPauli::str() const {
  static constexpr const char* kPrefix[4] = {"+", "+i", "-", "-i"};
  return std::string(kPrefix[phase_exp & 3]) + label.str();
}

int nu(const PauliLabel& g, const PauliLabel& h) {
  check_same_size(g, h);
  return popcount(g.alpha_word() & h.beta_word()) - popcount(h.alpha_word() & g.beta_word());
}

int omega(const PauliLabel& g, const PauliLabel& h) {
  check_same_size(g, h);
  const std::uint64_t a = g.alpha_word(), b = g.beta_word();
  const std::uint64_t ap = h.alpha_word(), bp = h.beta_word();
  // Per qubit: 4 where both labels carry Y-type overlap on alpha and beta,
  // 2 where exactly one of the two factors overlaps.
  return 4 * popcount(a & ap & b & bp) + 2 * popcount((a & ap) & (b ^ bp)) +
         2 * popcount((a ^ ap) & (b & bp));
}

bool commutes(const PauliLabel& g, const PauliLabel& h) {
  check_same_size(g, h);
  return ((popcount(g.alpha_word() & h.beta_word()) +
           popcount(h.alpha_word() & g.beta_word())) & 1) == 0;
}

PhasedPauli multiply(const PhasedPauli& a, const PhasedPauli& b) {
  const int w = omega(a.label, b.label);
  const int v = nu(a.label, b.label);
  const int phase = (((a.phase_exp + b.phase_exp + w - v) % 4) + 4) % 4;
  return {a.label ^ b.label, phase};
}

std::complex<double> phase_value(int phase_exp) {
  switch (((phase_exp % 4) + 4) % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

Eigen::MatrixXcd to_dense(const PhasedPauli& a, int cap) {
  const int n = a.label.size();
  if (n > cap) {
    throw resource_error("dense Pauli realization for " + std::to_string(n) +
                         " qubits exceeds the cap of " + std::to_string(cap));
  }
  using Mat2 = Eigen::Matrix2cd;
  const std::complex<double> im(0.0, 1.0);
  Mat2 sx, sz, sy, id;
  id << 1, 0, 0, 1;
  sx << 0, 1, 1, 0;
  sz << 1, 0, 0, -1;
  sy << 0, -im, im, 0;

  Eigen::MatrixXcd result = Eigen::MatrixXcd::Constant(1, 1, phase_value(a.phase_exp));
  for (int q = 0; q < n; ++q) {
    const Mat2* factor = &id;
    switch (a.label.letter(q)) {
      case 'X': factor = &sx; break;
      case 'Y': factor = &sy; break;
      case 'Z': factor = &sz; break;
      default: break;
    }
    Eigen::MatrixXcd next(result.rows() * 2, result.cols() * 2);
    for (Eigen::Index r = 0; r < result.rows(); ++r)
      for (Eigen::Index c = 0; c < result.cols(); ++c)
        next.block(2 * r, 2 * c, 2, 2) = result(r, c) * (*factor);
    result = std::move(next);
  }
  return result;
}

Eigen::MatrixXcd to_dense(const PauliLabel& g, int cap) {
  return to_dense(PhasedPauli{g, 0}, cap);
}

}  // namespace qbmsym
