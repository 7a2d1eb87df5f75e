#pragma once
#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qbmsym/machine.hpp"

namespace qbmsym {

/// The four polynomial families constraining the expansion coefficients
/// U[g, g'] of a symmetry transformation over the term labels:
///   RowNorm    - each generator row has unit squared sum
///   SquareCross- cross terms of (U sigma U^dag)^2 cancel per target label
///   Commutation- commutation relations between generator images persist
///   Generation - derived (non-generator) images stay inside the term span
enum class EqTag : std::uint8_t { RowNorm = 0, SquareCross = 1, Commutation = 2, Generation = 3 };

constexpr std::array<const char*, 4> kEqTagNames = {"row-norm", "square-cross", "commutation",
                                                    "generation"};

struct Monomial {
  double coef = 0.0;
  std::vector<std::uint32_t> vars;  // unknown indices, sorted; empty = constant
};

struct Equation {
  EqTag tag;
  std::vector<Monomial> terms;
};

/// Row/column index tables for the unknown matrix U: rows are the generator
/// labels, columns the full label set.
struct UnknownLayout {
  std::vector<PauliLabel> rows;
  std::vector<PauliLabel> cols;

  int num_rows() const { return static_cast<int>(rows.size()); }
  int num_cols() const { return static_cast<int>(cols.size()); }
  int count() const { return num_rows() * num_cols(); }
  int index(int row, int col) const { return row * num_cols() + col; }

  Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>
  as_matrix(const Eigen::VectorXd& u) const {
    return {u.data(), num_rows(), num_cols()};
  }
};

class EquationSystem {
 public:
  UnknownLayout layout;
  std::vector<Equation> equations;

  int size() const { return static_cast<int>(equations.size()); }
  std::array<int, 4> counts_by_tag() const;

  void eval(const Eigen::VectorXd& u, Eigen::VectorXd& f) const;
  /// F(u) = 1/2 sum_i f_i(u)^2.
  double residual(const Eigen::VectorXd& u) const;
  void jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& jac) const;
  /// Fused evaluation of J^T J, J^T f and F, accumulating sparse equation rows.
  void normal_equations(const Eigen::VectorXd& u, Eigen::MatrixXd& jtj, Eigen::VectorXd& jtf,
                        double& f_value) const;

  /// One equation per line: `coef * U[i]*U[j] + ... = 0`.
  std::string dump() const;

  /// A reduced system with the given unknowns pinned to zero: monomials
  /// containing them are dropped.
  EquationSystem with_zeroed(const std::vector<int>& zeroed_unknowns) const;
};

EquationSystem generate_equations(const std::vector<PauliLabel>& terms, const GeneratorSet& gen);

/// Column pairs (a < b, indices into layout.cols) whose product must vanish in
/// every generator row because their XOR target is reached by exactly one
/// contributing pair of the SquareCross family.
struct ZeroConstraint {
  int col_a;
  int col_b;
};

std::vector<ZeroConstraint> unique_xor_zero_constraints(const EquationSystem& sys,
                                                        const std::vector<PauliLabel>& terms,
                                                        const GeneratorSet& gen);

}  // namespace qbmsym
