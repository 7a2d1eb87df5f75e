#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "qbmsym/machine.hpp"

namespace qbmsym {

/// A validated density matrix: Hermitian, unit trace, nonnegative spectrum
/// (all within 1e-12).
struct DensityMatrix {
  Eigen::MatrixXcd rho;

  static DensityMatrix validated(Eigen::MatrixXcd m, double tol = 1e-12);
  int qubits() const;
  Eigen::Index dim() const { return rho.rows(); }
};

/// exp(a.O)/Tr exp(a.O) over the machine's full qubit register, via Hermitian
/// eigendecomposition.
DensityMatrix boltzmann_state(const MachineSpec& spec, const Eigen::VectorXd& a,
                              int dense_cap = kDenseCapDefault);

/// Partial trace over the trailing n_h qubits.
DensityMatrix reduce_visible(const DensityMatrix& rho, int n_v, int n_h);

/// Tr(s (ln s - ln t)); returns +infinity when s has weight on t's null space
/// (the divergence signal, distinct from an exception on bad input).
double relative_entropy(const DensityMatrix& s, const DensityMatrix& t);

struct MinimizeConfig {
  int max_iterations = 20000;
  double gradient_tol = 1e-9;
  double param_cap = 30.0;   // |a_i| cap; hitting it flags a boundary optimum
  int starts = 8;            // multi-start count for the hidden-unit path
  std::uint64_t seed = 1;
  int simplex_evals = 40000;
};

struct MinimizeResult {
  Eigen::VectorXd a;
  double s_m = 0.0;
  bool boundary = false;   // stopped at the parameter cap
  bool converged = true;
};

/// min_a S(target | visible reduction of the Boltzmann state). Machines
/// without hidden qubits use exact-gradient descent with backtracking (the
/// objective is convex in a); hidden-unit machines use multi-start simplex
/// descent.
MinimizeResult minimize_sm(const MachineSpec& spec, const DensityMatrix& target,
                           const MinimizeConfig& cfg = {});

struct EquivalenceReport {
  double s_original = 0.0;
  double s_transformed = 0.0;
  double difference = 0.0;
  bool pass = false;
  MinimizeResult original, transformed;
};

/// Optimizes both the target and its conjugation by u_visible independently
/// and compares the two optima (tolerance 1e-6).
EquivalenceReport check_target_equivalence(const MachineSpec& spec, const DensityMatrix& target,
                                           const Eigen::MatrixXcd& u_visible,
                                           const MinimizeConfig& cfg = {});

struct DegeneracyReport {
  Eigen::VectorXd a_star, a_prime;
  double s_star = 0.0, s_prime = 0.0;
  double span_residual = 0.0;  // conjugated Hamiltonian outside the term span
  bool pass = false;
};

/// Conjugates H(a_star) by the full-register unitary, re-expands it in the
/// term basis and checks that the transported parameters achieve the same
/// objective. Throws input_error unless u_full's visible factor fixes the
/// target to 1e-8 (checked through u_visible).
DegeneracyReport check_solution_degeneracy(const MachineSpec& spec, const DensityMatrix& target,
                                           const Eigen::VectorXd& a_star,
                                           const Eigen::MatrixXcd& u_full,
                                           const Eigen::MatrixXcd& u_visible,
                                           const MinimizeConfig& cfg = {});

/// Re-expansion of (u H(a) u^dag) in the term basis; the residual is the
/// weight outside the span.
struct ConjugatedParameters {
  Eigen::VectorXd a;
  double span_residual = 0.0;
};
ConjugatedParameters conjugate_parameters(const MachineSpec& spec, const Eigen::VectorXd& a,
                                          const Eigen::MatrixXcd& u_full);

/// Text format: a dimension header line, then rows of whitespace-separated
/// complex entries like `0.25-0.5i`.
DensityMatrix read_density_matrix(std::istream& in);
DensityMatrix load_density_matrix(const std::filesystem::path& path);
void write_density_matrix(std::ostream& out, const DensityMatrix& rho);

}  // namespace qbmsym
