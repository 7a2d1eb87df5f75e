#pragma once
#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qbmsym/continuous.hpp"
#include "qbmsym/discrete.hpp"
#include "qbmsym/equations.hpp"

namespace qbmsym {

struct SolverConfig {
  double tolerance = 1e-6;        // solution acceptance on F
  int max_iterations = 500;       // accepted steps per run
  double damping_init = 1e-3;
  double damping_up = 10.0;
  double damping_down = 0.1;
  double damping_cap = 1e12;
  double gradient_norm_stop = 1e-12;
  int restarts = 1;
  std::uint64_t seed = 0;
  double init_lo = -1.0, init_hi = 1.0;
  int threads = 0;                // 0 = hardware concurrency
  // Zero-pattern branch.
  int direct_unknown_cap = 64;    // at most this many unknowns for the direct branch
  int restarts_per_combination = 20;
  int zero_combination_cap = 4096;
  // Accepted solutions are polished toward this before classification.
  double polish_f = 1e-18;
};

enum class LmStatus { Solution, LocalMinimum, MaxIterations };

struct LmResult {
  Eigen::VectorXd u;
  double f_value = 0.0;
  LmStatus status = LmStatus::LocalMinimum;
  int iterations = 0;  // accepted steps
};

/// Damped normal-equation iteration: solve (J^T J + lambda I) d = -J^T f,
/// accept the step only when F decreases, adapt lambda.
LmResult lm_solve(const EquationSystem& sys, Eigen::VectorXd init, const SolverConfig& cfg);

enum class SolutionKind { SignedPermutation, ContinuousFamily, Unclassified };

struct ClassifiedSolution {
  Eigen::VectorXd u;       // sign-aligned representative
  double f_value = 0.0;
  SolutionKind kind = SolutionKind::Unclassified;
  std::string class_name;  // frequency key
  std::string detail;      // e.g. the discrete coset of a continuous solution
  long hits = 0;
};

struct SolutionSet {
  std::vector<ClassifiedSolution> solutions;   // deduplicated
  std::map<std::string, long> class_frequency; // per class_name
  long local_minima = 0;
  long runs_total = 0;
  double wall_seconds = 0.0;
  std::vector<std::string> warnings;

  long unclassified_count() const;
};

enum class SweepBranch { Auto, Direct, ZeroPattern };

/// Random-restart sweep over the basic equations: the direct branch restarts
/// from uniform [-1,1] points; the zero-pattern branch enumerates zero
/// assignments from the unique-XOR constraints, substitutes them and solves
/// the reduced systems. Converged solutions are polished, sign-aligned,
/// deduplicated and classified. Deterministic for a fixed config.
SolutionSet sweep(const EquationSystem& sys, const std::vector<PauliLabel>& terms,
                  const GeneratorSet& gen, const SolverConfig& cfg,
                  SweepBranch branch = SweepBranch::Auto);

/// Classification of a single converged solution: a signed permutation matched
/// against the enumerated discrete report, a member of the continuous family
/// (possibly composed with a discrete element), or unclassified.
class SolutionClassifier {
 public:
  SolutionClassifier(const UnknownLayout& layout, const std::vector<PauliLabel>& terms,
                     const GeneratorSet& gen, const DiscreteGroupReport& report,
                     const ContinuousGenerators& continuous);

  struct Result {
    SolutionKind kind = SolutionKind::Unclassified;
    std::string class_name = "unclassified";
    std::string detail;
  };
  Result classify(const Eigen::VectorXd& u) const;

  /// Row signs flipped so the largest-magnitude entry of each row is positive.
  Eigen::VectorXd sign_aligned(const Eigen::VectorXd& u) const;

  const DiscreteGroupReport& report() const { return report_; }

 private:
  UnknownLayout layout_;
  GeneratorSet gen_;
  DiscreteGroupReport report_;
  ContinuousGenerators continuous_;
  int n_sub_ = 0;
  std::vector<Eigen::MatrixXcd> realized_;       // per discrete element
  std::vector<Eigen::MatrixXcd> cont_dense_;     // dense continuous generators
  std::vector<Eigen::MatrixXcd> col_dense_, row_dense_;

  Eigen::VectorXd rows_of_unitary(const Eigen::MatrixXcd& v) const;
  std::string nearest_corner_name(std::size_t w, const Eigen::VectorXd& angles) const;
};

SolutionClassifier::Result classify_solution(const Eigen::VectorXd& u,
                                             const std::vector<PauliLabel>& terms,
                                             const GeneratorSet& gen,
                                             const ContinuousGenerators& continuous);

}  // namespace qbmsym
