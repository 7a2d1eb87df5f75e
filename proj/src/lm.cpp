#include "qbmsym/lm.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <random>
#include <thread>
#include <unordered_set>

#include "qbmsym/errors.hpp"
#include "qbmsym/simplex.hpp"

namespace qbmsym {

namespace {

constexpr double kSnap = 1e-4;       // entry snap to {-1, 0, 1}
constexpr double kDedup = 1e-3;      // max-norm dedup radius

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

}  // namespace

LmResult lm_solve(const EquationSystem& sys, Eigen::VectorXd init, const SolverConfig& cfg) {
  LmResult result;
  result.u = std::move(init);
  if (result.u.size() != sys.layout.count()) {
    throw input_error("lm_solve: initial point has wrong dimension");
  }

  double f = sys.residual(result.u);
  double lambda = cfg.damping_init;
  Eigen::MatrixXd jtj;
  Eigen::VectorXd jtf, trial;
  bool stalled = false;

  while (result.iterations < cfg.max_iterations && f > cfg.polish_f && !stalled) {
    sys.normal_equations(result.u, jtj, jtf, f);
    if (jtf.lpNorm<Eigen::Infinity>() <= cfg.gradient_norm_stop) break;

    bool accepted = false;
    while (!accepted) {
      Eigen::MatrixXd damped = jtj;
      damped.diagonal().array() += lambda;
      const Eigen::LDLT<Eigen::MatrixXd> solver(damped);
      if (solver.info() == Eigen::Success) {
        trial = result.u - solver.solve(jtf);
        const double f_trial = sys.residual(trial);
        if (std::isfinite(f_trial) && f_trial < f) {
          result.u.swap(trial);
          f = f_trial;
          lambda = std::max(lambda * cfg.damping_down, 1e-14);
          ++result.iterations;
          accepted = true;
          continue;
        }
      }
      lambda *= cfg.damping_up;
      if (lambda > cfg.damping_cap) {
        stalled = true;  // singular or no descent at the damping cap
        break;
      }
    }
  }

  result.f_value = f;
  if (f <= cfg.tolerance) {
    result.status = LmStatus::Solution;
  } else if (result.iterations >= cfg.max_iterations) {
    result.status = LmStatus::MaxIterations;
  } else {
    result.status = LmStatus::LocalMinimum;
  }
  return result;
}

long SolutionSet::unclassified_count() const {
  long count = 0;
  for (const auto& s : solutions) {
    if (s.kind == SolutionKind::Unclassified) count += s.hits;
  }
  return count;
}

// ---------------------------------------------------------------------------
// Classification.

SolutionClassifier::SolutionClassifier(const UnknownLayout& layout,
                                       const std::vector<PauliLabel>& terms,
                                       const GeneratorSet& gen, const DiscreteGroupReport& report,
                                       const ContinuousGenerators& continuous)
    : layout_(layout), gen_(gen), report_(report), continuous_(continuous) {
  n_sub_ = terms.empty() ? 0 : terms.front().size();
  for (const auto& e : report_.elements) {
    const auto realization = realize_unitary(e, gen_, n_sub_);
    realized_.push_back(realization.found ? realization.matrix : Eigen::MatrixXcd());
  }
  for (const auto& g : continuous_.labels) cont_dense_.push_back(to_dense(g));
  for (const auto& g : layout_.cols) col_dense_.push_back(to_dense(g));
  for (const auto& g : layout_.rows) row_dense_.push_back(to_dense(g));
}

Eigen::VectorXd SolutionClassifier::sign_aligned(const Eigen::VectorXd& u) const {
  Eigen::VectorXd out = u;
  const int rows = layout_.num_rows(), cols = layout_.num_cols();
  for (int r = 0; r < rows; ++r) {
    double best = 0.0;
    for (int c = 0; c < cols; ++c) best = std::max(best, std::abs(out[layout_.index(r, c)]));
    int pick = -1;
    for (int c = 0; c < cols && pick < 0; ++c) {
      if (std::abs(out[layout_.index(r, c)]) >= best - 1e-9) pick = c;
    }
    if (pick >= 0 && out[layout_.index(r, pick)] < 0) {
      for (int c = 0; c < cols; ++c) out[layout_.index(r, c)] = -out[layout_.index(r, c)];
    }
  }
  return out;
}

std::string SolutionClassifier::nearest_corner_name(std::size_t w,
                                                    const Eigen::VectorXd& angles) const {
  // Fold each fitted angle by quarter turns: exp(i (m pi/4) sigma_g) acts on
  // labels as the transvection of g, so E(theta) W = E(residual) Q^m W up to
  // Pauli factors. The folded element is the discrete corner nearest the
  // solution. Requires pairwise-commuting continuous generators; otherwise
  // the unfolded element is reported.
  const auto& base = report_.elements[w];
  for (std::size_t i = 0; i < continuous_.labels.size(); ++i)
    for (std::size_t j = i + 1; j < continuous_.labels.size(); ++j)
      if (!commutes(continuous_.labels[i], continuous_.labels[j])) return base.name;

  std::vector<PauliLabel> images = base.generator_images;
  for (Eigen::Index j = 0; j < angles.size(); ++j) {
    const long m = std::lround(angles[j] / (M_PI / 4.0));
    if (m % 2 == 0) continue;  // even quarter turns are Pauli factors
    const auto& g = continuous_.labels[static_cast<std::size_t>(j)];
    for (auto& image : images) {
      if (!commutes(g, image)) image = g ^ image;
    }
  }
  if (const CliffordMap* hit = report_.find(images)) return hit->name;
  return base.name;
}

Eigen::VectorXd SolutionClassifier::rows_of_unitary(const Eigen::MatrixXcd& v) const {
  const double dim = static_cast<double>(v.rows());
  Eigen::VectorXd out(layout_.count());
  for (int r = 0; r < layout_.num_rows(); ++r) {
    const Eigen::MatrixXcd conj = v * row_dense_[r] * v.adjoint();
    for (int c = 0; c < layout_.num_cols(); ++c) {
      out[layout_.index(r, c)] = ((col_dense_[c] * conj).trace() / dim).real();
    }
  }
  return out;
}

SolutionClassifier::Result SolutionClassifier::classify(const Eigen::VectorXd& u) const {
  const int rows = layout_.num_rows(), cols = layout_.num_cols();

  // Signed permutation: every entry near {-1, 0, 1}, one nonzero per row,
  // hit columns distinct.
  bool snapped = true;
  std::vector<int> row_col(rows, -1);
  for (int r = 0; r < rows && snapped; ++r) {
    for (int c = 0; c < cols && snapped; ++c) {
      const double value = std::abs(u[layout_.index(r, c)]);
      if (value < kSnap) continue;
      if (std::abs(value - 1.0) < kSnap) {
        if (row_col[r] >= 0) snapped = false;  // second nonzero in the row
        row_col[r] = c;
      } else {
        snapped = false;
      }
    }
    if (row_col[r] < 0) snapped = false;
  }
  if (snapped) {
    std::unordered_set<int> used(row_col.begin(), row_col.end());
    if (used.size() == row_col.size()) {
      std::vector<PauliLabel> images;
      images.reserve(rows);
      for (int r = 0; r < rows; ++r) images.push_back(layout_.cols[row_col[r]]);
      if (const CliffordMap* hit = report_.find(images)) {
        return {SolutionKind::SignedPermutation, hit->name, ""};
      }
      return {SolutionKind::Unclassified, "unclassified",
              "signed permutation absent from the enumerated discrete group"};
    }
    return {SolutionKind::Unclassified, "unclassified", "column collision in snapped solution"};
  }

  // Continuous family, possibly composed with a discrete element: fit
  // rows(exp(i a.sigma) W) to u in least squares over the angles.
  if (!continuous_.labels.empty()) {
    const int m = static_cast<int>(continuous_.labels.size());
    const int dim = 1 << n_sub_;
    for (std::size_t w = 0; w < report_.elements.size(); ++w) {
      if (realized_[w].size() == 0) continue;
      const auto objective = [&](const Eigen::VectorXd& angles) {
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim, dim);
        for (int j = 0; j < m; ++j) k += angles[j] * cont_dense_[j];
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
        const Eigen::VectorXcd phases =
            (std::complex<double>(0, 1) * eig.eigenvalues().array()).exp();
        const Eigen::MatrixXcd expk =
            eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
        return (rows_of_unitary(expk * realized_[w]) - u).squaredNorm();
      };
      // The objective is pi-periodic in each angle; a 3-point lattice per
      // period plus a simplex polish finds the basin reliably.
      double best = std::numeric_limits<double>::infinity();
      Eigen::VectorXd best_angles;
      const int lattice = 3;
      int points = 1;
      for (int j = 0; j < m; ++j) points *= lattice;
      for (int p = 0; p < points && best > 1e-12; ++p) {
        Eigen::VectorXd start(m);
        int rest = p;
        for (int j = 0; j < m; ++j) {
          start[j] = (rest % lattice) * (M_PI / lattice);
          rest /= lattice;
        }
        const auto fit = nelder_mead(objective, start, {.max_evals = 300, .initial_step = 0.4});
        if (fit.f < best) {
          best = fit.f;
          best_angles = fit.x;
        }
      }
      if (best_angles.size() > 0) {
        // Entry-wise acceptance at the snap tolerance.
        Eigen::MatrixXcd k = Eigen::MatrixXcd::Zero(dim, dim);
        for (int j = 0; j < m; ++j) k += best_angles[j] * cont_dense_[j];
        const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(k);
        const Eigen::VectorXcd phases =
            (std::complex<double>(0, 1) * eig.eigenvalues().array()).exp();
        const Eigen::MatrixXcd expk =
            eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
        const Eigen::VectorXd fitted = rows_of_unitary(expk * realized_[w]);
        if ((fitted - u).lpNorm<Eigen::Infinity>() <= kSnap) {
          return {SolutionKind::ContinuousFamily, "G_c",
                  "nearest " + nearest_corner_name(w, best_angles)};
        }
      }
    }
  }
  return {SolutionKind::Unclassified, "unclassified", "no family fit"};
}

SolutionClassifier::Result classify_solution(const Eigen::VectorXd& u,
                                             const std::vector<PauliLabel>& terms,
                                             const GeneratorSet& gen,
                                             const ContinuousGenerators& continuous) {
  const CommGraph graph = build_graph(terms);
  const DiscreteGroupReport report = enumerate_discrete(terms, gen, graph, continuous);
  EquationSystem probe;
  probe.layout.rows = gen.generators;
  probe.layout.cols = gen.labels;
  const SolutionClassifier classifier(probe.layout, terms, gen, report, continuous);
  return classifier.classify(classifier.sign_aligned(u));
}

// ---------------------------------------------------------------------------
// Sweep.

namespace {

// Maximal independent sets of the conflict graph on columns; the nonzero
// support of each row must avoid every constrained pair, so the admissible
// supports are exactly these sets.
std::vector<std::vector<int>> maximal_independent_sets(int num_cols,
                                                       const std::vector<ZeroConstraint>& edges,
                                                       std::size_t cap) {
  std::vector<std::vector<bool>> conflict(num_cols, std::vector<bool>(num_cols, false));
  for (const auto& e : edges) {
    conflict[e.col_a][e.col_b] = true;
    conflict[e.col_b][e.col_a] = true;
  }
  std::vector<std::vector<int>> results;
  std::vector<int> current;
  // Candidates are scanned in column order; `start` enforces lexicographic
  // generation, the maximality test rejects sets extendible by earlier
  // columns.
  const auto extendible = [&](const std::vector<int>& set, int col) {
    return std::none_of(set.begin(), set.end(), [&](int s) { return conflict[s][col]; });
  };
  const auto recurse = [&](auto&& self, int start) -> void {
    if (results.size() > cap) return;
    bool maximal = true;
    for (int c = 0; c < num_cols; ++c) {
      if (std::find(current.begin(), current.end(), c) == current.end() &&
          extendible(current, c)) {
        maximal = false;
        break;
      }
    }
    if (maximal) {
      results.push_back(current);
      return;
    }
    for (int c = start; c < num_cols; ++c) {
      if (!extendible(current, c)) continue;
      current.push_back(c);
      self(self, c + 1);
      current.pop_back();
    }
  };
  recurse(recurse, 0);
  // Dedup (a set can be reached as a prefix of several branches).
  std::sort(results.begin(), results.end());
  results.erase(std::unique(results.begin(), results.end()), results.end());
  return results;
}

struct Task {
  std::uint64_t seed;
  const EquationSystem* sys;       // reduced or full system
  std::vector<int> zeroed;         // unknowns pinned to zero
};

}  // namespace

SolutionSet sweep(const EquationSystem& sys, const std::vector<PauliLabel>& terms,
                  const GeneratorSet& gen, const SolverConfig& cfg, SweepBranch branch) {
  const auto t_start = std::chrono::steady_clock::now();
  if (cfg.restarts < 1) throw input_error("sweep: restarts must be at least 1");

  SolutionSet out;

  const ContinuousGenerators continuous = compute_continuous(terms, terms.front().size());
  const CommGraph graph = build_graph(terms);
  const DiscreteGroupReport report = enumerate_discrete(terms, gen, graph, continuous);
  const SolutionClassifier classifier(sys.layout, terms, gen, report, continuous);

  const auto constraints = unique_xor_zero_constraints(sys, terms, gen);
  SweepBranch effective = branch;
  if (effective == SweepBranch::Auto) {
    effective = (sys.layout.count() <= cfg.direct_unknown_cap || constraints.empty())
                    ? SweepBranch::Direct
                    : SweepBranch::ZeroPattern;
  }
  if (effective == SweepBranch::ZeroPattern && constraints.empty()) {
    out.warnings.push_back("no unique-XOR constraints; falling back to direct restarts");
    effective = SweepBranch::Direct;
  }

  // Build the task list and (for the zero-pattern branch) the reduced systems.
  std::vector<EquationSystem> reduced_systems;
  std::vector<Task> tasks;
  if (effective == SweepBranch::Direct) {
    reduced_systems.push_back(sys);
    for (int r = 0; r < cfg.restarts; ++r) {
      tasks.push_back({splitmix64(cfg.seed ^ splitmix64(r)), nullptr, {}});
    }
    for (auto& t : tasks) t.sys = &reduced_systems[0];
  } else {
    const auto supports = maximal_independent_sets(sys.layout.num_cols(), constraints, 100000);
    // One support choice per generator row; cap the cross product.
    std::size_t total = 1;
    bool overflow = false;
    for (int r = 0; r < sys.layout.num_rows(); ++r) {
      total *= supports.size();
      if (total > static_cast<std::size_t>(cfg.zero_combination_cap) * 64) {
        overflow = true;
        break;
      }
    }
    std::vector<std::vector<int>> combos;  // per row: support index
    const int rows = sys.layout.num_rows();
    if (!overflow && total <= static_cast<std::size_t>(cfg.zero_combination_cap)) {
      std::vector<int> combo(rows, 0);
      const auto enumerate = [&](auto&& self, int row) -> void {
        if (row == rows) {
          combos.push_back(combo);
          return;
        }
        for (std::size_t s = 0; s < supports.size(); ++s) {
          combo[row] = static_cast<int>(s);
          self(self, row + 1);
        }
      };
      enumerate(enumerate, 0);
    } else {
      out.warnings.push_back("zero-pattern combinations exceed the cap; sampling " +
                             std::to_string(cfg.zero_combination_cap) + " of them");
      std::mt19937_64 rng(splitmix64(cfg.seed ^ 0xc0c0c0c0ull));
      std::uniform_int_distribution<std::size_t> pick(0, supports.size() - 1);
      for (int i = 0; i < cfg.zero_combination_cap; ++i) {
        std::vector<int> combo(rows);
        for (int r = 0; r < rows; ++r) combo[r] = static_cast<int>(pick(rng));
        combos.push_back(std::move(combo));
      }
    }

    reduced_systems.reserve(combos.size());
    std::vector<std::vector<int>> zeroed_per_combo;
    for (const auto& combo : combos) {
      std::vector<int> zeroed;
      for (int r = 0; r < rows; ++r) {
        const auto& support = supports[combo[r]];
        for (int c = 0; c < sys.layout.num_cols(); ++c) {
          if (std::find(support.begin(), support.end(), c) == support.end()) {
            zeroed.push_back(sys.layout.index(r, c));
          }
        }
      }
      reduced_systems.push_back(sys.with_zeroed(zeroed));
      zeroed_per_combo.push_back(std::move(zeroed));
    }
    for (std::size_t combo = 0; combo < combos.size(); ++combo) {
      for (int r = 0; r < cfg.restarts_per_combination; ++r) {
        const std::uint64_t task_id = combo * 1000003ull + static_cast<std::uint64_t>(r);
        tasks.push_back(
            {splitmix64(cfg.seed ^ splitmix64(task_id)), &reduced_systems[combo],
             zeroed_per_combo[combo]});
      }
    }
  }

  // Run tasks on a small pool; results land in per-task slots so the merge
  // order (and hence the SolutionSet) is independent of scheduling.
  std::vector<LmResult> results(tasks.size());
  std::atomic<std::size_t> next{0};
  const int threads = cfg.threads > 0
                          ? cfg.threads
                          : std::max(1u, std::thread::hardware_concurrency());
  const auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      std::mt19937_64 rng(task.seed);
      std::uniform_real_distribution<double> dist(cfg.init_lo, cfg.init_hi);
      Eigen::VectorXd init(sys.layout.count());
      for (int v = 0; v < init.size(); ++v) init[v] = dist(rng);
      for (const int v : task.zeroed) init[v] = 0.0;
      results[i] = lm_solve(*task.sys, std::move(init), cfg);
    }
  };
  {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  out.runs_total = static_cast<long>(tasks.size());
  for (const auto& result : results) {
    if (result.status != LmStatus::Solution) {
      ++out.local_minima;
      continue;
    }
    const Eigen::VectorXd aligned = classifier.sign_aligned(result.u);
    bool merged = false;
    for (auto& known : out.solutions) {
      if ((known.u - aligned).lpNorm<Eigen::Infinity>() < kDedup) {
        ++known.hits;
        ++out.class_frequency[known.class_name];
        merged = true;
        break;
      }
    }
    if (merged) continue;
    ClassifiedSolution solution;
    solution.u = aligned;
    solution.f_value = result.f_value;
    const auto verdict = classifier.classify(aligned);
    solution.kind = verdict.kind;
    solution.class_name = verdict.class_name;
    solution.detail = verdict.detail;
    solution.hits = 1;
    ++out.class_frequency[solution.class_name];
    out.solutions.push_back(std::move(solution));
  }

  out.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return out;
}

}  // namespace qbmsym
