#include "qbmsym/equations.hpp"

#include <algorithm>
#include <complex>
#include <map>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "qbmsym/errors.hpp"

namespace qbmsym {

namespace {

constexpr double kCoefEps = 1e-12;

using MonomialKey = std::vector<std::uint32_t>;

// Accumulates complex coefficients per sorted monomial, then splits the
// result into real equations (imaginary parts become their own equations);
// identically-zero parts are pruned.
struct ComplexEquation {
  std::map<MonomialKey, std::complex<double>> terms;

  void add(MonomialKey vars, std::complex<double> coef) {
    std::sort(vars.begin(), vars.end());
    terms[std::move(vars)] += coef;
  }

  void emit(EqTag tag, std::vector<Equation>& out) const {
    Equation real_part{tag, {}}, imag_part{tag, {}};
    for (const auto& [vars, coef] : terms) {
      if (std::abs(coef.real()) > kCoefEps) real_part.terms.push_back({coef.real(), vars});
      if (std::abs(coef.imag()) > kCoefEps) imag_part.terms.push_back({coef.imag(), vars});
    }
    if (!real_part.terms.empty()) out.push_back(std::move(real_part));
    if (!imag_part.terms.empty()) out.push_back(std::move(imag_part));
  }
};

std::complex<double> phase_of(int exponent) { return phase_value(((exponent % 4) + 4) % 4); }

}  // namespace

std::array<int, 4> EquationSystem::counts_by_tag() const {
  std::array<int, 4> counts{0, 0, 0, 0};
  for (const auto& eq : equations) counts[static_cast<int>(eq.tag)]++;
  return counts;
}

void EquationSystem::eval(const Eigen::VectorXd& u, Eigen::VectorXd& f) const {
  f.resize(size());
  for (int i = 0; i < size(); ++i) {
    double value = 0.0;
    for (const auto& term : equations[i].terms) {
      double prod = term.coef;
      for (const auto v : term.vars) prod *= u[v];
      value += prod;
    }
    f[i] = value;
  }
}

double EquationSystem::residual(const Eigen::VectorXd& u) const {
  Eigen::VectorXd f;
  eval(u, f);
  return 0.5 * f.squaredNorm();
}

void EquationSystem::jacobian(const Eigen::VectorXd& u, Eigen::MatrixXd& jac) const {
  jac.setZero(size(), u.size());
  for (int i = 0; i < size(); ++i) {
    for (const auto& term : equations[i].terms) {
      for (std::size_t pos = 0; pos < term.vars.size(); ++pos) {
        double partial = term.coef;
        for (std::size_t other = 0; other < term.vars.size(); ++other) {
          if (other != pos) partial *= u[term.vars[other]];
        }
        jac(i, term.vars[pos]) += partial;
      }
    }
  }
}

void EquationSystem::normal_equations(const Eigen::VectorXd& u, Eigen::MatrixXd& jtj,
                                      Eigen::VectorXd& jtf, double& f_value) const {
  const int n = static_cast<int>(u.size());
  jtj.setZero(n, n);
  jtf.setZero(n);
  f_value = 0.0;

  static thread_local std::vector<double> grad;
  static thread_local std::vector<char> seen;
  static thread_local std::vector<int> touched;
  grad.assign(n, 0.0);
  seen.assign(n, 0);
  touched.clear();

  for (const auto& eq : equations) {
    double value = 0.0;
    for (const auto& term : eq.terms) {
      double prod = term.coef;
      for (const auto v : term.vars) prod *= u[v];
      value += prod;
      for (std::size_t pos = 0; pos < term.vars.size(); ++pos) {
        double partial = term.coef;
        for (std::size_t other = 0; other < term.vars.size(); ++other) {
          if (other != pos) partial *= u[term.vars[other]];
        }
        const int v = static_cast<int>(term.vars[pos]);
        if (!seen[v]) {
          seen[v] = 1;
          touched.push_back(v);
        }
        grad[v] += partial;
      }
    }
    f_value += 0.5 * value * value;
    for (const int a : touched) {
      const double ga = grad[a];
      jtf[a] += value * ga;
      for (const int b : touched) {
        if (b >= a) jtj(a, b) += ga * grad[b];
      }
    }
    for (const int v : touched) {
      grad[v] = 0.0;
      seen[v] = 0;
    }
    touched.clear();
  }
  jtj.triangularView<Eigen::StrictlyLower>() = jtj.transpose();
}

std::string EquationSystem::dump() const {
  std::ostringstream out;
  for (const auto& eq : equations) {
    out << kEqTagNames[static_cast<int>(eq.tag)] << ": ";
    bool first = true;
    for (const auto& term : eq.terms) {
      if (!first && term.coef >= 0) out << " + ";
      if (!first && term.coef < 0) out << " - ";
      const double mag = first ? term.coef : std::abs(term.coef);
      out << mag;
      for (const auto v : term.vars) out << "*U[" << v << "]";
      first = false;
    }
    out << " = 0\n";
  }
  return out.str();
}

EquationSystem EquationSystem::with_zeroed(const std::vector<int>& zeroed_unknowns) const {
  std::unordered_set<int> zeroed(zeroed_unknowns.begin(), zeroed_unknowns.end());
  EquationSystem out;
  out.layout = layout;
  for (const auto& eq : equations) {
    Equation reduced{eq.tag, {}};
    for (const auto& term : eq.terms) {
      const bool killed = std::any_of(term.vars.begin(), term.vars.end(), [&](std::uint32_t v) {
        return zeroed.contains(static_cast<int>(v));
      });
      if (!killed) reduced.terms.push_back(term);
    }
    if (!reduced.terms.empty()) out.equations.push_back(std::move(reduced));
  }
  return out;
}

EquationSystem generate_equations(const std::vector<PauliLabel>& terms, const GeneratorSet& gen) {
  if (terms.empty()) throw input_error("generate_equations: empty term set");
  EquationSystem sys;
  sys.layout.rows = gen.generators;
  sys.layout.cols = gen.labels;
  const int num_rows = sys.layout.num_rows();
  const int num_cols = sys.layout.num_cols();
  const int n_sub = terms.front().size();

  std::unordered_map<PauliLabel, int, LabelHash> col_of;
  for (int c = 0; c < num_cols; ++c) col_of.emplace(sys.layout.cols[c], c);

  // Row norms: sum_c U[r,c]^2 = 1.
  for (int r = 0; r < num_rows; ++r) {
    Equation eq{EqTag::RowNorm, {}};
    for (int c = 0; c < num_cols; ++c) {
      const auto v = static_cast<std::uint32_t>(sys.layout.index(r, c));
      eq.terms.push_back({1.0, {v, v}});
    }
    eq.terms.push_back({-1.0, {}});
    sys.equations.push_back(std::move(eq));
  }

  // Buckets of column pairs by XOR target; shared by the SquareCross and
  // Commutation families (which sum over distinct column pairs only).
  struct PairEntry {
    int a, b;                    // column indices, a < b
    std::complex<double> phase;  // i^{omega(a,b) - nu(a,b)}
    bool anticommuting;
  };
  std::unordered_map<PauliLabel, std::vector<PairEntry>, LabelHash> pairs_by_target;
  for (int a = 0; a < num_cols; ++a) {
    for (int b = a + 1; b < num_cols; ++b) {
      const auto& ga = sys.layout.cols[a];
      const auto& gb = sys.layout.cols[b];
      PairEntry entry{a, b, phase_of(omega(ga, gb) - nu(ga, gb)), !commutes(ga, gb)};
      pairs_by_target[ga ^ gb].push_back(entry);
    }
  }
  // Deterministic target order: first appearance over ordered pair iteration.
  std::vector<PauliLabel> targets;
  {
    std::unordered_set<PauliLabel, LabelHash> seen;
    for (int a = 0; a < num_cols; ++a)
      for (int b = a + 1; b < num_cols; ++b) {
        const PauliLabel t = sys.layout.cols[a] ^ sys.layout.cols[b];
        if (seen.insert(t).second) targets.push_back(t);
      }
  }

  // SquareCross: per generator row and target, the two orderings of a pair
  // contribute i^{omega-nu} + i^{omega+nu}; anticommuting pairs cancel.
  for (int r = 0; r < num_rows; ++r) {
    for (const auto& target : targets) {
      ComplexEquation eq;
      for (const auto& entry : pairs_by_target.at(target)) {
        const std::complex<double> coef =
            entry.phase + (entry.anticommuting ? -entry.phase : entry.phase);
        if (std::abs(coef) < kCoefEps) continue;
        eq.add({static_cast<std::uint32_t>(sys.layout.index(r, entry.a)),
                static_cast<std::uint32_t>(sys.layout.index(r, entry.b))},
               coef);
      }
      eq.emit(EqTag::SquareCross, sys.equations);
    }
  }

  // Commutation: for generator rows r1 < r2 with sign s = (-1)^{nu parity},
  // sum over ordered distinct pairs (a,b):
  //   (U[r1,a] U[r2,b] - s U[r2,a] U[r1,b]) i^{omega(a,b)-nu(a,b)}.
  for (int r1 = 0; r1 < num_rows; ++r1) {
    for (int r2 = r1 + 1; r2 < num_rows; ++r2) {
      const double s = commutes(sys.layout.rows[r1], sys.layout.rows[r2]) ? 1.0 : -1.0;
      // Zero-target (diagonal) part: (1 - s) sum_c U[r1,c] U[r2,c] = 0. For
      // anticommuting generators this is row orthogonality; dropping it
      // leaves spurious zeros where rows of anticommuting generators overlap
      // and the off-diagonal phases cancel.
      if (s < 0) {
        Equation ortho{EqTag::Commutation, {}};
        for (int c = 0; c < num_cols; ++c) {
          ortho.terms.push_back({2.0,
                                 {static_cast<std::uint32_t>(sys.layout.index(r1, c)),
                                  static_cast<std::uint32_t>(sys.layout.index(r2, c))}});
        }
        sys.equations.push_back(std::move(ortho));
      }
      for (const auto& target : targets) {
        ComplexEquation eq;
        for (const auto& entry : pairs_by_target.at(target)) {
          const std::complex<double> fwd = entry.phase;         // (a,b)
          const std::complex<double> rev = entry.anticommuting  // (b,a)
                                               ? -entry.phase
                                               : entry.phase;
          const auto u = [&](int row, int col) {
            return static_cast<std::uint32_t>(sys.layout.index(row, col));
          };
          eq.add({u(r1, entry.a), u(r2, entry.b)}, fwd);
          eq.add({u(r2, entry.a), u(r1, entry.b)}, -s * fwd);
          eq.add({u(r1, entry.b), u(r2, entry.a)}, rev);
          eq.add({u(r2, entry.b), u(r1, entry.a)}, -s * rev);
        }
        eq.emit(EqTag::Commutation, sys.equations);
      }
    }
  }

  // Generation: for each label with a decomposition of size k >= 2, the
  // expansion of the k-fold product must cancel at every target outside the
  // term set (the all-zero target included; term labels are never zero).
  for (std::size_t i = 0; i < gen.labels.size(); ++i) {
    std::vector<int> rows_in;
    for (int k = 0; k < gen.num_generators(); ++k) {
      if ((gen.decompositions[i] >> k) & 1) rows_in.push_back(k);
    }
    const int k = static_cast<int>(rows_in.size());
    if (k < 2) continue;

    std::unordered_map<PauliLabel, ComplexEquation, LabelHash> per_target;
    std::vector<int> choice(k, 0);
    MonomialKey vars(k);
    // Depth-first over column tuples, accumulating the product phase exactly.
    const auto recurse = [&](auto&& self, int depth, PhasedPauli acc) -> void {
      if (depth == k) {
        if (col_of.contains(acc.label)) return;  // constrained targets lie outside the set
        for (int j = 0; j < k; ++j)
          vars[j] = static_cast<std::uint32_t>(sys.layout.index(rows_in[j], choice[j]));
        per_target[acc.label].add(vars, phase_of(acc.phase_exp));
        return;
      }
      for (int c = 0; c < num_cols; ++c) {
        choice[depth] = c;
        self(self, depth + 1, multiply(acc, {sys.layout.cols[c], 0}));
      }
    };
    recurse(recurse, 0, PhasedPauli::identity(n_sub));

    // Deterministic emit order: all-label code order.
    std::vector<PauliLabel> keys;
    for (const auto& [key, value] : per_target) keys.push_back(key);
    std::sort(keys.begin(), keys.end(), [](const PauliLabel& x, const PauliLabel& y) {
      return std::make_pair(x.alpha_word(), x.beta_word()) <
             std::make_pair(y.alpha_word(), y.beta_word());
    });
    for (const auto& key : keys) per_target.at(key).emit(EqTag::Generation, sys.equations);
  }

  return sys;
}

std::vector<ZeroConstraint> unique_xor_zero_constraints(const EquationSystem& sys,
                                                        const std::vector<PauliLabel>& terms,
                                                        const GeneratorSet& gen) {
  (void)terms;
  (void)gen;
  const int num_cols = sys.layout.num_cols();
  std::unordered_map<PauliLabel, std::vector<std::pair<int, int>>, LabelHash> contributing;
  for (int a = 0; a < num_cols; ++a) {
    for (int b = a + 1; b < num_cols; ++b) {
      // Anticommuting pairs carry a vanishing SquareCross coefficient and
      // therefore never force a product to zero.
      if (!commutes(sys.layout.cols[a], sys.layout.cols[b])) continue;
      contributing[sys.layout.cols[a] ^ sys.layout.cols[b]].push_back({a, b});
    }
  }
  std::vector<ZeroConstraint> out;
  for (int a = 0; a < num_cols; ++a) {
    for (int b = a + 1; b < num_cols; ++b) {
      if (!commutes(sys.layout.cols[a], sys.layout.cols[b])) continue;
      const auto& bucket = contributing.at(sys.layout.cols[a] ^ sys.layout.cols[b]);
      if (bucket.size() == 1) out.push_back({a, b});
    }
  }
  return out;
}

}  // namespace qbmsym
