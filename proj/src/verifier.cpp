#include "qbmsym/verifier.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>

#include "qbmsym/errors.hpp"
#include "qbmsym/simplex.hpp"

namespace qbmsym {

namespace {

Eigen::MatrixXcd term_sum(const MachineSpec& spec, const Eigen::VectorXd& a, int dense_cap) {
  if (a.size() != static_cast<Eigen::Index>(spec.terms.size())) {
    throw input_error("parameter vector length " + std::to_string(a.size()) +
                      " does not match the term count " + std::to_string(spec.terms.size()));
  }
  if (!a.allFinite()) throw input_error("parameter vector has non-finite entries");
  const Eigen::Index dim = 1ll << spec.num_qubits;
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    sum += a[static_cast<Eigen::Index>(i)] * to_dense(spec.terms[i], dense_cap);
  }
  return sum;
}

}  // namespace

DensityMatrix DensityMatrix::validated(Eigen::MatrixXcd m, double tol) {
  if (m.rows() != m.cols() || m.rows() < 1) throw input_error("density matrix must be square");
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol) {
    throw input_error("density matrix is not Hermitian");
  }
  if (std::abs(m.trace().real() - 1.0) > tol || std::abs(m.trace().imag()) > tol) {
    throw input_error("density matrix trace is not 1");
  }
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(m);
  if (eig.eigenvalues().minCoeff() < -tol) {
    throw input_error("density matrix has a negative eigenvalue");
  }
  return {std::move(m)};
}

int DensityMatrix::qubits() const {
  int n = 0;
  while ((1ll << n) < rho.rows()) ++n;
  return n;
}

DensityMatrix boltzmann_state(const MachineSpec& spec, const Eigen::VectorXd& a, int dense_cap) {
  if (spec.num_qubits > dense_cap) {
    throw resource_error("Boltzmann state over " + std::to_string(spec.num_qubits) +
                         " qubits exceeds the dense cap of " + std::to_string(dense_cap));
  }
  const Eigen::MatrixXcd h = term_sum(spec, a, dense_cap);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
  const double shift = eig.eigenvalues().maxCoeff();
  Eigen::VectorXd weights = (eig.eigenvalues().array() - shift).exp();
  weights /= weights.sum();
  DensityMatrix out;
  out.rho = eig.eigenvectors() * weights.asDiagonal() * eig.eigenvectors().adjoint();
  return out;
}

DensityMatrix reduce_visible(const DensityMatrix& rho, int n_v, int n_h) {
  const Eigen::Index dim_v = 1ll << n_v, dim_h = 1ll << n_h;
  if (rho.rho.rows() != dim_v * dim_h) {
    throw input_error("reduce_visible: dimension mismatch");
  }
  if (n_h == 0) return rho;
  DensityMatrix out;
  out.rho = Eigen::MatrixXcd::Zero(dim_v, dim_v);
  for (Eigen::Index i = 0; i < dim_v; ++i) {
    for (Eigen::Index j = 0; j < dim_v; ++j) {
      std::complex<double> sum = 0.0;
      for (Eigen::Index k = 0; k < dim_h; ++k) sum += rho.rho(i * dim_h + k, j * dim_h + k);
      out.rho(i, j) = sum;
    }
  }
  return out;
}

double relative_entropy(const DensityMatrix& s, const DensityMatrix& t) {
  if (s.rho.rows() != t.rho.rows()) throw input_error("relative_entropy: dimension mismatch");
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_s(s.rho);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig_t(t.rho);

  double entropy = 0.0;  // Tr s ln s
  for (Eigen::Index i = 0; i < eig_s.eigenvalues().size(); ++i) {
    const double p = eig_s.eigenvalues()[i];
    if (p > 1e-14) entropy += p * std::log(p);
  }

  double cross = 0.0;  // Tr s ln t
  for (Eigen::Index j = 0; j < eig_t.eigenvalues().size(); ++j) {
    const double q = eig_t.eigenvalues()[j];
    const double weight =
        (eig_t.eigenvectors().col(j).adjoint() * s.rho * eig_t.eigenvectors().col(j))(0).real();
    if (q < 1e-12) {
      if (weight > 1e-10) return std::numeric_limits<double>::infinity();
      continue;
    }
    cross += weight * std::log(std::max(q, 1e-300));
  }
  return entropy - cross;
}

namespace {

struct VisibleObjective {
  // S(t | sigma(a)) = Tr t ln t - a . c + ln Z(a), with c_i = <O_i>_target.
  const MachineSpec& spec;
  std::vector<Eigen::MatrixXcd> dense_terms;
  Eigen::VectorXd target_means;
  double target_entropy_term;  // Tr t ln t

  VisibleObjective(const MachineSpec& machine, const DensityMatrix& target)
      : spec(machine) {
    for (const auto& term : spec.terms) dense_terms.push_back(to_dense(term));
    target_means.resize(static_cast<Eigen::Index>(spec.terms.size()));
    for (std::size_t i = 0; i < spec.terms.size(); ++i) {
      target_means[static_cast<Eigen::Index>(i)] = (dense_terms[i] * target.rho).trace().real();
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(target.rho);
    target_entropy_term = 0.0;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i) {
      const double p = eig.eigenvalues()[i];
      if (p > 1e-14) target_entropy_term += p * std::log(p);
    }
  }

  double value(const Eigen::VectorXd& a, Eigen::VectorXd* grad) const {
    Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(dense_terms[0].rows(), dense_terms[0].cols());
    for (std::size_t i = 0; i < dense_terms.size(); ++i) {
      h += a[static_cast<Eigen::Index>(i)] * dense_terms[i];
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(h);
    const double shift = eig.eigenvalues().maxCoeff();
    const Eigen::VectorXd boltz = (eig.eigenvalues().array() - shift).exp();
    const double z = boltz.sum();
    const double log_z = std::log(z) + shift;
    if (grad) {
      const Eigen::MatrixXcd state =
          eig.eigenvectors() * (boltz / z).asDiagonal() * eig.eigenvectors().adjoint();
      grad->resize(target_means.size());
      for (std::size_t i = 0; i < dense_terms.size(); ++i) {
        (*grad)[static_cast<Eigen::Index>(i)] =
            (dense_terms[i] * state).trace().real() - target_means[i];
      }
    }
    return target_entropy_term - a.dot(target_means) + log_z;
  }
};

}  // namespace

MinimizeResult minimize_sm(const MachineSpec& spec, const DensityMatrix& target,
                           const MinimizeConfig& cfg) {
  if (target.rho.rows() != (1ll << spec.num_visible)) {
    throw input_error("minimize_sm: target dimension does not match the visible register");
  }

  MinimizeResult result;
  if (spec.num_hidden == 0) {
    const VisibleObjective objective(spec, target);
    Eigen::VectorXd a = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(spec.terms.size()));
    Eigen::VectorXd grad, prev_a, prev_grad;
    double f = objective.value(a, &grad);
    double step = 1.0;
    int flat_streak = 0;
    result.converged = false;
    for (int iter = 0; iter < cfg.max_iterations; ++iter) {
      // Projected gradient: components pinned at the cap do not count.
      double gnorm = 0.0;
      for (Eigen::Index i = 0; i < a.size(); ++i) {
        const bool pinned = (a[i] >= cfg.param_cap && grad[i] < 0) ||
                            (a[i] <= -cfg.param_cap && grad[i] > 0);
        if (!pinned) gnorm = std::max(gnorm, std::abs(grad[i]));
      }
      if (gnorm <= cfg.gradient_tol) {
        result.converged = true;
        break;
      }
      // Barzilai-Borwein trial step with backtracking.
      if (iter > 0) {
        const Eigen::VectorXd s = a - prev_a;
        const Eigen::VectorXd y = grad - prev_grad;
        const double sy = s.dot(y);
        if (sy > 1e-300) step = std::clamp(s.dot(s) / sy, 1e-12, 1e30);
      }
      prev_a = a;
      prev_grad = grad;
      double trial_step = step;
      bool accepted = false;
      for (int back = 0; back < 120 && !accepted; ++back) {
        Eigen::VectorXd trial =
            (a - trial_step * grad).cwiseMax(-cfg.param_cap).cwiseMin(cfg.param_cap);
        if ((trial - a).lpNorm<Eigen::Infinity>() == 0.0) break;  // pinned
        const double f_trial = objective.value(trial, nullptr);
        // Ties are accepted: past ~1e-16 relative the convex tail is exactly
        // flat in double precision while the analytic gradient still points
        // outward; the walk then runs into the cap or the stall guard.
        if (std::isfinite(f_trial) && f_trial <= f) {
          if (f_trial == f) ++flat_streak;
          else flat_streak = 0;
          a = std::move(trial);
          f = objective.value(a, &grad);
          accepted = true;
        } else {
          trial_step *= 0.5;
        }
      }
      if (!accepted || flat_streak > 64) {
        result.converged = false;
        break;
      }
    }
    result.a = a;
    result.s_m = std::max(f, 0.0);
    // Boundary optimum: either the cap truncated the walk, or a rank-deficient
    // target drove some parameter into the runaway regime before the gradient
    // hit the double-precision floor (the optimum lies at infinity; descent
    // self-arrests near |a| ~ 18 where exp(-2|a|) falls below machine epsilon).
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> target_eig(target.rho);
    const bool rank_deficient = target_eig.eigenvalues().minCoeff() < 1e-12;
    result.boundary = (a.cwiseAbs().maxCoeff() >= cfg.param_cap - 1e-9) ||
                      (rank_deficient && a.cwiseAbs().maxCoeff() > 10.0);
    return result;
  }

  // Hidden subsystem: derivative-free multi-start descent on the full
  // relative entropy.
  const auto objective = [&](const Eigen::VectorXd& raw) {
    const Eigen::VectorXd a = raw.cwiseMax(-cfg.param_cap).cwiseMin(cfg.param_cap);
    const DensityMatrix sigma =
        reduce_visible(boltzmann_state(spec, a), spec.num_visible, spec.num_hidden);
    return relative_entropy(target, sigma);
  };
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_a;
  for (int start = 0; start < cfg.starts; ++start) {
    Eigen::VectorXd x0(static_cast<Eigen::Index>(spec.terms.size()));
    if (start == 0) {
      x0.setZero();
    } else {
      for (Eigen::Index i = 0; i < x0.size(); ++i) x0[i] = dist(rng);
    }
    const auto fit = nelder_mead(objective, x0,
                                 {.max_evals = cfg.simplex_evals / std::max(cfg.starts, 1),
                                  .initial_step = 0.5,
                                  .x_tol = 1e-9,
                                  .f_tol = 1e-13});
    if (fit.f < best) {
      best = fit.f;
      best_a = fit.x;
    }
  }
  result.a = best_a.cwiseMax(-cfg.param_cap).cwiseMin(cfg.param_cap);
  result.s_m = std::max(best, 0.0);
  result.boundary = (result.a.cwiseAbs().maxCoeff() >= cfg.param_cap - 1e-6);
  return result;
}

ConjugatedParameters conjugate_parameters(const MachineSpec& spec, const Eigen::VectorXd& a,
                                          const Eigen::MatrixXcd& u_full) {
  const Eigen::Index dim = 1ll << spec.num_qubits;
  if (u_full.rows() != dim || u_full.cols() != dim) {
    throw input_error("conjugate_parameters: unitary dimension mismatch");
  }
  const Eigen::MatrixXcd h = term_sum(spec, a, kDenseCapDefault);
  const Eigen::MatrixXcd conj = u_full * h * u_full.adjoint();
  ConjugatedParameters out;
  out.a.resize(a.size());
  Eigen::MatrixXcd remainder = conj;
  for (std::size_t i = 0; i < spec.terms.size(); ++i) {
    const Eigen::MatrixXcd dense = to_dense(spec.terms[i]);
    out.a[static_cast<Eigen::Index>(i)] = (dense * conj).trace().real() / double(dim);
    remainder -= out.a[static_cast<Eigen::Index>(i)] * dense;
  }
  out.span_residual = remainder.cwiseAbs().maxCoeff();
  return out;
}

EquivalenceReport check_target_equivalence(const MachineSpec& spec, const DensityMatrix& target,
                                           const Eigen::MatrixXcd& u_visible,
                                           const MinimizeConfig& cfg) {
  EquivalenceReport report;
  DensityMatrix transformed;
  transformed.rho = u_visible * target.rho * u_visible.adjoint();
  report.original = minimize_sm(spec, target, cfg);
  report.transformed = minimize_sm(spec, transformed, cfg);
  report.s_original = report.original.s_m;
  report.s_transformed = report.transformed.s_m;
  report.difference = std::abs(report.s_original - report.s_transformed);
  report.pass = report.difference <= 1e-6;
  return report;
}

DegeneracyReport check_solution_degeneracy(const MachineSpec& spec, const DensityMatrix& target,
                                           const Eigen::VectorXd& a_star,
                                           const Eigen::MatrixXcd& u_full,
                                           const Eigen::MatrixXcd& u_visible,
                                           const MinimizeConfig& cfg) {
  (void)cfg;
  const Eigen::MatrixXcd moved = u_visible * target.rho * u_visible.adjoint();
  if ((moved - target.rho).cwiseAbs().maxCoeff() > 1e-8) {
    throw input_error("check_solution_degeneracy: the element does not fix the target state");
  }
  DegeneracyReport report;
  report.a_star = a_star;
  const auto conj = conjugate_parameters(spec, a_star, u_full);
  report.a_prime = conj.a;
  report.span_residual = conj.span_residual;

  const auto sigma_of = [&](const Eigen::VectorXd& a) {
    return reduce_visible(boltzmann_state(spec, a), spec.num_visible, spec.num_hidden);
  };
  report.s_star = relative_entropy(target, sigma_of(a_star));
  report.s_prime = relative_entropy(target, sigma_of(conj.a));
  report.pass =
      report.span_residual <= 1e-10 && std::abs(report.s_star - report.s_prime) <= 1e-6;
  return report;
}

// ---------------------------------------------------------------------------
// Dense matrix text I/O.

namespace {

std::complex<double> parse_complex(const std::string& token) {
  if (token.empty()) throw input_error("empty complex entry");
  std::string body = token;
  bool imaginary_tail = false;
  if (body.back() == 'i') {
    imaginary_tail = true;
    body.pop_back();
  }
  // Find a +/- separating real and imaginary parts (not an exponent sign).
  std::size_t split = std::string::npos;
  for (std::size_t k = 1; k < body.size(); ++k) {
    if ((body[k] == '+' || body[k] == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
    }
  }
  try {
    if (split == std::string::npos) {
      if (imaginary_tail) {
        if (body.empty() || body == "+") return {0.0, 1.0};
        if (body == "-") return {0.0, -1.0};
        return {0.0, std::stod(body)};
      }
      return {std::stod(body), 0.0};
    }
    if (!imaginary_tail) throw input_error("missing trailing i in complex entry: " + token);
    const std::string re = body.substr(0, split);
    std::string im = body.substr(split);
    if (im == "+") im = "1";
    if (im == "-") im = "-1";
    return {std::stod(re), std::stod(im)};
  } catch (const std::exception&) {
    throw input_error("cannot parse complex entry: " + token);
  }
}

}  // namespace

DensityMatrix read_density_matrix(std::istream& in) {
  Eigen::Index dim = 0;
  if (!(in >> dim) || dim < 1 || dim > 4096) {
    throw input_error("density matrix file: bad dimension header");
  }
  Eigen::MatrixXcd m(dim, dim);
  std::string token;
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if (!(in >> token)) throw input_error("density matrix file: unexpected end of data");
      m(r, c) = parse_complex(token);
    }
  }
  return DensityMatrix::validated(std::move(m), 1e-9);
}

DensityMatrix load_density_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open density matrix file: " + path.string());
  return read_density_matrix(in);
}

void write_density_matrix(std::ostream& out, const DensityMatrix& rho) {
  out << rho.rho.rows() << "\n";
  out.precision(17);
  for (Eigen::Index r = 0; r < rho.rho.rows(); ++r) {
    for (Eigen::Index c = 0; c < rho.rho.cols(); ++c) {
      const auto v = rho.rho(r, c);
      out << v.real() << (v.imag() >= 0 ? "+" : "") << v.imag() << "i";
      out << (c + 1 == rho.rho.cols() ? "\n" : " ");
    }
  }
}

}  // namespace qbmsym
