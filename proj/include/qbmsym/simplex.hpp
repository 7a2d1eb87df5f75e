#pragma once
#include <Eigen/Dense>
#include <functional>

namespace qbmsym {

struct SimplexOptions {
  int max_evals = 2000;
  double initial_step = 0.5;
  double x_tol = 1e-10;
  double f_tol = 1e-14;
};

struct SimplexResult {
  Eigen::VectorXd x;
  double f = 0.0;
  int evals = 0;
};

/// Nelder-Mead downhill simplex; derivative free, adequate for the low
/// dimensional fits used here (angle fitting, hidden-unit objectives).
inline SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& objective,
                                 const Eigen::VectorXd& start, const SimplexOptions& opts = {}) {
  const int n = static_cast<int>(start.size());
  int evals = 0;
  const auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return objective(x);
  };

  std::vector<Eigen::VectorXd> xs(n + 1, start);
  std::vector<double> fs(n + 1);
  for (int i = 0; i < n; ++i) xs[i + 1][i] += opts.initial_step;
  for (int i = 0; i <= n; ++i) fs[i] = eval(xs[i]);

  while (evals < opts.max_evals) {
    // Order best..worst.
    std::vector<int> order(n + 1);
    for (int i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return fs[a] < fs[b]; });
    const int best = order[0], worst = order[n], second_worst = order[n - 1];

    double spread = 0.0;
    for (int i = 0; i <= n; ++i) spread = std::max(spread, (xs[i] - xs[best]).lpNorm<Eigen::Infinity>());
    if (spread < opts.x_tol || std::abs(fs[worst] - fs[best]) < opts.f_tol) break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i <= n; ++i) {
      if (i != worst) centroid += xs[i];
    }
    centroid /= n;

    const Eigen::VectorXd reflected = centroid + (centroid - xs[worst]);
    const double f_reflected = eval(reflected);
    if (f_reflected < fs[best]) {
      const Eigen::VectorXd expanded = centroid + 2.0 * (centroid - xs[worst]);
      const double f_expanded = eval(expanded);
      if (f_expanded < f_reflected) {
        xs[worst] = expanded;
        fs[worst] = f_expanded;
      } else {
        xs[worst] = reflected;
        fs[worst] = f_reflected;
      }
    } else if (f_reflected < fs[second_worst]) {
      xs[worst] = reflected;
      fs[worst] = f_reflected;
    } else {
      const Eigen::VectorXd contracted = centroid + 0.5 * (xs[worst] - centroid);
      const double f_contracted = eval(contracted);
      if (f_contracted < fs[worst]) {
        xs[worst] = contracted;
        fs[worst] = f_contracted;
      } else {
        for (int i = 0; i <= n; ++i) {
          if (i == best) continue;
          xs[i] = xs[best] + 0.5 * (xs[i] - xs[best]);
          fs[i] = eval(xs[i]);
        }
      }
    }
  }

  int best = 0;
  for (int i = 1; i <= n; ++i) {
    if (fs[i] < fs[best]) best = i;
  }
  return {xs[best], fs[best], evals};
}

}  // namespace qbmsym
