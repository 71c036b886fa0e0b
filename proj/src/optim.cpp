#include "optim.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "errors.hpp"

namespace conclab {

// Textbook Nelder-Mead with the standard coefficients (reflection 1,
// expansion 2, contraction 1/2, shrink 1/2).
SimplexResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                          const Eigen::VectorXd& x0, const SimplexOptions& options) {
  const int n = static_cast<int>(x0.size());
  require(n >= 1, ErrorCode::invalid_argument, "empty parameter vector");

  int evals = 0;
  auto eval = [&](const Eigen::VectorXd& x) {
    ++evals;
    return f(x);
  };

  std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(n) + 1, x0);
  std::vector<double> fs(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i) + 1][i] += options.initial_step;
  for (std::size_t i = 0; i < xs.size(); ++i) fs[i] = eval(xs[i]);

  std::vector<int> order(xs.size());
  std::iota(order.begin(), order.end(), 0);
  auto sort_simplex = [&] {
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return fs[static_cast<std::size_t>(a)] <
                                                fs[static_cast<std::size_t>(b)]; });
  };
  sort_simplex();

  while (evals < options.max_evals) {
    const int best = order.front();
    const int worst = order.back();
    const int second_worst = order[order.size() - 2];
    if (fs[static_cast<std::size_t>(worst)] - fs[static_cast<std::size_t>(best)] <=
        options.ftol)
      break;

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int idx : order)
      if (idx != worst) centroid += xs[static_cast<std::size_t>(idx)];
    centroid /= static_cast<double>(n);

    const Eigen::VectorXd reflected = centroid + (centroid - xs[static_cast<std::size_t>(worst)]);
    const double fr = eval(reflected);

    if (fr < fs[static_cast<std::size_t>(best)]) {
      const Eigen::VectorXd expanded =
          centroid + 2.0 * (centroid - xs[static_cast<std::size_t>(worst)]);
      const double fe = eval(expanded);
      if (fe < fr) {
        xs[static_cast<std::size_t>(worst)] = expanded;
        fs[static_cast<std::size_t>(worst)] = fe;
      } else {
        xs[static_cast<std::size_t>(worst)] = reflected;
        fs[static_cast<std::size_t>(worst)] = fr;
      }
    } else if (fr < fs[static_cast<std::size_t>(second_worst)]) {
      xs[static_cast<std::size_t>(worst)] = reflected;
      fs[static_cast<std::size_t>(worst)] = fr;
    } else {
      const bool outside = fr < fs[static_cast<std::size_t>(worst)];
      const Eigen::VectorXd contracted =
          outside ? centroid + 0.5 * (reflected - centroid)
                  : centroid + 0.5 * (xs[static_cast<std::size_t>(worst)] - centroid);
      const double fc = eval(contracted);
      if (fc < std::min(fr, fs[static_cast<std::size_t>(worst)])) {
        xs[static_cast<std::size_t>(worst)] = contracted;
        fs[static_cast<std::size_t>(worst)] = fc;
      } else {
        // Shrink toward the best vertex.
        for (int idx : order) {
          if (idx == best) continue;
          xs[static_cast<std::size_t>(idx)] =
              xs[static_cast<std::size_t>(best)] +
              0.5 * (xs[static_cast<std::size_t>(idx)] - xs[static_cast<std::size_t>(best)]);
          fs[static_cast<std::size_t>(idx)] = eval(xs[static_cast<std::size_t>(idx)]);
          if (evals >= options.max_evals) break;
        }
      }
    }
    sort_simplex();
  }

  sort_simplex();
  const auto best = static_cast<std::size_t>(order.front());
  return SimplexResult{xs[best], fs[best], evals};
}

}  // namespace conclab
