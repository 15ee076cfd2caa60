#include "manip/planner/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace manip::planner {

double pareto_rank_pmf(int n, double beta, int i) {
  if (n < 1 || i < 1 || i > n || !(beta > 0.0)) throw std::invalid_argument("pareto_rank_pmf: bad arguments");
  if (n == 1) return 1.0;
  if (i == n) return 0.0;
  const double norm = 1.0 - std::pow(static_cast<double>(n), -beta);
  return (std::pow(static_cast<double>(i), -beta) - std::pow(static_cast<double>(i + 1), -beta)) / norm;
}

int sample_pareto_rank(int n, double beta, std::mt19937_64& rng) {
  if (n <= 1) return 1;
  const double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double tail = 1.0 - std::pow(static_cast<double>(n), -beta);
  const double x = std::pow(1.0 - u * tail, -1.0 / beta);
  return std::clamp(static_cast<int>(std::floor(x)), 1, n);
}

}  // namespace manip::planner
