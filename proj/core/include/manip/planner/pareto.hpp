#pragma once

#include <random>

namespace manip::planner {

// Probability that the floored truncated-Pareto sample on [1, n] equals rank
// i. The sampled value lies in [1, n) almost surely, so rank n has mass 0 and
// the n - 1 remaining terms sum to one.
double pareto_rank_pmf(int n, double beta, int i);

// Inverse-CDF sample of the rank, in 1..n.
int sample_pareto_rank(int n, double beta, std::mt19937_64& rng);

}  // namespace manip::planner
