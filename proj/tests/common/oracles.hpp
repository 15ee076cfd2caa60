#pragma once

// Independent reference computations shared by the unit and acceptance tests.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "manip/nn/mlp.hpp"
#include "manip/planner/tree.hpp"
#include "manip/sim/dynamics.hpp"

namespace manip::oracle {

// 0.5 (f0 + B da - s_g)^T Q (f0 + B da - s_g) + 0.5 (a0 + da)^T R (a0 + da)
inline double eq10_objective(const Eigen::MatrixXd& b, const Eigen::MatrixXd& q, const Eigen::MatrixXd& r,
                             const Eigen::VectorXd& f0, const Eigen::VectorXd& a0, const Eigen::VectorXd& s_g,
                             const Eigen::VectorXd& da) {
  const Eigen::VectorXd e = f0 + b * da - s_g;
  const Eigen::VectorXd u = a0 + da;
  return 0.5 * e.dot(q * e) + 0.5 * u.dot(r * u);
}

// Black-box minimizer: nonlinear conjugate gradients (Polak-Ribiere) with
// central-difference gradients and a three-point parabolic line search.
// Both are exact on quadratics up to rounding, so it converges without ever
// forming the normal equations.
inline Eigen::VectorXd numeric_minimize(const std::function<double(const Eigen::VectorXd&)>& f, Eigen::VectorXd x,
                                        int max_iter = 200, double tol = 1e-14) {
  const int n = static_cast<int>(x.size());
  auto grad = [&](const Eigen::VectorXd& p) {
    Eigen::VectorXd g(n);
    const double h = 1e-3 * std::max(1.0, p.norm());
    for (int i = 0; i < n; ++i) {
      Eigen::VectorXd a = p, b = p;
      a[i] += h;
      b[i] -= h;
      g[i] = (f(a) - f(b)) / (2 * h);
    }
    return g;
  };
  Eigen::VectorXd g = grad(x);
  Eigen::VectorXd d = -g;
  for (int it = 0; it < max_iter && g.norm() > tol; ++it) {
    const double step = 1.0 / std::max(d.norm(), 1e-300);
    const double f0 = f(x), f1 = f(x + step * d), f2 = f(x + 2 * step * d);
    const double curv = f2 - 2 * f1 + f0;
    if (!(curv > 0)) break;
    const double t = step * (0.5 * (3 * f0 - 4 * f1 + f2) / curv);
    x += t * d;
    const Eigen::VectorXd g_new = grad(x);
    const double beta = std::max(0.0, g_new.dot(g_new - g) / std::max(g.dot(g), 1e-300));
    d = -g_new + ((it + 1) % n == 0 ? 0.0 : beta) * d;
    g = g_new;
  }
  return x;
}

// Rank histogram (index 0 = rank 1) of a sampler over `draws` calls.
inline std::vector<double> rank_frequencies(int n, int draws, const std::function<int()>& sample) {
  std::vector<double> freq(static_cast<std::size_t>(n), 0.0);
  for (int k = 0; k < draws; ++k) freq[static_cast<std::size_t>(sample() - 1)] += 1.0;
  for (double& v : freq) v /= draws;
  return freq;
}

// Closed-form truncated Pareto rank probabilities, evaluated here without the
// planner code: P(i) = (i^-b - (i+1)^-b) / (1 - n^-b) for i < n.
inline double pareto_closed_form(int n, double beta, int i) {
  if (i >= n) return 0.0;
  return (std::pow(i, -beta) - std::pow(i + 1, -beta)) / (1.0 - std::pow(n, -beta));
}

// Replays base-step commands from the first state; returns the largest
// coordinate deviation from the stored states.
inline double replay_error(const sim::EnvModel& env, const Eigen::VectorXd& initial_command,
                           const std::vector<sim::SystemState>& states, const std::vector<Eigen::VectorXd>& commands) {
  double worst = 0.0;
  sim::SystemState s = states.front();
  Eigen::VectorXd prev = initial_command;
  for (std::size_t t = 0; t < commands.size(); ++t) {
    s = sim::rollout_segment(env, s, prev, commands[t], env.dt_a);
    worst = std::max(worst, (s.flat() - states[t + 1].flat()).cwiseAbs().maxCoeff());
    prev = commands[t];
  }
  return worst;
}

// Largest relative error between backward() and central differences of the
// scalar loss sum(w .* net(x)) over `probes` random parameters and inputs.
inline double gradient_check(const nn::Mlp& net_in, int batch, int probes, std::mt19937_64& rng, double h = 1e-6) {
  nn::Mlp net = net_in;
  std::normal_distribution<double> g;
  Eigen::MatrixXd x(net.input_size(), batch), w(net.output_size(), batch);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = g(rng);
  for (Eigen::Index i = 0; i < w.size(); ++i) w.data()[i] = g(rng);
  auto loss = [&](const nn::Mlp& n, const Eigen::MatrixXd& in) { return (n.forward(in).array() * w.array()).sum(); };
  nn::Mlp::Cache cache;
  net.forward(x, cache);
  Eigen::MatrixXd input_grad;
  const nn::Gradients grads = net.backward(cache, w, &input_grad);
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6}); };
  double worst = 0.0;
  std::uniform_int_distribution<int> pick_layer(0, net.num_layers() - 1);
  for (int p = 0; p < probes; ++p) {
    const int l = pick_layer(rng);
    const int kind = p % 3;  // weight, bias, input
    if (kind == 0) {
      Eigen::MatrixXd& wl = net.weights()[static_cast<std::size_t>(l)];
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, wl.size() - 1)(rng);
      const double v = wl.data()[k];
      wl.data()[k] = v + h;
      const double lp = loss(net, x);
      wl.data()[k] = v - h;
      const double lm = loss(net, x);
      wl.data()[k] = v;
      worst = std::max(worst, rel(grads.weights[static_cast<std::size_t>(l)].data()[k], (lp - lm) / (2 * h)));
    } else if (kind == 1) {
      Eigen::VectorXd& bl = net.biases()[static_cast<std::size_t>(l)];
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, bl.size() - 1)(rng);
      const double v = bl[k];
      bl[k] = v + h;
      const double lp = loss(net, x);
      bl[k] = v - h;
      const double lm = loss(net, x);
      bl[k] = v;
      worst = std::max(worst, rel(grads.biases[static_cast<std::size_t>(l)][k], (lp - lm) / (2 * h)));
    } else {
      const Eigen::Index k = std::uniform_int_distribution<Eigen::Index>(0, x.size() - 1)(rng);
      Eigen::MatrixXd xp = x, xm = x;
      xp.data()[k] += h;
      xm.data()[k] -= h;
      worst = std::max(worst, rel(input_grad.data()[k], (loss(net, xp) - loss(net, xm)) / (2 * h)));
    }
  }
  return worst;
}

}  // namespace manip::oracle
