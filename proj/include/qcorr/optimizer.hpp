#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace qcorr {

/// Shared settings of the multi-start searches.
struct OptimizerConfig {
  int starts = 20;              // random starts, on top of the deterministic ones
  std::uint64_t seed = 42;
  double tol = 1e-10;           // target accuracy of the objective per start
  int max_iter = 2000;          // simplex iterations per start
  double cluster_value_tol = 1e-6;
  double cluster_state_tol = 1e-3;
  int threads = 1;
};

struct MinimizeResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Derivative-free simplex minimization (GSL nmsimplex2). Stops when the
/// simplex size drops below `size_tol` or after `max_iter` iterations.
MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, double step,
                           double size_tol, int max_iter);

/// Simplex search followed by a restart from the best vertex with a small
/// simplex. A smooth minimum located to simplex size sqrt(tol) has its value
/// accurate to about tol.
MinimizeResult polished_minimize(const Objective& f, std::vector<double> x0, double step,
                                 const OptimizerConfig& cfg);

/// Seed for stream `index` derived from a base seed (splitmix64 finalizer).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

/// Runs fn(i) for i in [0, n) on up to `threads` threads. Callers write
/// results into slot i, so output does not depend on scheduling.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

}  // namespace qcorr
