#include "qcorr/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "qcorr/errors.hpp"

namespace qcorr {

namespace {

struct GslContext {
  const Objective* f;
  std::vector<double> buffer;
};

double gsl_trampoline(const gsl_vector* v, void* params) {
  auto* ctx = static_cast<GslContext*>(params);
  for (std::size_t i = 0; i < v->size; ++i) ctx->buffer[i] = gsl_vector_get(v, i);
  const double y = (*ctx->f)(ctx->buffer);
  return std::isfinite(y) ? y : GSL_POSINF;
}

void disable_gsl_abort() {
  static std::once_flag once;
  std::call_once(once, [] { gsl_set_error_handler_off(); });
}

}  // namespace

MinimizeResult nelder_mead(const Objective& f, std::vector<double> x0, double step,
                           double size_tol, int max_iter) {
  disable_gsl_abort();
  const std::size_t n = x0.size();
  MinimizeResult out;
  if (n == 0) {
    out.value = f(x0);
    out.converged = true;
    return out;
  }
  GslContext ctx{&f, std::vector<double>(n)};
  gsl_multimin_function fn{&gsl_trampoline, n, &ctx};

  gsl_vector* x = gsl_vector_alloc(n);
  gsl_vector* ss = gsl_vector_alloc(n);
  for (std::size_t i = 0; i < n; ++i) gsl_vector_set(x, i, x0[i]);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n);
  if (gsl_multimin_fminimizer_set(s, &fn, x, ss) != GSL_SUCCESS) {
    gsl_multimin_fminimizer_free(s);
    gsl_vector_free(ss);
    gsl_vector_free(x);
    throw NumericalError("simplex initialization failed");
  }

  int iter = 0;
  bool converged = false;
  while (iter < max_iter) {
    ++iter;
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), size_tol) == GSL_SUCCESS) {
      converged = true;
      break;
    }
  }
  out.x.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.x[i] = gsl_vector_get(s->x, i);
  out.value = s->fval;
  out.iterations = iter;
  out.converged = converged;

  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return out;
}

MinimizeResult polished_minimize(const Objective& f, std::vector<double> x0, double step,
                                 const OptimizerConfig& cfg) {
  const double size_tol = std::sqrt(cfg.tol);
  auto first = nelder_mead(f, std::move(x0), step, size_tol, cfg.max_iter);
  // Restarting removes the degenerate simplices the first run may end in.
  auto second = nelder_mead(f, first.x, 10.0 * size_tol, 0.01 * size_tol,
                            std::max(1, cfg.max_iter / 2));
  second.iterations += first.iterations;
  second.converged = first.converged;
  return second.value <= first.value ? second : first;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  const int workers = std::clamp(threads, 1, std::max(1, n));
  if (workers == 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace qcorr
