#pragma once

// Multi-start local descent over unit vectors of C^d.
//
// A state is carried as x in R^{2d} (real parts, then imaginary parts) with
// |x| = 1. Each iteration estimates the gradient by central differences,
// takes an Armijo-backtracked step and retracts to the sphere by
// normalization. Restart r draws its start from the stream derive_seed(seed, r),
// so the result does not depend on whether restarts run serially or
// concurrently; the best restart wins and ties go to the lower index.

#include <cmath>
#include <cstdint>
#include <future>
#include <limits>
#include <vector>

#include "ncprob/operators.hpp"
#include "ncprob/random.hpp"

namespace ncprob::eur {

struct OptimizerConfig {
  int restarts = 32;
  int max_iterations = 500;
  double tolerance = 1e-8;
  std::uint64_t seed = kDefaultSeed;
  bool parallel = false;
};

struct SphereMinimum {
  double value = std::numeric_limits<double>::infinity();
  hilbert::PureState argmin = hilbert::PureState::basis(1, 0);
  int restarts = 0;
  int total_iterations = 0;
  int best_restart = -1;
  int converged_restarts = 0;
  bool converged = false;  // the winning restart met the tolerance
  std::uint64_t seed = 0;
};

namespace detail {

inline Vector to_complex(const RealVector& x) {
  const Eigen::Index d = x.size() / 2;
  Vector v(d);
  for (Eigen::Index i = 0; i < d; ++i) v(i) = Complex(x(i), x(d + i));
  return v;
}

inline RealVector to_real(const Vector& v) {
  RealVector x(2 * v.size());
  x << v.real(), v.imag();
  return x;
}

struct RestartOutcome {
  double value;
  RealVector x;
  int iterations;
  bool converged;
};

template <class F>
RestartOutcome local_descent(const F& objective, RealVector x, const OptimizerConfig& cfg) {
  constexpr double kDiffStep = 1e-7;
  constexpr double kArmijo = 1e-4;
  constexpr double kMinStep = 1e-14;

  auto eval = [&](const RealVector& y) { return objective(to_complex(y / y.norm())); };

  x.normalize();
  double fx = eval(x);
  double step = 0.25;
  RealVector grad(x.size());
  for (int it = 0; it < cfg.max_iterations; ++it) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      RealVector xp = x, xm = x;
      xp(i) += kDiffStep;
      xm(i) -= kDiffStep;
      grad(i) = (eval(xp) - eval(xm)) / (2.0 * kDiffStep);
    }
    // Project onto the tangent space at x.
    grad -= grad.dot(x) * x;
    const double gnorm2 = grad.squaredNorm();
    if (std::sqrt(gnorm2) < cfg.tolerance) return {fx, x, it, true};

    step = std::min(1.0, step * 2.0);
    RealVector candidate;
    double fc = fx;
    while (true) {
      candidate = (x - step * grad).normalized();
      fc = eval(candidate);
      if (fc <= fx - kArmijo * step * gnorm2) break;
      step *= 0.5;
      if (step < kMinStep) return {fx, x, it + 1, true};
    }
    const double decrease = fx - fc;
    x = candidate;
    fx = fc;
    if (decrease < cfg.tolerance * (1.0 + std::abs(fx)) && step * std::sqrt(gnorm2) < cfg.tolerance)
      return {fx, x, it + 1, true};
  }
  return {fx, x, cfg.max_iterations, false};
}

}  // namespace detail

// Minimizes objective(psi) over unit psi in C^dim. The objective receives a
// unit Vector and must be invariant under global phase.
template <class F>
SphereMinimum minimize_on_sphere(const F& objective, Eigen::Index dim, const OptimizerConfig& cfg) {
  if (cfg.restarts < 1) throw ArgumentError("optimizer: restarts must be >= 1");
  if (cfg.max_iterations < 1) throw ArgumentError("optimizer: max_iterations must be >= 1");
  if (!(cfg.tolerance > 0.0)) throw ArgumentError("optimizer: tolerance must be > 0");
  if (dim < 1) throw DimensionError("optimizer: dimension must be >= 1");

  auto run = [&](int r) {
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(r)));
    RealVector x(2 * dim);
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = rng.normal();
    return detail::local_descent(objective, std::move(x), cfg);
  };

  std::vector<detail::RestartOutcome> outcomes;
  outcomes.reserve(static_cast<std::size_t>(cfg.restarts));
  if (cfg.parallel) {
    std::vector<std::future<detail::RestartOutcome>> futures;
    for (int r = 0; r < cfg.restarts; ++r) futures.push_back(std::async(std::launch::async, run, r));
    for (auto& f : futures) outcomes.push_back(f.get());
  } else {
    for (int r = 0; r < cfg.restarts; ++r) outcomes.push_back(run(r));
  }

  SphereMinimum best;
  best.restarts = cfg.restarts;
  best.seed = cfg.seed;
  for (int r = 0; r < cfg.restarts; ++r) {
    const auto& o = outcomes[static_cast<std::size_t>(r)];
    best.total_iterations += o.iterations;
    if (o.converged) ++best.converged_restarts;
    if (o.value < best.value) {
      best.value = o.value;
      best.best_restart = r;
      best.converged = o.converged;
      Vector v = detail::to_complex(o.x);
      fix_phase(v);
      best.argmin = hilbert::PureState::normalized(v);
    }
  }
  return best;
}

}  // namespace ncprob::eur
