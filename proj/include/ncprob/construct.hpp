#pragma once

// Non-commuting operator pairs assembled from two classical laws and a unitary,
// and diagnostics for models built from conditioned (contextual) spaces.

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ncprob/classical.hpp"
#include "ncprob/operators.hpp"

namespace ncprob::construct {

using classical::Distribution;
using hilbert::HermitianOperator;

inline constexpr double kUnitaryTolerance = 1e-10;
inline constexpr double kKernelTolerance = 1e-12;
inline constexpr double kBornTolerance = 1e-9;

inline void require_unitary(const Matrix& u, const char* what) {
  require_square(u, what);
  require_finite(u, what);
  if (!is_unitary(u, kUnitaryTolerance)) throw InvariantError(std::string(what) + ": matrix is not unitary");
}

// nu_Y(y) = sum_x |<x|U y>|^2 mu_X(x).
struct BornViaUnitary {};

// Explicit list of (mu_X, nu_Y) pairs.
struct PairedTable {
  std::vector<std::pair<Distribution, Distribution>> rows;
};

using StateMap = std::variant<BornViaUnitary, PairedTable>;

class ScenarioPair {
 public:
  ScenarioPair(Distribution dist_x, Distribution dist_y, StateMap state_map, Matrix unitary,
               double target_d)
      : dist_x_(std::move(dist_x)),
        dist_y_(std::move(dist_y)),
        state_map_(std::move(state_map)),
        unitary_(std::move(unitary)),
        target_d_(target_d) {
    if (dist_x_.size() != dist_y_.size())
      throw InvariantError("ScenarioPair: the two supports must have equal cardinality");
    require_unitary(unitary_, "ScenarioPair");
    require_same_dim(unitary_.rows(), static_cast<Eigen::Index>(dist_x_.size()), "ScenarioPair");
    if (!(target_d_ >= 0.0)) throw InvariantError("ScenarioPair: target D must be >= 0");
    if (const auto* table = std::get_if<PairedTable>(&state_map_)) {
      for (const auto& [mx, ny] : table->rows) {
        if (mx.support() != dist_x_.support() || ny.support() != dist_y_.support())
          throw InvariantError("ScenarioPair: state table entry has the wrong support");
      }
    }
  }

  const Distribution& dist_x() const { return dist_x_; }
  const Distribution& dist_y() const { return dist_y_; }
  const StateMap& state_map() const { return state_map_; }
  const Matrix& unitary() const { return unitary_; }
  double target_d() const { return target_d_; }

  // Image of an X-law under the state map.
  Distribution map_state(const Distribution& mu_x) const {
    if (mu_x.support() != dist_x_.support())
      throw DomainError("ScenarioPair: law is not over the X support");
    if (const auto* table = std::get_if<PairedTable>(&state_map_)) {
      for (const auto& [mx, ny] : table->rows) {
        bool match = true;
        for (std::size_t i = 0; i < mx.size() && match; ++i) {
          match = std::abs(mx.probs()[i] - mu_x.probs()[i]) <= kKernelTolerance;
        }
        if (match) return ny;
      }
      throw DomainError("ScenarioPair: law not present in the state table");
    }
    const auto n = static_cast<Eigen::Index>(dist_x_.size());
    std::vector<double> nu(static_cast<std::size_t>(n), 0.0);
    for (Eigen::Index y = 0; y < n; ++y) {
      for (Eigen::Index x = 0; x < n; ++x) {
        nu[static_cast<std::size_t>(y)] += std::norm(unitary_(x, y)) * mu_x.probs()[static_cast<std::size_t>(x)];
      }
    }
    const double total = std::accumulate(nu.begin(), nu.end(), 0.0);
    for (double& v : nu) v /= total;
    return {dist_y_.support(), std::move(nu)};
  }

 private:
  Distribution dist_x_;
  Distribution dist_y_;
  StateMap state_map_;
  Matrix unitary_;
  double target_d_;
};

struct OperatorPair {
  HermitianOperator t_x;
  HermitianOperator t_y;
};

// T_X = diag(support X), T_Y = U diag(support Y) U^dagger.
inline OperatorPair build_pair(const Distribution& dist_x, const Distribution& dist_y, const Matrix& u) {
  if (dist_x.size() != dist_y.size())
    throw InvariantError("build_pair: the two supports must have equal cardinality");
  require_unitary(u, "build_pair");
  require_same_dim(u.rows(), static_cast<Eigen::Index>(dist_x.size()), "build_pair");
  const Matrix s_y = mats::diagonal(dist_y.support());
  const Matrix t_y = u * s_y * u.adjoint();
  return {HermitianOperator::diagonal(dist_x.support()), HermitianOperator((t_y + t_y.adjoint()) / 2.0)};
}

inline OperatorPair build_pair(const ScenarioPair& s) {
  return build_pair(s.dist_x(), s.dist_y(), s.unitary());
}

struct OverlapCheck {
  double max_overlap;
  double bound;
  bool satisfied;
};

// max_{x,y} |<x|U y>| against exp(-D/2).
inline OverlapCheck verify_overlap_bound(const Matrix& u, double d) {
  require_unitary(u, "verify_overlap_bound");
  if (!(d >= 0.0)) throw ArgumentError("verify_overlap_bound: D must be >= 0");
  const double m = max_abs(u);
  const double bound = std::exp(-d / 2.0);
  return {m, bound, m <= bound + 1e-12};
}

// alpha(x, y) = P[X = x | Y = y] (columns sum to 1) and
// alpha_tilde(y, x) = P[Y = y | X = x] (columns sum to 1).
class TransitionKernel {
 public:
  TransitionKernel(RealMatrix alpha, RealMatrix alpha_tilde)
      : alpha_(std::move(alpha)), alpha_tilde_(std::move(alpha_tilde)) {
    if (alpha_.size() == 0 || alpha_.rows() != alpha_tilde_.cols() || alpha_.cols() != alpha_tilde_.rows())
      throw DimensionError("TransitionKernel: alpha is x-by-y and alpha_tilde is y-by-x");
    check_stochastic(alpha_, "alpha");
    check_stochastic(alpha_tilde_, "alpha_tilde");
  }

  // Conditionals of a joint table p(x, y) with positive marginals.
  static TransitionKernel from_joint(const RealMatrix& joint) {
    const RealVector px = joint.rowwise().sum();
    const RealVector py = joint.colwise().sum().transpose();
    if (px.minCoeff() <= 0.0 || py.minCoeff() <= 0.0)
      throw DomainError("TransitionKernel: joint table has a zero marginal");
    RealMatrix alpha = joint;
    for (Eigen::Index y = 0; y < joint.cols(); ++y) alpha.col(y) /= py(y);
    RealMatrix tilde = joint.transpose();
    for (Eigen::Index x = 0; x < joint.rows(); ++x) tilde.col(x) /= px(x);
    return {std::move(alpha), std::move(tilde)};
  }

  // alpha(x, y) = alpha_tilde(y, x) = |U(x, y)|^2.
  static TransitionKernel born(const Matrix& u) {
    require_unitary(u, "TransitionKernel::born");
    RealMatrix alpha = u.cwiseAbs2();
    for (Eigen::Index y = 0; y < alpha.cols(); ++y) alpha.col(y) /= alpha.col(y).sum();
    RealMatrix tilde = u.cwiseAbs2().transpose();
    for (Eigen::Index x = 0; x < tilde.cols(); ++x) tilde.col(x) /= tilde.col(x).sum();
    return {std::move(alpha), std::move(tilde)};
  }

  Eigen::Index x_size() const { return alpha_.rows(); }
  Eigen::Index y_size() const { return alpha_.cols(); }
  const RealMatrix& alpha() const { return alpha_; }
  const RealMatrix& alpha_tilde() const { return alpha_tilde_; }

 private:
  static void check_stochastic(const RealMatrix& m, const char* what) {
    if (!m.allFinite() || m.minCoeff() < 0.0 || m.maxCoeff() > 1.0)
      throw InvariantError(std::string("TransitionKernel: ") + what + " entries must lie in [0, 1]");
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (std::abs(m.col(c).sum() - 1.0) > kKernelTolerance)
        throw InvariantError(std::string("TransitionKernel: column ") + std::to_string(c) + " of " +
                             what + " does not sum to 1");
    }
  }

  RealMatrix alpha_;
  RealMatrix alpha_tilde_;
};

// Delta(x, y) = alpha(x, y) nu(y) - alpha_tilde(y, x) mu(x).
inline RealMatrix bayes_violation(const TransitionKernel& k, const std::vector<double>& mu,
                                  const std::vector<double>& nu) {
  require_same_dim(k.x_size(), static_cast<Eigen::Index>(mu.size()), "bayes_violation (mu)");
  require_same_dim(k.y_size(), static_cast<Eigen::Index>(nu.size()), "bayes_violation (nu)");
  RealMatrix delta(k.x_size(), k.y_size());
  for (Eigen::Index x = 0; x < k.x_size(); ++x) {
    for (Eigen::Index y = 0; y < k.y_size(); ++y) {
      delta(x, y) = k.alpha()(x, y) * nu[static_cast<std::size_t>(y)] -
                    k.alpha_tilde()(y, x) * mu[static_cast<std::size_t>(x)];
    }
  }
  return delta;
}

inline RealMatrix bayes_violation(const TransitionKernel& k, const Distribution& mu, const Distribution& nu) {
  return bayes_violation(k, mu.probs(), nu.probs());
}

// delta(x) = mu_{X|C}(x) - sum_y alpha(x, y) mu_{Y|C}(y).
inline RealVector interference_delta(const std::vector<double>& mu_xc, const RealMatrix& alpha,
                                     const std::vector<double>& mu_yc) {
  require_same_dim(alpha.rows(), static_cast<Eigen::Index>(mu_xc.size()), "interference_delta (mu_X)");
  require_same_dim(alpha.cols(), static_cast<Eigen::Index>(mu_yc.size()), "interference_delta (mu_Y)");
  const RealVector mx = Eigen::Map<const RealVector>(mu_xc.data(), alpha.rows());
  const RealVector my = Eigen::Map<const RealVector>(mu_yc.data(), alpha.cols());
  return mx - alpha * my;
}

inline RealVector interference_delta(const Distribution& mu_xc, const RealMatrix& alpha,
                                     const Distribution& mu_yc) {
  return interference_delta(mu_xc.probs(), alpha, mu_yc.probs());
}

struct BornConsistency {
  double max_abs_error;
  bool consistent;
  // alpha(x, y) == alpha_tilde(y, x) within kBornTolerance
  bool symmetric;
};

// Compares alpha(x, y) with |U(x, y)|^2.
inline BornConsistency born_consistency(const Matrix& u, const TransitionKernel& k) {
  require_unitary(u, "born_consistency");
  require_same_dim(u.rows(), k.x_size(), "born_consistency");
  require_same_dim(u.rows(), k.y_size(), "born_consistency");
  const double err = (k.alpha() - RealMatrix(u.cwiseAbs2())).cwiseAbs().maxCoeff();
  const double asym = (k.alpha() - k.alpha_tilde().transpose()).cwiseAbs().maxCoeff();
  return {err, err <= kBornTolerance, asym <= kBornTolerance};
}

// Conditioned spaces over the level sets {Z = z} of a removed variable. The
// context probabilities P(Z = z) are not kept, so the base space cannot be
// recovered from a family.
struct ContextFamily {
  std::vector<classical::OutcomeLabel> outcomes;
  std::vector<double> levels;
  std::vector<classical::Event> contexts;
  std::vector<classical::FiniteProbabilitySpace> conditioned;
  // Levels of Z whose context has probability 0; they are skipped.
  std::vector<double> dropped_levels;

  bool has_warnings() const { return !dropped_levels.empty(); }
  bool operator==(const ContextFamily&) const = default;
};

inline ContextFamily contextual_family(const classical::FiniteProbabilitySpace& space,
                                       const classical::RandomVariable& z) {
  if (z.values.size() != space.size())
    throw DomainError("contextual_family: variable '" + z.name + "' is not defined on the outcome set");
  std::map<double, classical::Event> level_sets;
  for (const auto& o : space.outcomes()) level_sets[z(o)].members.insert(o);

  ContextFamily family;
  family.outcomes = space.outcomes();
  for (auto& [level, event] : level_sets) {
    if (!(space.probability(event) > 0.0)) {
      family.dropped_levels.push_back(level);
      continue;
    }
    family.conditioned.push_back(classical::condition(space, event));
    family.levels.push_back(level);
    family.contexts.push_back(std::move(event));
  }
  return family;
}

}  // namespace ncprob::construct
