#pragma once

// Finite probability spaces, random variables and their laws.
//
// The event algebra of a FiniteProbabilitySpace is always the power set of the
// outcome set, so an Event is just a subset of outcome labels.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ncprob/errors.hpp"
#include "ncprob/random.hpp"

namespace ncprob::classical {

// Tolerance on the total mass of a probability vector.
inline constexpr double kMassTolerance = 1e-12;

using OutcomeLabel = std::string;

namespace detail {

// Checks non-negativity and unit mass; rescales by the (tiny) deviation so the
// stored weights sum to one as closely as floating point allows.
inline std::vector<double> normalized_weights(std::vector<double> weights,
                                              const char* what) {
  if (weights.empty()) throw InvariantError(std::string(what) + ": no weights");
  for (double w : weights) {
    if (!std::isfinite(w) || w < 0.0)
      throw InvariantError(std::string(what) + ": weights must be finite and >= 0");
  }
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (std::abs(total - 1.0) > kMassTolerance)
    throw InvariantError(std::string(what) + ": weights sum to " +
                         std::to_string(total) + ", expected 1");
  if (total != 1.0) {
    for (double& w : weights) w /= total;
  }
  return weights;
}

}  // namespace detail

// Subset of the outcome set of some space.
struct Event {
  std::set<OutcomeLabel> members;

  Event() = default;
  Event(std::initializer_list<OutcomeLabel> labels) : members(labels) {}
  explicit Event(std::set<OutcomeLabel> labels) : members(std::move(labels)) {}

  bool contains(const OutcomeLabel& label) const { return members.count(label) > 0; }
  bool operator==(const Event&) const = default;
};

class FiniteProbabilitySpace {
 public:
  FiniteProbabilitySpace(std::vector<OutcomeLabel> outcomes, std::vector<double> weights)
      : outcomes_(std::move(outcomes)),
        weights_(detail::normalized_weights(std::move(weights), "FiniteProbabilitySpace")) {
    if (outcomes_.size() != weights_.size())
      throw InvariantError("FiniteProbabilitySpace: one weight per outcome required");
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      if (!index_.emplace(outcomes_[i], i).second)
        throw InvariantError("FiniteProbabilitySpace: duplicate outcome label '" +
                             outcomes_[i] + "'");
    }
  }

  // Uniform space over the given labels.
  static FiniteProbabilitySpace uniform(std::vector<OutcomeLabel> outcomes) {
    std::vector<double> w(outcomes.size(), 1.0 / static_cast<double>(outcomes.size()));
    return {std::move(outcomes), std::move(w)};
  }

  // Outcomes labelled "1".."n".
  static std::vector<OutcomeLabel> numbered(int n, int first = 1) {
    std::vector<OutcomeLabel> labels;
    labels.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(first + i));
    return labels;
  }

  std::size_t size() const { return outcomes_.size(); }
  const std::vector<OutcomeLabel>& outcomes() const { return outcomes_; }
  const std::vector<double>& weights() const { return weights_; }

  bool has_outcome(const OutcomeLabel& label) const { return index_.count(label) > 0; }

  std::size_t index_of(const OutcomeLabel& label) const {
    auto it = index_.find(label);
    if (it == index_.end()) throw DomainError("unknown outcome label '" + label + "'");
    return it->second;
  }

  double weight(const OutcomeLabel& label) const { return weights_[index_of(label)]; }

  void check_event(const Event& event) const {
    for (const auto& m : event.members) {
      if (!has_outcome(m))
        throw DomainError("event member '" + m + "' is not an outcome of the space");
    }
  }

  double probability(const Event& event) const {
    check_event(event);
    double p = 0.0;
    for (std::size_t i = 0; i < outcomes_.size(); ++i) {
      if (event.contains(outcomes_[i])) p += weights_[i];
    }
    return p;
  }

  bool operator==(const FiniteProbabilitySpace& other) const {
    return outcomes_ == other.outcomes_ && weights_ == other.weights_;
  }

 private:
  std::vector<OutcomeLabel> outcomes_;
  std::vector<double> weights_;
  std::map<OutcomeLabel, std::size_t> index_;
};

struct RandomVariable {
  std::string name;
  std::map<OutcomeLabel, double> values;

  double operator()(const OutcomeLabel& label) const {
    auto it = values.find(label);
    if (it == values.end())
      throw DomainError("random variable '" + name + "' undefined at outcome '" + label + "'");
    return it->second;
  }

  // Identity variable on numerically labelled outcomes.
  static RandomVariable identity(std::string name, const FiniteProbabilitySpace& space) {
    RandomVariable x{std::move(name), {}};
    for (const auto& o : space.outcomes()) x.values[o] = std::stod(o);
    return x;
  }

  static RandomVariable constant(std::string name, const FiniteProbabilitySpace& space,
                                 double c) {
    RandomVariable x{std::move(name), {}};
    for (const auto& o : space.outcomes()) x.values[o] = c;
    return x;
  }
};

// Law of a real random variable: strictly increasing support with matching
// probabilities.
class Distribution {
 public:
  Distribution(std::vector<double> support, std::vector<double> probs)
      : support_(std::move(support)),
        probs_(detail::normalized_weights(std::move(probs), "Distribution")) {
    if (support_.size() != probs_.size())
      throw InvariantError("Distribution: support and probabilities differ in length");
    for (std::size_t i = 0; i < support_.size(); ++i) {
      if (!std::isfinite(support_[i]))
        throw InvariantError("Distribution: non-finite support value");
      if (i > 0 && !(support_[i - 1] < support_[i]))
        throw InvariantError("Distribution: support must be strictly increasing");
    }
  }

  // Sorts (value, probability) pairs; duplicate values are rejected.
  static Distribution from_pairs(std::vector<std::pair<double, double>> pairs) {
    std::sort(pairs.begin(), pairs.end());
    std::vector<double> s, p;
    for (const auto& [v, q] : pairs) {
      if (!s.empty() && s.back() == v)
        throw InvariantError("Distribution: duplicate support value");
      s.push_back(v);
      p.push_back(q);
    }
    return {std::move(s), std::move(p)};
  }

  static Distribution delta(double value) { return {{value}, {1.0}}; }

  static Distribution uniform(std::vector<double> support) {
    std::vector<double> p(support.size(), 1.0 / static_cast<double>(support.size()));
    return {std::move(support), std::move(p)};
  }

  std::size_t size() const { return support_.size(); }
  const std::vector<double>& support() const { return support_; }
  const std::vector<double>& probs() const { return probs_; }

  // Probability of an exact support value (0 if absent).
  double prob(double value) const {
    auto it = std::lower_bound(support_.begin(), support_.end(), value);
    if (it == support_.end() || *it != value) return 0.0;
    return probs_[static_cast<std::size_t>(it - support_.begin())];
  }

  bool operator==(const Distribution&) const = default;

 private:
  std::vector<double> support_;
  std::vector<double> probs_;
};

// mu_X = P o X^{-1}. Outcomes with equal (bitwise) values of X are merged, so
// outcome values should be exactly representable doubles.
inline Distribution pushforward(const RandomVariable& x, const FiniteProbabilitySpace& space) {
  if (x.values.size() != space.size())
    throw DomainError("random variable '" + x.name + "' is not defined on exactly the outcome set");
  std::map<double, double> mass;
  for (std::size_t i = 0; i < space.size(); ++i) {
    const auto& label = space.outcomes()[i];
    auto it = x.values.find(label);
    if (it == x.values.end())
      throw DomainError("random variable '" + x.name + "' undefined at outcome '" + label + "'");
    mass[it->second] += space.weights()[i];
  }
  std::vector<double> s, p;
  for (const auto& [v, q] : mass) {
    s.push_back(v);
    p.push_back(q);
  }
  return {std::move(s), std::move(p)};
}

template <class F>
double expectation(F&& f, const Distribution& d) {
  double total = 0.0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    total += static_cast<double>(f(d.support()[i])) * d.probs()[i];
  }
  return total;
}

inline double mean(const Distribution& d) {
  return expectation([](double x) { return x; }, d);
}

// Bayes conditioning P_C(A) = P(A n C) / P(C). The outcome set is unchanged.
inline FiniteProbabilitySpace condition(const FiniteProbabilitySpace& space, const Event& c) {
  const double pc = space.probability(c);
  if (!(pc > 0.0)) throw NullConditioningError("conditioning event has probability 0");
  std::vector<double> w(space.size(), 0.0);
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (c.contains(space.outcomes()[i])) w[i] = space.weights()[i] / pc;
  }
  return {space.outcomes(), std::move(w)};
}

// Shannon entropy in nats with 0 log 0 = 0.
inline double shannon_entropy(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h < 0.0 ? 0.0 : h;
}

inline double shannon_entropy(const Distribution& d) { return shannon_entropy(d.probs()); }

// Relative frequency K_n / n of the event over n i.i.d. draws.
//
// Draws use std::mt19937_64 seeded with `seed`; each draw takes the top 53
// bits of one engine output as u in [0,1) and picks the first outcome whose
// cumulative weight exceeds u.
inline double lln_frequency(const FiniteProbabilitySpace& space, const Event& event,
                            std::uint64_t n, std::uint64_t seed = kDefaultSeed) {
  if (n == 0) throw ArgumentError("lln_frequency: trial count must be >= 1");
  space.check_event(event);
  std::vector<double> cumulative(space.size());
  std::partial_sum(space.weights().begin(), space.weights().end(), cumulative.begin());
  std::vector<char> hit(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) {
    hit[i] = event.contains(space.outcomes()[i]) ? 1 : 0;
  }
  // Outcomes after the last positive weight are never selected.
  std::size_t last = space.size() - 1;
  while (last > 0 && space.weights()[last] == 0.0) --last;

  Rng rng(seed);
  std::uint64_t count = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    const double u = rng.uniform();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    std::size_t idx = std::min(static_cast<std::size_t>(it - cumulative.begin()), last);
    count += static_cast<std::uint64_t>(hit[idx]);
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

}  // namespace ncprob::classical
