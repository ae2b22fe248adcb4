#pragma once

#include <algorithm>
#include <string>
#include <utility>
#include <vector>

#include "ncprob/sphere_optimizer.hpp"
#include "ncprob/uncertainty.hpp"

namespace ncprob::eur {

// Analytic bounds must exceed this to count as a strict entropic relation.
inline constexpr double kCertificationThreshold = 1e-6;
// Slack allowed between the optimizer's best value and a valid lower bound.
inline constexpr double kOptimizerSlack = 1e-4;

struct MinEntropyResult {
  double infimum = 0.0;
  hilbert::PureState argmin = hilbert::PureState::basis(1, 0);
  SphereMinimum evidence;
};

// Best value found for H(A; eps) + H(B; delta) over pure states. This is an
// upper estimate of the infimum; attainment is never claimed.
inline MinEntropyResult min_entropy_sum(const hilbert::HermitianOperator& a,
                                        const hilbert::HermitianOperator& b,
                                        const SpectrumPartition& eps, const SpectrumPartition& delta,
                                        const OptimizerConfig& opt = {}) {
  require_same_dim(a.dim(), b.dim(), "min_entropy_sum");
  const auto p = cell_projectors(hilbert::spectral_pvm(a), eps);
  const auto q = cell_projectors(hilbert::spectral_pvm(b), delta);
  auto objective = [&](const Vector& psi) {
    double h = 0.0;
    for (const auto* cells : {&p, &q}) {
      for (const auto& proj : *cells) {
        const double prob = psi.dot(proj * psi).real();
        if (prob > 0.0) h -= prob * std::log(prob);
      }
    }
    return std::max(h, 0.0);
  };
  auto best = minimize_on_sphere(objective, a.dim(), opt);
  return {best.value, best.argmin, std::move(best)};
}

enum class Verdict { kNoncommuting, kInconclusive };

inline const char* to_string(Verdict v) {
  return v == Verdict::kNoncommuting ? "noncommuting" : "inconclusive";
}

struct EURCertificate {
  EURCertificate(std::string first, std::string second, SpectrumPartition e, SpectrumPartition d)
      : first_name(std::move(first)), second_name(std::move(second)), eps(std::move(e)), delta(std::move(d)) {}

  std::string first_name;
  std::string second_name;
  SpectrumPartition eps;
  SpectrumPartition delta;
  double maassen_uffink = 0.0;  // on the partition cells
  double partovi = 0.0;
  double partovi_s = 0.0;
  double numeric_infimum = 0.0;
  SphereMinimum evidence;
  double commutator_norm = 0.0;  // ground truth, not used by the verdict
  double threshold = kCertificationThreshold;
  Verdict verdict = Verdict::kInconclusive;
  // numeric_infimum >= max(analytic bounds) - kOptimizerSlack
  bool consistent = true;

  double best_bound() const { return std::max(maassen_uffink, partovi); }
};

// A strictly positive partition bound means no state is dispersion-free for
// both operators, hence [A, B] != 0. The verdict rests on the analytic bounds
// alone; the optimizer result is recorded as corroboration.
inline EURCertificate certify_noncommutativity(const hilbert::HermitianOperator& a,
                                               const hilbert::HermitianOperator& b,
                                               const SpectrumPartition& eps,
                                               const SpectrumPartition& delta,
                                               const OptimizerConfig& opt = {},
                                               std::string first_name = "A",
                                               std::string second_name = "B",
                                               double threshold = kCertificationThreshold) {
  EURCertificate cert(std::move(first_name), std::move(second_name), eps, delta);
  cert.threshold = threshold;
  cert.maassen_uffink = maassen_uffink_bound(a, b, eps, delta);
  cert.partovi_s = partovi_norm(a, b, eps, delta);
  cert.partovi = std::max(0.0, 2.0 * std::log(2.0 / cert.partovi_s));
  const auto numeric = min_entropy_sum(a, b, eps, delta, opt);
  cert.numeric_infimum = numeric.infimum;
  cert.evidence = numeric.evidence;
  cert.commutator_norm = hilbert::commutator_norm(a, b);
  cert.verdict = cert.best_bound() > threshold ? Verdict::kNoncommuting : Verdict::kInconclusive;
  cert.consistent = cert.numeric_infimum >= cert.best_bound() - kOptimizerSlack;
  return cert;
}

}  // namespace ncprob::eur
