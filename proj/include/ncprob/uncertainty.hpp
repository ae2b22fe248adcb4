#pragma once

// Partition-based Shannon entropies of observables and the two state-independent
// lower bounds on their sum: the overlap bound -2 ln max |P_a Q_b| and the
// projector-sum bound 2 ln(2 / max |P_i + Q_j|).

#include <algorithm>
#include <cmath>
#include <vector>

#include "ncprob/classical.hpp"
#include "ncprob/partition.hpp"

namespace ncprob::eur {

// Shannon entropy (nats) of the partition-coarsened spectral measure.
template <hilbert::QuantumState S>
double epsilon_entropy(const S& state, const hilbert::HermitianOperator& a,
                       const SpectrumPartition& part) {
  const auto probs = partition_probabilities(state, hilbert::spectral_pvm(a), part);
  return classical::shannon_entropy(probs.probs);
}

// -2 ln of max_{a,b} |P_a Q_b|, clamped at overlap 1.
inline double overlap_bound(const std::vector<Matrix>& p, const std::vector<Matrix>& q) {
  double c = 0.0;
  for (const auto& pa : p) {
    for (const auto& qb : q) c = std::max(c, operator_norm(pa * qb));
  }
  return -2.0 * std::log(std::min(c, 1.0));
}

// Bound on the eigenprojectors of A and B. For non-degenerate operators the
// norm |P_a Q_b| is the eigenvector overlap |<phi_a|psi_b>|.
inline double maassen_uffink_bound(const hilbert::HermitianOperator& a,
                                   const hilbert::HermitianOperator& b) {
  require_same_dim(a.dim(), b.dim(), "maassen_uffink_bound");
  const auto pa = hilbert::spectral_pvm(a);
  const auto pb = hilbert::spectral_pvm(b);
  std::vector<Matrix> p, q;
  for (const auto& c : pa.cells()) p.push_back(c.projector);
  for (const auto& c : pb.cells()) q.push_back(c.projector);
  return overlap_bound(p, q);
}

// Same bound evaluated on the partition cell projectors P(E_i), Q(F_j); it
// bounds the sum of the epsilon- and delta-entropies.
inline double maassen_uffink_bound(const hilbert::HermitianOperator& a,
                                   const hilbert::HermitianOperator& b,
                                   const SpectrumPartition& eps, const SpectrumPartition& delta) {
  require_same_dim(a.dim(), b.dim(), "maassen_uffink_bound");
  return overlap_bound(cell_projectors(hilbert::spectral_pvm(a), eps),
                       cell_projectors(hilbert::spectral_pvm(b), delta));
}

// s = max_{i,j} |P(E_i) + Q(F_j)|, which lies in [1, 2].
inline double partovi_norm(const hilbert::HermitianOperator& a, const hilbert::HermitianOperator& b,
                           const SpectrumPartition& eps, const SpectrumPartition& delta) {
  require_same_dim(a.dim(), b.dim(), "partovi_bound");
  const auto p = cell_projectors(hilbert::spectral_pvm(a), eps);
  const auto q = cell_projectors(hilbert::spectral_pvm(b), delta);
  double s = 0.0;
  for (const auto& pi : p) {
    for (const auto& qj : q) {
      Eigen::SelfAdjointEigenSolver<Matrix> es(pi + qj, Eigen::EigenvaluesOnly);
      s = std::max(s, es.eigenvalues().maxCoeff());
    }
  }
  return s;
}

inline double partovi_bound(const hilbert::HermitianOperator& a, const hilbert::HermitianOperator& b,
                            const SpectrumPartition& eps, const SpectrumPartition& delta) {
  const double s = partovi_norm(a, b, eps, delta);
  return std::max(0.0, 2.0 * std::log(2.0 / s));
}

}  // namespace ncprob::eur
