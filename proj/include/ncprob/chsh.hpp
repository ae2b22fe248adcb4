#pragma once

#include <cmath>
#include <string>

#include "ncprob/operators.hpp"
#include "ncprob/pvm.hpp"

namespace ncprob::hilbert {

// Operators and state entering one evaluation of the CHSH functional.
struct ChshConfiguration {
  HermitianOperator a1, a2, b1, b2;
  DensityOperator omega;
};

// omega(a1 (b1 + b2) + a2 (b1 - b2)) for a fixed configuration. The supremum
// over operators is left to the caller.
inline double chsh_beta(const HermitianOperator& a1, const HermitianOperator& a2,
                        const HermitianOperator& b1, const HermitianOperator& b2,
                        const DensityOperator& omega) {
  const Eigen::Index d = omega.dim();
  for (const auto* op : {&a1, &a2, &b1, &b2}) {
    require_same_dim(op->dim(), d, "chsh_beta");
    if (operator_norm(op->matrix()) > 1.0 + 1e-9)
      throw HypothesisError("chsh_beta: operator norm exceeds 1");
  }
  for (const auto* a : {&a1, &a2}) {
    for (const auto* b : {&b1, &b2}) {
      if (commutator_norm(*a, *b) > kCommutationTolerance)
        throw HypothesisError("chsh_beta: the two sides do not commute");
    }
  }
  const Matrix t = a1.matrix() * (b1.matrix() + b2.matrix()) +
                   a2.matrix() * (b1.matrix() - b2.matrix());
  return (omega.matrix() * t).trace().real();
}

inline double chsh_beta(const ChshConfiguration& c) {
  return chsh_beta(c.a1, c.a2, c.b1, c.b2, c.omega);
}

// Two-qubit configuration reaching 2 sqrt 2: a = Z x I, a' = X x I,
// b = I x (Z + X)/sqrt 2, b' = I x (Z - X)/sqrt 2 in the Bell state
// (|00> + |11>)/sqrt 2.
inline ChshConfiguration tsirelson_configuration() {
  using namespace mats;
  const Matrix id = identity(2);
  const double s = 1.0 / std::sqrt(2.0);
  Vector bell = Vector::Zero(4);
  bell(0) = s;
  bell(3) = s;
  return {HermitianOperator(kron(pauli_z(), id)), HermitianOperator(kron(pauli_x(), id)),
          HermitianOperator(kron(id, (pauli_z() + pauli_x()) * s)),
          HermitianOperator(kron(id, (pauli_z() - pauli_x()) * s)),
          DensityOperator::from_pure(PureState(bell))};
}

}  // namespace ncprob::hilbert
