#pragma once

// Lattice of orthogonal projectors. For commuting projectors meet and join
// reduce to the Boolean formulas PQ and P + Q - PQ; otherwise the meet is the
// projector onto ran P n ran Q and the join is obtained by orthocomplement.

#include "ncprob/operators.hpp"
#include "ncprob/pvm.hpp"

namespace ncprob::hilbert::lattice {

inline constexpr double kMeetThreshold = 1e-9;

inline Projector complement(const Projector& p) {
  return Projector(Matrix::Identity(p.dim(), p.dim()) - p.matrix());
}

inline bool commute(const Projector& p, const Projector& q) {
  return commutator_norm(p.matrix(), q.matrix()) <= kCommutationTolerance;
}

inline bool equal(const Projector& p, const Projector& q, double tol = 1e-9) {
  return max_abs(p.matrix() - q.matrix()) <= tol;
}

// P <= Q iff ran P is a subspace of ran Q, i.e. QP = P.
inline bool leq(const Projector& p, const Projector& q, double tol = 1e-9) {
  require_same_dim(p.dim(), q.dim(), "lattice::leq");
  return max_abs(q.matrix() * p.matrix() - p.matrix()) <= tol;
}

inline Projector meet(const Projector& p, const Projector& q) {
  require_same_dim(p.dim(), q.dim(), "lattice::meet");
  if (commute(p, q)) {
    const Matrix pq = p.matrix() * q.matrix();
    return Projector((pq + pq.adjoint()) / 2.0);
  }
  // ran P n ran Q = ker((I - P) + (I - Q)).
  const Eigen::Index d = p.dim();
  const Matrix id = Matrix::Identity(d, d);
  const Matrix s = (id - p.matrix()) + (id - q.matrix());
  return Projector(projector_onto(psd_null_space(s, kMeetThreshold), d));
}

inline Projector join(const Projector& p, const Projector& q) {
  require_same_dim(p.dim(), q.dim(), "lattice::join");
  if (commute(p, q)) {
    const Matrix pq = p.matrix() * q.matrix();
    return Projector(p.matrix() + q.matrix() - (pq + pq.adjoint()) / 2.0);
  }
  return complement(meet(complement(p), complement(q)));
}

// P ^ (Q v R) == (P ^ Q) v (P ^ R).
inline bool is_distributive_triple(const Projector& p, const Projector& q, const Projector& r) {
  return equal(meet(p, join(q, r)), join(meet(p, q), meet(p, r)));
}

// If P <= Q then Q == P v (Q ^ P'); vacuously true otherwise.
inline bool is_orthomodular_pair(const Projector& p, const Projector& q) {
  if (!leq(p, q)) return true;
  return equal(q, join(p, meet(q, complement(p))));
}

}  // namespace ncprob::hilbert::lattice
