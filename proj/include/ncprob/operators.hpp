#pragma once

#include <cmath>
#include <concepts>
#include <string>

#include "ncprob/linalg.hpp"

namespace ncprob::hilbert {

inline constexpr double kHermitianTolerance = 1e-10;
inline constexpr double kTraceTolerance = 1e-10;
inline constexpr double kNormTolerance = 1e-12;
inline constexpr double kProjectorTolerance = 1e-10;

// Self-adjoint operator on C^d. Stored symmetrized as (A + A^dagger)/2.
class HermitianOperator {
 public:
  explicit HermitianOperator(const Matrix& m) {
    require_square(m, "HermitianOperator");
    require_finite(m, "HermitianOperator");
    if (max_abs(m - m.adjoint()) > kHermitianTolerance)
      throw InvariantError("HermitianOperator: matrix is not Hermitian");
    m_ = (m + m.adjoint()) / 2.0;
  }

  static HermitianOperator diagonal(const std::vector<double>& entries) {
    return HermitianOperator(mats::diagonal(entries));
  }

  static HermitianOperator zero(Eigen::Index d) { return HermitianOperator(Matrix::Zero(d, d)); }
  static HermitianOperator identity(Eigen::Index d) {
    return HermitianOperator(Matrix::Identity(d, d));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

class PureState {
 public:
  explicit PureState(const Vector& v) : v_(v) {
    if (v.size() == 0) throw DimensionError("PureState: empty vector");
    if (!v.allFinite()) throw InvariantError("PureState: non-finite amplitudes");
    if (std::abs(v.norm() - 1.0) > kNormTolerance)
      throw InvariantError("PureState: vector is not unit norm");
  }

  // Normalizes an arbitrary non-zero vector.
  static PureState normalized(const Vector& v) {
    const double n = v.norm();
    if (!(n > 0.0)) throw ArgumentError("PureState: cannot normalize the zero vector");
    return PureState(v / n);
  }

  static PureState basis(Eigen::Index d, Eigen::Index k) {
    Vector v = Vector::Zero(d);
    v(k) = 1.0;
    return PureState(v);
  }

  static PureState uniform_superposition(Eigen::Index d) {
    return PureState(Vector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d))));
  }

  Eigen::Index dim() const { return v_.size(); }
  const Vector& vector() const { return v_; }

  double expectation(const Matrix& a) const {
    require_same_dim(dim(), a.rows(), "PureState::expectation");
    return v_.dot(a * v_).real();
  }

 private:
  Vector v_;
};

class DensityOperator {
 public:
  explicit DensityOperator(const Matrix& m) {
    require_square(m, "DensityOperator");
    require_finite(m, "DensityOperator");
    if (max_abs(m - m.adjoint()) > kHermitianTolerance)
      throw InvariantError("DensityOperator: matrix is not Hermitian");
    m_ = (m + m.adjoint()) / 2.0;
    if (std::abs(m_.trace().real() - 1.0) > kTraceTolerance)
      throw InvariantError("DensityOperator: trace is not 1");
    Eigen::SelfAdjointEigenSolver<Matrix> es(m_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < -kHermitianTolerance)
      throw InvariantError("DensityOperator: matrix is not positive semidefinite");
  }

  static DensityOperator from_pure(const PureState& psi) {
    return DensityOperator(psi.vector() * psi.vector().adjoint());
  }

  static DensityOperator maximally_mixed(Eigen::Index d) {
    return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d));
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }

  double expectation(const Matrix& a) const {
    require_same_dim(dim(), a.rows(), "DensityOperator::expectation");
    return (m_ * a).trace().real();
  }

 private:
  Matrix m_;
};

// Either a PureState or a DensityOperator.
template <class S>
concept QuantumState = std::same_as<S, PureState> || std::same_as<S, DensityOperator>;

// Orthogonal projector P = P^dagger = P^2.
class Projector {
 public:
  explicit Projector(const Matrix& m) {
    require_square(m, "Projector");
    require_finite(m, "Projector");
    if (max_abs(m - m.adjoint()) > kProjectorTolerance || max_abs(m * m - m) > kProjectorTolerance)
      throw InvariantError("Projector: matrix is not an orthogonal projector");
    m_ = (m + m.adjoint()) / 2.0;
  }

  static Projector zero(Eigen::Index d) { return Projector(Matrix::Zero(d, d)); }
  static Projector identity(Eigen::Index d) { return Projector(Matrix::Identity(d, d)); }

  // Projector onto span{v}.
  static Projector onto(const Vector& v) {
    const Vector u = v / v.norm();
    return Projector(u * u.adjoint());
  }

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double rank() const { return m_.trace().real(); }

 private:
  Matrix m_;
};

inline double commutator_norm(const Matrix& a, const Matrix& b) {
  require_same_dim(a.rows(), b.rows(), "commutator_norm");
  return operator_norm(commutator(a, b));
}

// Operator 2-norm of AB - BA.
inline double commutator_norm(const HermitianOperator& a, const HermitianOperator& b) {
  return commutator_norm(a.matrix(), b.matrix());
}

}  // namespace ncprob::hilbert
