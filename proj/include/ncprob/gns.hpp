#pragma once

// GNS representation of a finite-dimensional *-subalgebra of M_d(C) with
// respect to a state omega(a) = Tr(rho a).
//
// The algebra is handed over as a spanning list of matrices. Internally it is
// re-expressed in a Hilbert-Schmidt orthonormal basis {E_i}; the GNS form
// <a, b> = Tr(rho a^dagger b) becomes the Gram matrix G on that basis, and
// the quotient by its null space is coordinatized by G-orthonormal vectors.

#include <string>
#include <vector>

#include "ncprob/operators.hpp"

namespace ncprob::hilbert {

inline constexpr double kGnsNullThreshold = 1e-10;
inline constexpr double kAlgebraTolerance = 1e-8;

class GnsRepresentation {
 public:
  GnsRepresentation(const std::vector<Matrix>& algebra_basis, const DensityOperator& omega)
      : dim_(omega.dim()) {
    if (algebra_basis.empty()) throw AlgebraError("gns: empty algebra basis");
    for (const auto& b : algebra_basis) {
      if (b.rows() != dim_ || b.cols() != dim_)
        throw DimensionError("gns: basis element dimension differs from the state");
    }
    build_orthonormal_basis(algebra_basis);
    check_star_algebra();

    const auto m = static_cast<Eigen::Index>(basis_.size());
    Matrix gram(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        gram(i, j) = (omega.matrix() * basis_[static_cast<std::size_t>(i)].adjoint() *
                      basis_[static_cast<std::size_t>(j)])
                         .trace();
      }
    }
    gram = (gram + gram.adjoint()) / 2.0;
    gram_ = gram;

    const auto es = hermitian_eigensystem(gram);
    std::vector<Eigen::Index> kept;
    for (Eigen::Index k = 0; k < m; ++k) {
      if (es.values(k) > kGnsNullThreshold) kept.push_back(k);
    }
    rep_dim_ = static_cast<Eigen::Index>(kept.size());
    quotient_basis_ = Matrix(m, rep_dim_);
    for (Eigen::Index c = 0; c < rep_dim_; ++c) {
      const Eigen::Index k = kept[static_cast<std::size_t>(c)];
      quotient_basis_.col(c) = es.vectors.col(k) / std::sqrt(es.values(k));
    }

    psi_ = Vector(classify(Matrix::Identity(dim_, dim_)));
  }

  // Dimension of the GNS Hilbert space (rank of the Gram matrix).
  Eigen::Index rep_dim() const { return rep_dim_; }
  // Dimension of the algebra as a vector space.
  Eigen::Index algebra_dim() const { return static_cast<Eigen::Index>(basis_.size()); }

  // Cyclic vector: the class of the unit.
  PureState cyclic_vector() const { return PureState::normalized(psi_); }

  // pi(a) acting on the quotient: pi(a)[b] = [ab].
  Matrix represent(const Matrix& a) const {
    require_in_algebra(a, "gns::represent");
    Matrix out(rep_dim_, rep_dim_);
    for (Eigen::Index l = 0; l < rep_dim_; ++l) {
      out.col(l) = classify(a * element(quotient_basis_.col(l)));
    }
    return out;
  }

  // Coordinates of the class [a] in the orthonormal quotient basis.
  Vector classify(const Matrix& a) const { return quotient_basis_.adjoint() * gram_ * coefficients(a); }

  // Rank of span{pi(b) Psi : b in algebra}; equals rep_dim for a cyclic Psi.
  Eigen::Index orbit_rank() const {
    Matrix orbit(rep_dim_, static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      orbit.col(static_cast<Eigen::Index>(i)) = represent(basis_[i]) * psi_;
    }
    if (rep_dim_ == 0) return 0;
    Eigen::JacobiSVD<Matrix> svd(orbit);
    svd.setThreshold(1e-9);
    return svd.rank();
  }

  // Hilbert-Schmidt distance from a to the algebra.
  double distance_to_algebra(const Matrix& a) const {
    return (a - element(coefficients(a))).norm();
  }

  const std::vector<Matrix>& orthonormal_basis() const { return basis_; }

 private:
  void build_orthonormal_basis(const std::vector<Matrix>& spanning) {
    const Eigen::Index d2 = dim_ * dim_;
    Matrix stacked(d2, static_cast<Eigen::Index>(spanning.size()));
    for (std::size_t i = 0; i < spanning.size(); ++i) {
      stacked.col(static_cast<Eigen::Index>(i)) = spanning[i].reshaped();
    }
    Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
    const double top = svd.singularValues()(0);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      if (svd.singularValues()(k) <= 1e-10 * std::max(1.0, top)) break;
      basis_.push_back(svd.matrixU().col(k).reshaped(dim_, dim_));
    }
    if (basis_.empty()) throw AlgebraError("gns: algebra basis spans {0}");
  }

  void check_star_algebra() const {
    if (distance_to_algebra(Matrix::Identity(dim_, dim_)) > kAlgebraTolerance)
      throw AlgebraError("gns: identity is not in the span of the basis");
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      if (distance_to_algebra(basis_[i].adjoint()) > kAlgebraTolerance)
        throw AlgebraError("gns: span is not closed under adjoint");
      for (std::size_t j = 0; j < basis_.size(); ++j) {
        if (distance_to_algebra(basis_[i] * basis_[j]) > kAlgebraTolerance)
          throw AlgebraError("gns: span is not closed under products");
      }
    }
  }

  void require_in_algebra(const Matrix& a, const char* what) const {
    require_same_dim(a.rows(), dim_, what);
    if (distance_to_algebra(a) > kAlgebraTolerance * std::max(1.0, a.norm()))
      throw AlgebraError(std::string(what) + ": element is not in the algebra");
  }

  Vector coefficients(const Matrix& a) const {
    Vector c(static_cast<Eigen::Index>(basis_.size()));
    for (std::size_t i = 0; i < basis_.size(); ++i) {
      c(static_cast<Eigen::Index>(i)) = basis_[i].reshaped().dot(a.reshaped());
    }
    return c;
  }

  Matrix element(const Vector& coeffs) const {
    Matrix out = Matrix::Zero(dim_, dim_);
    for (std::size_t i = 0; i < basis_.size(); ++i) out += coeffs(static_cast<Eigen::Index>(i)) * basis_[i];
    return out;
  }

  Eigen::Index dim_;
  Eigen::Index rep_dim_ = 0;
  std::vector<Matrix> basis_;
  Matrix gram_;
  Matrix quotient_basis_;
  Vector psi_;
};

inline GnsRepresentation gns_construct(const std::vector<Matrix>& algebra_basis,
                                       const DensityOperator& omega) {
  return GnsRepresentation(algebra_basis, omega);
}

namespace algebras {

// Matrix units E_ij spanning M_d(C).
inline std::vector<Matrix> full_matrix_algebra(Eigen::Index d) {
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = 0; j < d; ++j) {
      Matrix e = Matrix::Zero(d, d);
      e(i, j) = 1.0;
      out.push_back(std::move(e));
    }
  }
  return out;
}

inline std::vector<Matrix> diagonal_algebra(Eigen::Index d) {
  std::vector<Matrix> out;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix e = Matrix::Zero(d, d);
    e(i, i) = 1.0;
    out.push_back(std::move(e));
  }
  return out;
}

}  // namespace algebras
}  // namespace ncprob::hilbert
