#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>
#include <vector>

#include "ncprob/errors.hpp"

namespace ncprob {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw DimensionError(std::string(what) + ": expected a non-empty square matrix");
}

inline void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw InvariantError(std::string(what) + ": non-finite entries");
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b)
    throw DimensionError(std::string(what) + ": dimension mismatch (" + std::to_string(a) +
                         " vs " + std::to_string(b) + ")");
}

// Largest absolute entry.
inline double max_abs(const Matrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

// Operator 2-norm (largest singular value).
inline double operator_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

inline Matrix commutator(const Matrix& a, const Matrix& b) { return a * b - b * a; }

inline bool is_unitary(const Matrix& u, double tol = 1e-10) {
  if (u.rows() != u.cols()) return false;
  return max_abs(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

// Eigenvalues ascending; each eigenvector's largest-magnitude entry is made
// real positive (ties resolved toward the lowest index) so the output does not
// depend on the solver's phase conventions.
struct EigenSystem {
  RealVector values;
  Matrix vectors;  // columns
};

inline void fix_phase(Eigen::Ref<Vector> v) {
  double best = -1.0;
  Eigen::Index at = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v(i));
    if (mag > best * (1.0 + 1e-12) + 1e-15) {
      best = mag;
      at = i;
    }
  }
  if (best > 0.0) v *= std::conj(v(at)) / std::abs(v(at));
}

inline EigenSystem hermitian_eigensystem(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  if (solver.info() != Eigen::Success) throw Error("eigendecomposition failed");
  EigenSystem es{solver.eigenvalues(), solver.eigenvectors()};
  for (Eigen::Index k = 0; k < es.vectors.cols(); ++k) fix_phase(es.vectors.col(k));
  return es;
}

// Orthonormal basis (columns) of the null space of a Hermitian PSD matrix,
// taken as eigenvectors with eigenvalue <= threshold.
inline Matrix psd_null_space(const Matrix& h, double threshold) {
  const auto es = hermitian_eigensystem(h);
  Eigen::Index k = 0;
  while (k < es.values.size() && es.values(k) <= threshold) ++k;
  return es.vectors.leftCols(k);
}

inline Matrix projector_onto(const Matrix& orthonormal_columns, Eigen::Index dim) {
  if (orthonormal_columns.cols() == 0) return Matrix::Zero(dim, dim);
  return orthonormal_columns * orthonormal_columns.adjoint();
}

namespace mats {

inline Matrix identity(Eigen::Index d) { return Matrix::Identity(d, d); }

// Unitary discrete Fourier matrix F[j][k] = exp(2 pi i jk/d)/sqrt(d).
inline Matrix fourier(Eigen::Index d) {
  Matrix f(d, d);
  const double norm = 1.0 / std::sqrt(static_cast<double>(d));
  for (Eigen::Index j = 0; j < d; ++j) {
    for (Eigen::Index k = 0; k < d; ++k) {
      // Reduce jk mod d before the trig call to keep phases exact for large d.
      const double phase = 2.0 * std::numbers::pi * static_cast<double>((j * k) % d) /
                           static_cast<double>(d);
      f(j, k) = std::polar(norm, phase);
    }
  }
  return f;
}

inline Matrix hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  return h;
}

inline Matrix pauli_x() {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

inline Matrix pauli_y() {
  Matrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

inline Matrix pauli_z() {
  Matrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

inline Matrix diagonal(const std::vector<double>& entries) {
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(entries.size()),
                          static_cast<Eigen::Index>(entries.size()));
  for (std::size_t i = 0; i < entries.size(); ++i) {
    m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = entries[i];
  }
  return m;
}

inline Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

}  // namespace mats
}  // namespace ncprob
