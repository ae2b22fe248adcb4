#pragma once

// Projector-valued measures on C^d and the operations built on them: spectral
// decomposition, functional calculus, spectral measures of states, joint PVMs
// of commuting pairs and dispersion-free states.

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ncprob/classical.hpp"
#include "ncprob/operators.hpp"

namespace ncprob::hilbert {

inline constexpr double kDefaultDegeneracyTolerance = 1e-8;
inline constexpr double kCommutationTolerance = 1e-9;

// A set of eigenvalues grouped into one cell; values kept sorted.
struct SpectralCell {
  std::vector<double> values;

  SpectralCell() = default;
  explicit SpectralCell(std::vector<double> v) : values(std::move(v)) {
    if (values.empty()) throw InvariantError("SpectralCell: empty cell");
    std::sort(values.begin(), values.end());
  }
  static SpectralCell single(double v) { return SpectralCell({v}); }

  double representative() const {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  }
  bool operator==(const SpectralCell&) const = default;
};

// Cell (a, b) of the joint PVM of two commuting operators.
struct JointCell {
  SpectralCell first;
  SpectralCell second;
  bool operator==(const JointCell&) const = default;
};

// Finite PVM: labelled projectors that are mutually orthogonal and resolve the
// identity, each checked to 1e-10.
template <class Label>
class BasicPVM {
 public:
  struct Cell {
    Label label;
    Matrix projector;
  };

  explicit BasicPVM(std::vector<Cell> cells) : cells_(std::move(cells)) {
    if (cells_.empty()) throw InvariantError("PVM: no cells");
    const Eigen::Index d = cells_.front().projector.rows();
    Matrix total = Matrix::Zero(d, d);
    for (std::size_t i = 0; i < cells_.size(); ++i) {
      Matrix& p = cells_[i].projector;
      if (p.rows() != d || p.cols() != d) throw DimensionError("PVM: projector dimension mismatch");
      if (max_abs(p - p.adjoint()) > kProjectorTolerance || max_abs(p * p - p) > kProjectorTolerance)
        throw InvariantError("PVM: cell " + std::to_string(i) + " is not an orthogonal projector");
      p = (p + p.adjoint()) / 2.0;
      for (std::size_t j = 0; j < i; ++j) {
        if (max_abs(p * cells_[j].projector) > kProjectorTolerance)
          throw InvariantError("PVM: cells " + std::to_string(j) + " and " + std::to_string(i) +
                               " are not orthogonal");
      }
      total += p;
    }
    if (max_abs(total - Matrix::Identity(d, d)) > kProjectorTolerance)
      throw InvariantError("PVM: projectors do not sum to the identity");
  }

  Eigen::Index dim() const { return cells_.front().projector.rows(); }
  std::size_t size() const { return cells_.size(); }
  const std::vector<Cell>& cells() const { return cells_; }
  const Label& label(std::size_t i) const { return cells_.at(i).label; }
  const Matrix& projector(std::size_t i) const { return cells_.at(i).projector; }
  double rank(std::size_t i) const { return cells_.at(i).projector.trace().real(); }

 private:
  std::vector<Cell> cells_;
};

using PVM = BasicPVM<SpectralCell>;
using JointPVM = BasicPVM<JointCell>;

// Probabilities indexed by the cells of a PVM or partition.
template <class Label>
struct CellDistribution {
  std::vector<Label> labels;
  std::vector<double> probs;

  double total() const { return std::accumulate(probs.begin(), probs.end(), 0.0); }
};

namespace detail {

// Rounding can push a probability a hair below zero.
inline double clamp_probability(double p) {
  if (p < -kTraceTolerance) throw InvariantError("negative probability " + std::to_string(p));
  return p < 0.0 ? 0.0 : p;
}

template <class Label>
CellDistribution<Label> checked(CellDistribution<Label> d) {
  for (double& p : d.probs) p = clamp_probability(p);
  if (std::abs(d.total() - 1.0) > kTraceTolerance)
    throw InvariantError("cell probabilities sum to " + std::to_string(d.total()));
  return d;
}

}  // namespace detail

// Converts a distribution over singleton spectral cells into a classical law on
// the cell representatives.
inline classical::Distribution to_distribution(const CellDistribution<SpectralCell>& d) {
  std::vector<double> support;
  support.reserve(d.labels.size());
  for (const auto& c : d.labels) support.push_back(c.representative());
  std::vector<double> probs = d.probs;
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  for (double& p : probs) p /= total;
  return {std::move(support), std::move(probs)};
}

// Diagonal operator with spectrum exactly `values`, plus its singleton PVM in
// the standard basis.
struct Observable {
  HermitianOperator op;
  PVM pvm;
};

inline Observable observable_from_values(const std::vector<double>& values) {
  if (values.empty()) throw ArgumentError("observable: empty spectrum");
  std::vector<double> sorted = values;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw InvariantError("observable: duplicate support values");
  const auto d = static_cast<Eigen::Index>(values.size());
  std::vector<PVM::Cell> cells;
  for (Eigen::Index i = 0; i < d; ++i) {
    Matrix p = Matrix::Zero(d, d);
    p(i, i) = 1.0;
    cells.push_back({SpectralCell::single(values[static_cast<std::size_t>(i)]), std::move(p)});
  }
  return {HermitianOperator::diagonal(values), PVM(std::move(cells))};
}

// T = sum_x x |x><x| on C^{|support|}.
inline Observable observable_from_distribution(const classical::Distribution& d) {
  return observable_from_values(d.support());
}

// rho = sum_i p_i P_i.
inline DensityOperator density_from_distribution(const std::vector<double>& probs, const PVM& basis) {
  if (probs.size() != basis.size())
    throw ArgumentError("density_from_distribution: " + std::to_string(probs.size()) +
                        " probabilities for " + std::to_string(basis.size()) + " cells");
  Matrix rho = Matrix::Zero(basis.dim(), basis.dim());
  for (std::size_t i = 0; i < probs.size(); ++i) rho += probs[i] * basis.projector(i);
  return DensityOperator(rho);
}

inline DensityOperator density_from_distribution(const classical::Distribution& d, const PVM& basis) {
  return density_from_distribution(d.probs(), basis);
}

inline double spectral_radius(const HermitianOperator& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(a.matrix(), Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// Default clustering gap: 1e-8 relative to the spectral radius (at least 1e-8).
inline double default_degeneracy_tolerance(const HermitianOperator& a) {
  return kDefaultDegeneracyTolerance * std::max(1.0, spectral_radius(a));
}

// Eigendecomposition with eigenvalues chained into one cell while consecutive
// gaps stay <= degeneracy_tol. Each cell is labelled by its mean eigenvalue.
inline PVM spectral_pvm(const HermitianOperator& a, double degeneracy_tol) {
  if (!(degeneracy_tol >= 0.0)) throw ArgumentError("spectral_pvm: tolerance must be >= 0");
  const auto es = hermitian_eigensystem(a.matrix());
  const Eigen::Index d = a.dim();
  std::vector<PVM::Cell> cells;
  Eigen::Index start = 0;
  while (start < d) {
    Eigen::Index end = start + 1;
    while (end < d && es.values(end) - es.values(end - 1) <= degeneracy_tol) ++end;
    const Matrix v = es.vectors.middleCols(start, end - start);
    const double mean = es.values.segment(start, end - start).mean();
    cells.push_back({SpectralCell::single(mean), v * v.adjoint()});
    start = end;
  }
  return PVM(std::move(cells));
}

inline PVM spectral_pvm(const HermitianOperator& a) {
  return spectral_pvm(a, default_degeneracy_tolerance(a));
}

// Distinct eigenvalues (cell representatives) of a spectral PVM.
inline std::vector<double> spectrum(const PVM& pvm) {
  std::vector<double> out;
  for (const auto& c : pvm.cells()) out.push_back(c.label.representative());
  return out;
}

// f(A) = sum_i f(lambda_i) P_i.
template <class F>
HermitianOperator apply_function(F&& f, const HermitianOperator& a) {
  const PVM pvm = spectral_pvm(a);
  Matrix out = Matrix::Zero(a.dim(), a.dim());
  for (const auto& cell : pvm.cells()) {
    const double x = cell.label.representative();
    double fx = 0.0;
    try {
      fx = static_cast<double>(f(x));
    } catch (const Error&) {
      throw;
    } catch (const std::exception& e) {
      throw DomainError("apply_function: f undefined at " + std::to_string(x) + ": " + e.what());
    }
    if (!std::isfinite(fx))
      throw DomainError("apply_function: f undefined at eigenvalue " + std::to_string(x));
    out += fx * cell.projector;
  }
  return HermitianOperator(out);
}

// mu(cell i) = <psi|P_i psi>, or Tr(rho P_i).
template <QuantumState S, class Label>
CellDistribution<Label> spectral_measure(const S& state, const BasicPVM<Label>& pvm) {
  require_same_dim(state.dim(), pvm.dim(), "spectral_measure");
  CellDistribution<Label> out;
  for (const auto& cell : pvm.cells()) {
    out.labels.push_back(cell.label);
    out.probs.push_back(state.expectation(cell.projector));
  }
  return detail::checked(std::move(out));
}

// Re Tr(rho A); the imaginary residual must vanish to 1e-10 (scaled by |A|).
inline double trace_expectation(const DensityOperator& rho, const HermitianOperator& a) {
  require_same_dim(rho.dim(), a.dim(), "trace_expectation");
  const Complex t = (rho.matrix() * a.matrix()).trace();
  if (std::abs(t.imag()) > 1e-10 * std::max(1.0, max_abs(a.matrix())))
    throw InvariantError("trace_expectation: non-real trace");
  return t.real();
}

// Joint PVM of a commuting pair: products P_a Q_b with rank >= 1/2.
inline JointPVM joint_pvm(const HermitianOperator& a, const HermitianOperator& b,
                          double comm_tol = kCommutationTolerance) {
  require_same_dim(a.dim(), b.dim(), "joint_pvm");
  const double cn = commutator_norm(a, b);
  if (cn > comm_tol)
    throw NonCommutingError("joint_pvm: operators do not commute (|[A,B]| = " +
                            std::to_string(cn) + ")");
  const PVM pa = spectral_pvm(a);
  const PVM pb = spectral_pvm(b);
  std::vector<JointPVM::Cell> cells;
  for (const auto& ca : pa.cells()) {
    for (const auto& cb : pb.cells()) {
      Matrix prod = ca.projector * cb.projector;
      prod = (prod + prod.adjoint()) / 2.0;
      if (prod.trace().real() < 0.5) continue;
      cells.push_back({JointCell{ca.label, cb.label}, std::move(prod)});
    }
  }
  return JointPVM(std::move(cells));
}

// C = sum_k k Q_k over the joint cells, with lookup tables k -> a and k -> b so
// that f1(C) = A and f2(C) = B.
struct CommonRefiner {
  HermitianOperator refiner;
  std::vector<double> first_values;
  std::vector<double> second_values;

  double first(double k) const { return lookup(first_values, k); }
  double second(double k) const { return lookup(second_values, k); }

 private:
  static double lookup(const std::vector<double>& table, double k) {
    const double r = std::round(k);
    if (std::abs(k - r) > 1e-6 || r < 0.0 || r >= static_cast<double>(table.size()))
      throw DomainError("common refiner: " + std::to_string(k) + " is not a joint cell index");
    return table[static_cast<std::size_t>(r)];
  }
};

inline CommonRefiner common_refiner(const HermitianOperator& a, const HermitianOperator& b) {
  const JointPVM joint = joint_pvm(a, b);
  Matrix c = Matrix::Zero(a.dim(), a.dim());
  std::vector<double> f1, f2;
  for (std::size_t k = 0; k < joint.size(); ++k) {
    c += static_cast<double>(k) * joint.projector(k);
    f1.push_back(joint.label(k).first.representative());
    f2.push_back(joint.label(k).second.representative());
  }
  return {HermitianOperator(c), std::move(f1), std::move(f2)};
}

// omega((a - omega(a))^2).
template <QuantumState S>
double dispersion(const S& state, const HermitianOperator& a) {
  require_same_dim(state.dim(), a.dim(), "dispersion");
  const double m = state.expectation(a.matrix());
  const Matrix shifted = a.matrix() - m * Matrix::Identity(a.dim(), a.dim());
  return state.expectation(shifted * shifted);
}

// Joint eigenvector of a commuting pair taken from the first joint cell: the
// normalized projector column of largest norm.
inline PureState dispersion_free_state(const HermitianOperator& a, const HermitianOperator& b) {
  const JointPVM joint = joint_pvm(a, b);
  const Matrix& q = joint.projector(0);
  Eigen::Index best = 0;
  q.colwise().norm().maxCoeff(&best);
  Vector v = q.col(best);
  v /= v.norm();
  fix_phase(v);
  return PureState::normalized(v);
}

}  // namespace ncprob::hilbert
