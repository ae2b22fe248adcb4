#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <string>
#include <vector>

#include "ncprob/pvm.hpp"

namespace ncprob::eur {

using hilbert::SpectralCell;

// Tolerance for matching a user-supplied value to an eigenvalue.
inline bool same_value(double a, double b) {
  return std::abs(a - b) <= 1e-8 * std::max(1.0, std::abs(b));
}

// Disjoint cover of an operator's (finite) eigenvalue set. Cell values are
// stored as the canonical eigenvalues of the ground set.
class SpectrumPartition {
 public:
  SpectrumPartition(std::vector<double> ground, const std::vector<std::vector<double>>& groups)
      : ground_(std::move(ground)) {
    std::sort(ground_.begin(), ground_.end());
    if (ground_.empty()) throw InvariantError("SpectrumPartition: empty eigenvalue set");
    if (groups.empty()) throw InvariantError("SpectrumPartition: at least one cell required");
    std::vector<int> owner(ground_.size(), -1);
    for (std::size_t c = 0; c < groups.size(); ++c) {
      if (groups[c].empty()) throw InvariantError("SpectrumPartition: empty cell");
      std::vector<double> values;
      for (double v : groups[c]) {
        const auto k = ground_index(v);
        if (!k)
          throw InvariantError("SpectrumPartition: value " + format(v) +
                               " is not in the spectrum");
        if (owner[*k] != -1)
          throw InvariantError("SpectrumPartition: value " + format(v) +
                               " appears in more than one cell");
        owner[*k] = static_cast<int>(c);
        values.push_back(ground_[*k]);
      }
      cells_.emplace_back(std::move(values));
    }
    for (std::size_t k = 0; k < ground_.size(); ++k) {
      if (owner[k] == -1)
        throw InvariantError("SpectrumPartition: eigenvalue " + format(ground_[k]) +
                             " is not covered");
    }
  }

  static SpectrumPartition singletons(const std::vector<double>& ground) {
    std::vector<std::vector<double>> groups;
    for (double g : ground) groups.push_back({g});
    return {ground, groups};
  }

  static SpectrumPartition whole(const std::vector<double>& ground) { return {ground, {ground}}; }

  // Cells [t_{k-1}, t_k) cut at increasing thresholds; empty cells dropped.
  static SpectrumPartition from_thresholds(const std::vector<double>& ground,
                                           std::vector<double> thresholds) {
    std::sort(thresholds.begin(), thresholds.end());
    std::vector<std::vector<double>> groups(thresholds.size() + 1);
    for (double g : ground) {
      const auto k = std::upper_bound(thresholds.begin(), thresholds.end(), g) - thresholds.begin();
      groups[static_cast<std::size_t>(k)].push_back(g);
    }
    std::erase_if(groups, [](const auto& cell) { return cell.empty(); });
    return {ground, groups};
  }

  // Partitions over the spectrum of an operator.
  static SpectrumPartition singletons(const hilbert::HermitianOperator& a) {
    return singletons(hilbert::spectrum(hilbert::spectral_pvm(a)));
  }
  static SpectrumPartition whole(const hilbert::HermitianOperator& a) {
    return whole(hilbert::spectrum(hilbert::spectral_pvm(a)));
  }

  const std::vector<double>& ground() const { return ground_; }
  const std::vector<SpectralCell>& cells() const { return cells_; }
  std::size_t size() const { return cells_.size(); }

  // Index of the cell holding value v.
  std::size_t cell_of(double v) const {
    for (std::size_t c = 0; c < cells_.size(); ++c) {
      for (double x : cells_[c].values) {
        if (same_value(v, x)) return c;
      }
    }
    throw InvariantError("SpectrumPartition: value " + format(v) + " is not in the spectrum");
  }

  bool same_ground(const SpectrumPartition& other) const {
    if (ground_.size() != other.ground_.size()) return false;
    for (std::size_t k = 0; k < ground_.size(); ++k) {
      if (!same_value(ground_[k], other.ground_[k])) return false;
    }
    return true;
  }

 private:
  static std::string format(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }

  std::optional<std::size_t> ground_index(double v) const {
    for (std::size_t k = 0; k < ground_.size(); ++k) {
      if (same_value(v, ground_[k])) return k;
    }
    return std::nullopt;
  }

  std::vector<double> ground_;
  std::vector<SpectralCell> cells_;
};

// True iff every cell of `coarse` is a union of cells of `fine`, i.e. each
// fine cell sits inside a single coarse cell.
inline bool is_finer(const SpectrumPartition& fine, const SpectrumPartition& coarse) {
  if (!fine.same_ground(coarse))
    throw ArgumentError("is_finer: partitions are over different eigenvalue sets");
  for (const auto& cell : fine.cells()) {
    const std::size_t target = coarse.cell_of(cell.values.front());
    for (double v : cell.values) {
      if (coarse.cell_of(v) != target) return false;
    }
  }
  return true;
}

// P(E_i) = sum of the PVM projectors whose eigenvalue lies in cell i.
inline std::vector<Matrix> cell_projectors(const hilbert::PVM& pvm, const SpectrumPartition& part) {
  if (pvm.size() != part.ground().size())
    throw InvariantError("partition does not match the PVM: " + std::to_string(part.ground().size()) +
                         " values vs " + std::to_string(pvm.size()) + " spectral cells");
  std::vector<Matrix> out(part.size(), Matrix::Zero(pvm.dim(), pvm.dim()));
  for (const auto& cell : pvm.cells()) {
    std::size_t target = part.size();
    for (double v : cell.label.values) {
      const std::size_t c = part.cell_of(v);
      if (target != part.size() && c != target)
        throw InvariantError("partition splits a spectral cell of the PVM");
      target = c;
    }
    out[target] += cell.projector;
  }
  return out;
}

template <hilbert::QuantumState S>
hilbert::CellDistribution<SpectralCell> partition_probabilities(const S& state, const hilbert::PVM& pvm,
                                                                const SpectrumPartition& part) {
  require_same_dim(state.dim(), pvm.dim(), "partition_probabilities");
  const auto projectors = cell_projectors(pvm, part);
  hilbert::CellDistribution<SpectralCell> out;
  out.labels = part.cells();
  for (const auto& p : projectors) out.probs.push_back(state.expectation(p));
  return hilbert::detail::checked(std::move(out));
}

}  // namespace ncprob::eur
