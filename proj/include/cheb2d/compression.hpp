#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheb2d/cheb_core.hpp"
#include "cheb2d/decay_bounds.hpp"

namespace cheb2d {

struct SparseEntry {
  int i;
  int j;
  double value;
};

enum class CompressionStrategy { bound, magnitude };

std::string to_string(CompressionStrategy strategy);

/// A thresholded coefficient matrix. The dropped set is the complement of
/// `kept` within the source degree range; `dropped_l1_budget` is 4 times the
/// sum of the per-entry certificates (bounds or magnitudes) of that set.
struct SparseCoeffs {
  std::vector<SparseEntry> kept;
  std::vector<SparseEntry> dropped;
  double dropped_l1_budget = 0.0;
  CompressionStrategy strategy = CompressionStrategy::magnitude;
  double epsilon = 0.0;
  std::shared_ptr<const CoeffMatrix> origin;

  std::size_t total_count() const noexcept { return kept.size() + dropped.size(); }
};

/// Drops (i, j) iff its smallest applicable decay bound is below epsilon.
/// Indices without any bound are always kept.
SparseCoeffs threshold_by_bound(std::shared_ptr<const CoeffMatrix> c, SmoothnessClass cls,
                                const VariationBundle& bundle, double epsilon);

/// Drops (i, j) iff |c_{i,j}| < epsilon.
SparseCoeffs threshold_by_magnitude(std::shared_ptr<const CoeffMatrix> c, double epsilon);

/// Primed partial sum over the kept entries only.
double eval_sparse(const SparseCoeffs& s, double x, double y);

struct CompressionReport {
  std::size_t kept_count = 0;
  std::size_t total_count = 0;
  double budget = 0.0;
  double measured_l1_vs_dense = 0.0;
  double measured_l1_vs_f = 0.0;

  /// measured_l1_vs_dense <= budget (1 + 1e-6).
  bool sound() const noexcept;
};

CompressionReport compression_report(const SparseCoeffs& s, const TargetFunction& f, int m);

nlohmann::ordered_json to_json(const CompressionReport& r);
nlohmann::ordered_json sidecar_json(const SparseCoeffs& s, const CompressionReport& r);

/// `i,j,c` rows for kept entries.
std::string kept_csv(const SparseCoeffs& s);

}  // namespace cheb2d
