#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "cheb2d/cheb_core.hpp"
#include "cheb2d/decay_bounds.hpp"

namespace cheb2d {

/// A folded index 2kn -/+ i together with its sign (-1)^k.
struct FoldTerm {
  int sign;
  int index;
  bool operator==(const FoldTerm&) const = default;
};

/// [((-1)^k, 2kn - i), ((-1)^k, 2kn + i)] for k = 1..k_max. Requires i < n.
std::vector<FoldTerm> fold_indices(int i, int n, int k_max);

struct CrossFoldTerm {
  int sign;
  int i_index;
  int j_index;
  bool operator==(const CrossFoldTerm&) const = default;
};

/// Every exact coefficient that contaminates c~_{i,j}, truncated at k_max
/// folds per axis.
struct AliasExpansion {
  int i = 0;
  int j = 0;
  std::vector<FoldTerm> x_terms;       // contribute sign * c_{index, j}
  std::vector<FoldTerm> y_terms;       // contribute sign * c_{i, index}
  std::vector<CrossFoldTerm> cross_terms;
  int k_max = 0;
};

AliasExpansion alias_expansion(int i, int j, int n_x, int n_y, int k_max);

/// Largest i / j index an exact coefficient matrix must cover to rebuild
/// every resolvable c~ up to (d_x, d_y).
int alias_required_degree(int d, int n, int k_max);

/// c~_{i,j} rebuilt from exact coefficients through the fold identity.
double reconstruct_quadrature_coeff(const CoeffMatrix& exact, int i, int j, int n_x, int n_y, int k_max);

/// Upper bound on |c~_{i,j} - reconstruct(i, j)| summed over every dropped
/// fold (k_x > k_max or k_y > k_max), maximised over i <= d_x, j <= d_y.
/// Uses directional bounds for single-axis folds and the mixed bound for
/// cross folds, with tails summed in closed form. Infinite when k = 0 or
/// l = 0 (the single-axis tails diverge).
double alias_tail_bound(SmoothnessClass cls, const VariationBundle& bundle, int d_x, int d_y, int n_x,
                        int n_y, int k_max);

/// Fold count used when the caller does not pick one: the smallest k_max in
/// [1, 8] whose first dropped folded coefficient has a bound below 1e-15,
/// otherwise 8.
int default_k_max(SmoothnessClass cls, const VariationBundle& bundle, int d_x, int d_y, int n_x, int n_y);

inline constexpr int kMaxFolds = 8;

struct AliasResidual {
  int n_x = 0;
  int n_y = 0;
  int d_x = 0;
  int d_y = 0;
  int k_max = 0;
  int oversample = 0;
  double max_residual = 0.0;
  int argmax_i = 0;
  int argmax_j = 0;
};

/// max over (i, j) <= (d_x, d_y) of |reconstruct(i, j) - c~_{i,j}| with c~
/// from compute_coeffs_quadrature and the exact matrix from the oracle.
AliasResidual alias_residual(const TargetFunction& f, int d_x, int d_y, int n_x, int n_y, int k_max,
                             int oversample = 4);

/// {n_x, n_y, d_x, d_y, k_max, max_residual, argmax, predicted_tail_bound}.
/// A missing or infinite tail bound is written as null.
nlohmann::ordered_json to_json(const AliasResidual& r, std::optional<double> predicted_tail_bound);

}  // namespace cheb2d
