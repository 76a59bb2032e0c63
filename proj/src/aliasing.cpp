#include "cheb2d/aliasing.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <numbers>

#include "cheb2d/errors.hpp"

namespace cheb2d {

namespace {

int fold_sign(int k) { return k % 2 == 0 ? 1 : -1; }

void require_resolvable(int i, int n, const char* axis) {
  if (n < 1) throw ArgumentError(std::string("node count along ") + axis + " must be positive");
  if (i < 0 || i >= n) {
    throw ArgumentError(std::string("index along ") + axis + " must satisfy 0 <= i < n (i = " + std::to_string(i) +
                        ", n = " + std::to_string(n) + ")");
  }
}

void require_folds(int k_max) {
  if (k_max < 1) throw ArgumentError("k_max must be >= 1");
}

// v * (sum of axis decay factors over indices >= first), with the index
// multiplicity of the fold pattern. A zero variation annihilates the tail.
double scaled_tail(double v, int order, int first, int multiplicity) {
  if (v == 0.0) return 0.0;
  return v * multiplicity * axis_decay_tail(order, first);
}

}  // namespace

std::vector<FoldTerm> fold_indices(int i, int n, int k_max) {
  require_resolvable(i, n, "fold axis");
  require_folds(k_max);
  std::vector<FoldTerm> terms;
  terms.reserve(2 * static_cast<std::size_t>(k_max));
  for (int k = 1; k <= k_max; ++k) {
    assert(2 * k * n - i > 0);
    terms.push_back({fold_sign(k), 2 * k * n - i});
    terms.push_back({fold_sign(k), 2 * k * n + i});
  }
  return terms;
}

AliasExpansion alias_expansion(int i, int j, int n_x, int n_y, int k_max) {
  require_resolvable(i, n_x, "x");
  require_resolvable(j, n_y, "y");
  AliasExpansion e;
  e.i = i;
  e.j = j;
  e.k_max = k_max;
  e.x_terms = fold_indices(i, n_x, k_max);
  e.y_terms = fold_indices(j, n_y, k_max);
  for (const auto& tx : e.x_terms)
    for (const auto& ty : e.y_terms) e.cross_terms.push_back({tx.sign * ty.sign, tx.index, ty.index});
  return e;
}

int alias_required_degree(int d, int n, int k_max) { return 2 * k_max * n + d; }

double reconstruct_quadrature_coeff(const CoeffMatrix& exact, int i, int j, int n_x, int n_y, int k_max) {
  const AliasExpansion e = alias_expansion(i, j, n_x, n_y, k_max);
  const int need_i = alias_required_degree(i, n_x, k_max);
  const int need_j = alias_required_degree(j, n_y, k_max);
  if (need_i > exact.d_x()) {
    throw ArgumentError("exact coefficients stop at i = " + std::to_string(exact.d_x()) + "; fold term c_{" +
                        std::to_string(need_i) + "," + std::to_string(j) + "} is missing");
  }
  if (need_j > exact.d_y()) {
    throw ArgumentError("exact coefficients stop at j = " + std::to_string(exact.d_y()) + "; fold term c_{" +
                        std::to_string(i) + "," + std::to_string(need_j) + "} is missing");
  }
  double value = exact(i, j);
  for (const auto& t : e.x_terms) value += t.sign * exact(t.index, j);
  for (const auto& t : e.y_terms) value += t.sign * exact(i, t.index);
  for (const auto& t : e.cross_terms) value += t.sign * exact(t.i_index, t.j_index);
  return value;
}

double alias_tail_bound(SmoothnessClass cls, const VariationBundle& bundle, int d_x, int d_y, int n_x, int n_y,
                        int k_max) {
  bundle.validate();
  require_folds(k_max);
  require_resolvable(d_x, n_x, "x");
  require_resolvable(d_y, n_y, "y");
  if (n_x < cls.k || n_y < cls.l) throw ArgumentError("fold tail bound requires n_x >= k and n_y >= l");

  const double scale = 4.0 / (std::numbers::pi * std::numbers::pi);
  const int near_x = 2 * n_x;                 // first fold k_x = 1
  const int far_x = 2 * (k_max + 1) * n_x;    // first dropped fold
  const int near_y = 2 * n_y;
  const int far_y = 2 * (k_max + 1) * n_y;

  double worst = 0.0;
  for (int i = 0; i <= d_x; ++i) {
    const int mult_x = i == 0 ? 2 : 1;
    for (int j = 0; j <= d_y; ++j) {
      const int mult_y = j == 0 ? 2 : 1;
      const double single_x = scaled_tail(bundle.v_k, cls.k, far_x - i, mult_x);
      const double single_y = scaled_tail(bundle.v_l, cls.l, far_y - j, mult_y);
      double cross = 0.0;
      if (bundle.v_kl != 0.0) {
        const double tx_far = mult_x * axis_decay_tail(cls.k, far_x - i);
        const double tx_all = mult_x * axis_decay_tail(cls.k, near_x - i);
        const double ty_far = mult_y * axis_decay_tail(cls.l, far_y - j);
        const double ty_all = mult_y * axis_decay_tail(cls.l, near_y - j);
        cross = bundle.v_kl * (tx_far * ty_all + tx_all * ty_far);
      }
      worst = std::max(worst, scale * (single_x + single_y + cross));
    }
  }
  return worst;
}

int default_k_max(SmoothnessClass cls, const VariationBundle& bundle, int d_x, int d_y, int n_x, int n_y) {
  constexpr double kTarget = 1e-3 * 1e-12;
  for (int k_max = 1; k_max <= kMaxFolds; ++k_max) {
    const int first_x = 2 * (k_max + 1) * n_x - d_x;
    const int first_y = 2 * (k_max + 1) * n_y - d_y;
    if (first_x <= cls.k || first_y <= cls.l) continue;
    const double bx = coeff_bound_directional(cls.k, bundle.v_k, first_x, Axis::x);
    const double by = coeff_bound_directional(cls.l, bundle.v_l, first_y, Axis::y);
    if (std::max(bx, by) < kTarget) return k_max;
  }
  return kMaxFolds;
}

AliasResidual alias_residual(const TargetFunction& f, int d_x, int d_y, int n_x, int n_y, int k_max,
                             int oversample) {
  require_folds(k_max);
  require_resolvable(d_x, n_x, "x");
  require_resolvable(d_y, n_y, "y");
  const CoeffMatrix quad = compute_coeffs_quadrature(f, ChebGrid::make(n_x, n_y), d_x, d_y);
  const CoeffMatrix exact = exact_coeffs_oracle(f, alias_required_degree(d_x, n_x, k_max),
                                                alias_required_degree(d_y, n_y, k_max), oversample);
  AliasResidual r{n_x, n_y, d_x, d_y, k_max, oversample, 0.0, 0, 0};
  for (int i = 0; i <= d_x; ++i) {
    for (int j = 0; j <= d_y; ++j) {
      const double diff = std::abs(reconstruct_quadrature_coeff(exact, i, j, n_x, n_y, k_max) - quad(i, j));
      if (diff > r.max_residual) {
        r.max_residual = diff;
        r.argmax_i = i;
        r.argmax_j = j;
      }
    }
  }
  return r;
}

nlohmann::ordered_json to_json(const AliasResidual& r, std::optional<double> predicted_tail_bound) {
  nlohmann::ordered_json j;
  j["n_x"] = r.n_x;
  j["n_y"] = r.n_y;
  j["d_x"] = r.d_x;
  j["d_y"] = r.d_y;
  j["k_max"] = r.k_max;
  j["max_residual"] = r.max_residual;
  j["argmax"] = {r.argmax_i, r.argmax_j};
  if (predicted_tail_bound && std::isfinite(*predicted_tail_bound)) {
    j["predicted_tail_bound"] = *predicted_tail_bound;
  } else {
    j["predicted_tail_bound"] = nullptr;
  }
  return j;
}

}  // namespace cheb2d
