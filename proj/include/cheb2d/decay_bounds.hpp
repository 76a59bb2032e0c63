#pragma once

#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "cheb2d/cheb_core.hpp"

namespace cheb2d {

enum class Axis { x, y };

std::string to_string(Axis axis);

/// Declares that the mixed partial f_{x^k y^l} has bounded Vitali variation.
/// The bounds depend on the parity split k = 2s or 2s+1, l = 2r or 2r+1.
struct SmoothnessClass {
  int k = 0;
  int l = 0;

  int s() const noexcept { return k / 2; }
  int r() const noexcept { return l / 2; }
  bool operator==(const SmoothnessClass&) const = default;
};

/// Weighted variation values: v_kl = V_{k,l}[x,y], v_k = V_k[x], v_l = V_l[y].
struct VariationBundle {
  double v_kl = 0.0;
  double v_k = 0.0;
  double v_l = 0.0;

  double v_star() const noexcept;
  /// Throws ArgumentError unless all three values are finite and >= 0.
  void validate() const;
};

/// Gamma_{alpha,beta}[p](eta) = 1 / prod_{n=-p}^{p+alpha} (eta + 2n + beta).
/// Every factor must be strictly positive.
double gamma_product(int alpha, int beta, int p, double eta);

/// Per-axis decay factor for smoothness order `order` at index idx:
/// Gamma_{0,0}[s](idx) for order = 2s, Gamma_{1,-1}[s](idx) for order = 2s+1.
double axis_decay_factor(int order, double idx);

/// Mixed-partial bound on |c_{i,j}|, valid for i >= k+1 and j >= l+1.
double coeff_bound(SmoothnessClass cls, double v_kl, int i, int j);

/// Single-axis bound on |c_{i,j}| (for every index of the other axis),
/// valid for idx >= order+1.
double coeff_bound_directional(int order, double v, int idx, Axis axis);

/// Pi_alpha[p](n*) = 1/prod_{m=-p}^{p-alpha}(n*+2m+alpha)
///                 + 1/prod_{m=-p}^{p-alpha}(n*+2m+alpha+1).
/// The empty-product case (p, alpha) = (0, 1) is rejected.
double pi_product(int alpha, int p, double nstar);

/// Closed-form majorant 2/(n* - 2p + alpha)^(2p - alpha + 1) of pi_product.
double pi_upper(int alpha, int p, double nstar);

/// Sum_{m >= first} axis_decay_factor(order, m) for order >= 1, in closed
/// form via telescoping: pi_product(alpha, s, first-1) / (2 order) where
/// alpha = 1 for even order and 0 for odd order. Infinite for order = 0.
double axis_decay_tail(int order, int first);

/// L1 bound on f - C_{d_x,d_y}[f] from the exact-coefficient tail.
double l1_bound_exact_partial(SmoothnessClass cls, double v_kl, int d_x, int d_y);

/// The tail of mixed-partial coefficient bounds, Sum_{i>d_x} Sum_{j>d_y}
/// coeff_bound(i, j). Equals l1_bound_exact_partial / 4.
double coeff_bound_tail_sum(SmoothnessClass cls, double v_kl, int d_x, int d_y);

/// L1 bound on f - C~_{d_x,d_y}[f] for the quadrature partial sum.
double l1_bound_quadrature_partial(SmoothnessClass cls, const VariationBundle& bundle, int d_x,
                                   int d_y, int n_x, int n_y);

enum class BoundKind { mixed, directional_x, directional_y };

std::string to_string(BoundKind kind);

/// Best available certificate for a single coefficient index.
struct IndexBound {
  double value = std::numeric_limits<double>::infinity();  // inf: no bound applies
  BoundKind kind = BoundKind::mixed;

  bool available() const noexcept { return value != std::numeric_limits<double>::infinity(); }
};

/// Smallest of the mixed and directional bounds applicable at (i, j).
IndexBound best_bound(SmoothnessClass cls, const VariationBundle& bundle, int i, int j);

struct BoundViolation {
  int i;
  int j;
  double abs_c;
  double bound;
  BoundKind kind;
};

struct AuditTolerance {
  double relative = 1e-9;
  /// Floor below which coefficients are treated as zero. Needed when a
  /// bound is exactly zero (polynomial targets).
  double absolute = 1e-14;
};

struct BoundReport {
  SmoothnessClass cls;
  VariationBundle bundle;
  int i_max = 0;
  int j_max = 0;
  /// Row-major (i_max+1) x (j_max+1) grid of best_bound values (inf where
  /// no bound applies).
  std::vector<double> bounds;
  std::vector<BoundViolation> violations;
  double max_ratio = 0.0;
  int argmax_i = -1;
  int argmax_j = -1;

  double bound_at(int i, int j) const {
    return bounds[static_cast<std::size_t>(i) * static_cast<std::size_t>(j_max + 1) +
                  static_cast<std::size_t>(j)];
  }
  bool certified() const noexcept { return violations.empty(); }
};

/// Checks every stored coefficient against each applicable bound.
BoundReport audit_decay(const CoeffMatrix& c, SmoothnessClass cls, const VariationBundle& bundle,
                        AuditTolerance tol = {});

nlohmann::ordered_json to_json(const BoundReport& report);

/// `i,j,bound,abs_c,ratio` rows for indices where a bound applies.
std::string bound_grid_csv(const BoundReport& report, const CoeffMatrix& c);

}  // namespace cheb2d
