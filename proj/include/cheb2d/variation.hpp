#pragma once

#include <functional>
#include <string>

#include "cheb2d/cheb_core.hpp"
#include "cheb2d/decay_bounds.hpp"

namespace cheb2d {

enum class PartialSource { analytic, finite_difference, grid_scaled_difference };

std::string to_string(PartialSource source);

/// A caller-supplied mixed partial d^{order_x+order_y} f / dx^order_x dy^order_y.
///
/// Grid-scaled differences carry a `refine` hook: the quadrature at
/// resolution n evaluates refine(n), whose difference step shrinks with the
/// node spacing. Integrable partials converge under that refinement while a
/// derivative that only exists as a measure (a jump differentiated once more)
/// grows without bound, which the doubling check in vitali_variation_checked
/// reports as non-convergence.
struct MixedPartialSpec {
  int order_x = 0;
  int order_y = 0;
  TargetFunction eval;
  PartialSource source = PartialSource::analytic;
  double h = 0.0;  // difference step; 0 for analytic partials
  std::function<MixedPartialSpec(int n)> refine;

  static MixedPartialSpec analytic(int order_x, int order_y, TargetFunction eval);

  /// The spec used by a quadrature with n nodes per axis.
  MixedPartialSpec at_resolution(int n) const;
  std::string source_tag() const;
};

/// Central differences of total order <= 4 with step h in [1e-6, 1e-2].
/// Stencils that would leave [-1,1]^2 are shifted inward (one-sided).
MixedPartialSpec finite_difference_partial(TargetFunction f, int order_x, int order_y, double h);

/// Differences `base` (itself a partial of orders (base_order_x,
/// base_order_y)) a further (extra_x, extra_y) times with a step tied to the
/// quadrature resolution.
MixedPartialSpec grid_scaled_difference(TargetFunction base, int base_order_x, int base_order_y,
                                        int extra_x, int extra_y);

/// Difference step used by grid_scaled_difference at n nodes per axis.
double grid_scaled_step(int n);

/// (pi^2/n^2) sum |g(x_lx, y_ly)| over the n x n Gauss-Chebyshev grid, the
/// theta-domain midpoint rule for the integral of |g| omega over [-1,1]^2.
/// Used for V_{k,l}[x,y] with g = f_{x^{k+1} y^{l+1}}. Requires n >= 32.
double vitali_variation(const MixedPartialSpec& spec, int n);

/// V_k[x] (axis x, spec of order (k+1, 0)) or V_l[y] (axis y, spec of
/// order (0, l+1)); the same weighted rule over the full square.
double directional_variation(const MixedPartialSpec& spec, int n, Axis axis);

struct VariationEstimate {
  double value = 0.0;    // at n nodes per axis
  double refined = 0.0;  // at 2n nodes per axis
  int n_used = 0;
  bool converged = false;
};

/// Evaluates at n and 2n; converged when the relative change is <= 1%.
VariationEstimate vitali_variation_checked(const MixedPartialSpec& spec, int n);
VariationEstimate directional_variation_checked(const MixedPartialSpec& spec, int n, Axis axis);

/// Relative change under doubling above which a variation integral is
/// flagged as non-convergent.
inline constexpr double kVariationConvergenceTolerance = 0.01;

struct VariationBundleEstimate {
  VariationBundle bundle;
  VariationEstimate mixed;
  VariationEstimate along_x;
  VariationEstimate along_y;

  bool converged() const noexcept { return mixed.converged && along_x.converged && along_y.converged; }
};

/// All three weighted variations of a smoothness class from the partials
/// f_{x^{k+1}y^{l+1}}, f_{x^{k+1}}, f_{y^{l+1}}.
VariationBundleEstimate estimate_variation_bundle(const MixedPartialSpec& mixed,
                                                  const MixedPartialSpec& along_x,
                                                  const MixedPartialSpec& along_y, int n);

}  // namespace cheb2d
