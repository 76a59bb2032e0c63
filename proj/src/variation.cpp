#include "cheb2d/variation.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cheb2d/errors.hpp"
#include "cheb2d/parallel.hpp"

namespace cheb2d {

namespace {

constexpr int kMaxDifferenceOrder = 4;

struct Stencil1D {
  std::vector<double> offsets;
  std::vector<double> weights;
  double half_span = 0.0;
};

// q-th central difference: h^{-q} sum_m (-1)^{q-m} C(q,m) g(t + (m - q/2) h).
Stencil1D central_stencil(int order, double h) {
  Stencil1D st;
  double binom = 1.0;
  const double scale = std::pow(h, -order);
  for (int m = 0; m <= order; ++m) {
    if (m > 0) binom = binom * (order - m + 1) / m;
    const double sign = (order - m) % 2 == 0 ? 1.0 : -1.0;
    st.offsets.push_back((m - 0.5 * order) * h);
    st.weights.push_back(sign * binom * scale);
  }
  st.half_span = 0.5 * order * h;
  return st;
}

double shift_inside(double t, double half_span) {
  return std::clamp(t, -1.0 + half_span, 1.0 - half_span);
}

TargetFunction difference_operator(TargetFunction f, int order_x, int order_y, double h) {
  Stencil1D sx = central_stencil(order_x, h);
  Stencil1D sy = central_stencil(order_y, h);
  return [f = std::move(f), sx = std::move(sx), sy = std::move(sy)](double x, double y) {
    const double cx = shift_inside(x, sx.half_span);
    const double cy = shift_inside(y, sy.half_span);
    double acc = 0.0;
    for (std::size_t a = 0; a < sx.offsets.size(); ++a) {
      double row = 0.0;
      for (std::size_t b = 0; b < sy.offsets.size(); ++b) row += sy.weights[b] * f(cx + sx.offsets[a], cy + sy.offsets[b]);
      acc += sx.weights[a] * row;
    }
    return acc;
  };
}

void require_difference_orders(int order_x, int order_y) {
  if (order_x < 0 || order_y < 0) throw ArgumentError("difference orders must be nonnegative");
  if (order_x + order_y > kMaxDifferenceOrder) {
    throw ArgumentError("finite differences are limited to total order " + std::to_string(kMaxDifferenceOrder) +
                        " (requested " + std::to_string(order_x + order_y) + "); supply an analytic partial");
  }
}

double weighted_abs_sum(const MixedPartialSpec& spec, int n) {
  if (n < 32) throw ArgumentError("variation quadrature requires n >= 32, got " + std::to_string(n));
  if (!spec.eval) throw ArgumentError("mixed partial has no evaluator");
  const MixedPartialSpec resolved = spec.at_resolution(n);
  const auto nodes = chebyshev_nodes(n);
  const auto nn = static_cast<std::size_t>(n);
  std::vector<double> row_sums(nn);
  parallel_for(nn, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < nn; ++b) {
      const double v = resolved.eval(nodes[a], nodes[b]);
      if (!std::isfinite(v)) throw EvaluationError("non-finite partial derivative value", nodes[a], nodes[b]);
      acc += std::abs(v);
    }
    row_sums[a] = acc;
  });
  double total = 0.0;
  for (double s : row_sums) total += s;
  const double step = std::numbers::pi / static_cast<double>(n);
  return step * step * total;
}

VariationEstimate checked(const MixedPartialSpec& spec, int n) {
  VariationEstimate est;
  est.n_used = n;
  est.value = weighted_abs_sum(spec, n);
  est.refined = weighted_abs_sum(spec, 2 * n);
  const double change = std::abs(est.refined - est.value);
  est.converged = change <= kVariationConvergenceTolerance * std::max(est.value, est.refined);
  return est;
}

void require_axis_order(const MixedPartialSpec& spec, Axis axis) {
  const bool ok = axis == Axis::x ? (spec.order_x >= 1 && spec.order_y == 0)
                                  : (spec.order_y >= 1 && spec.order_x == 0);
  if (!ok) {
    throw ArgumentError("directional variation along " + to_string(axis) + " needs a pure " + to_string(axis) +
                        "-partial, got order (" + std::to_string(spec.order_x) + ", " +
                        std::to_string(spec.order_y) + ")");
  }
}

}  // namespace

std::string to_string(PartialSource source) {
  switch (source) {
    case PartialSource::analytic:
      return "analytic";
    case PartialSource::finite_difference:
      return "finite_difference";
    case PartialSource::grid_scaled_difference:
      return "grid_scaled_difference";
  }
  return "unknown";
}

MixedPartialSpec MixedPartialSpec::analytic(int order_x, int order_y, TargetFunction eval) {
  MixedPartialSpec spec;
  spec.order_x = order_x;
  spec.order_y = order_y;
  spec.eval = std::move(eval);
  return spec;
}

MixedPartialSpec MixedPartialSpec::at_resolution(int n) const {
  return refine ? refine(n) : *this;
}

std::string MixedPartialSpec::source_tag() const {
  if (source == PartialSource::finite_difference) return "finite_difference(" + format_real(h) + ")";
  return to_string(source);
}

MixedPartialSpec finite_difference_partial(TargetFunction f, int order_x, int order_y, double h) {
  require_difference_orders(order_x, order_y);
  if (!(h >= 1e-6 && h <= 1e-2)) throw ArgumentError("difference step must lie in [1e-6, 1e-2], got " + format_real(h));
  MixedPartialSpec spec;
  spec.order_x = order_x;
  spec.order_y = order_y;
  spec.eval = difference_operator(std::move(f), order_x, order_y, h);
  spec.source = PartialSource::finite_difference;
  spec.h = h;
  return spec;
}

double grid_scaled_step(int n) { return 4.0 / static_cast<double>(n); }

MixedPartialSpec grid_scaled_difference(TargetFunction base, int base_order_x, int base_order_y, int extra_x,
                                        int extra_y) {
  require_difference_orders(extra_x, extra_y);
  auto build = [=](int n) {
    MixedPartialSpec spec;
    spec.order_x = base_order_x + extra_x;
    spec.order_y = base_order_y + extra_y;
    spec.h = grid_scaled_step(n);
    spec.eval = difference_operator(base, extra_x, extra_y, spec.h);
    spec.source = PartialSource::grid_scaled_difference;
    return spec;
  };
  MixedPartialSpec spec = build(256);
  spec.refine = build;
  return spec;
}

double vitali_variation(const MixedPartialSpec& spec, int n) { return weighted_abs_sum(spec, n); }

double directional_variation(const MixedPartialSpec& spec, int n, Axis axis) {
  require_axis_order(spec, axis);
  return weighted_abs_sum(spec, n);
}

VariationEstimate vitali_variation_checked(const MixedPartialSpec& spec, int n) { return checked(spec, n); }

VariationEstimate directional_variation_checked(const MixedPartialSpec& spec, int n, Axis axis) {
  require_axis_order(spec, axis);
  return checked(spec, n);
}

VariationBundleEstimate estimate_variation_bundle(const MixedPartialSpec& mixed, const MixedPartialSpec& along_x,
                                                  const MixedPartialSpec& along_y, int n) {
  VariationBundleEstimate out;
  out.mixed = vitali_variation_checked(mixed, n);
  out.along_x = directional_variation_checked(along_x, n, Axis::x);
  out.along_y = directional_variation_checked(along_y, n, Axis::y);
  out.bundle = {out.mixed.value, out.along_x.value, out.along_y.value};
  return out;
}

}  // namespace cheb2d
