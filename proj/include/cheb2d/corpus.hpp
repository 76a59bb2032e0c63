#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "cheb2d/cheb_core.hpp"
#include "cheb2d/decay_bounds.hpp"
#include "cheb2d/variation.hpp"

namespace cheb2d {

enum class CertificateSource {
  analytic,   // closed-form integral of a function-valued partial
  stieltjes,  // the partial is a measure (jumps of a lower partial)
};

std::string to_string(CertificateSource source);

/// Known variation values for one smoothness class.
struct VariationCertificate {
  SmoothnessClass cls;
  VariationBundle bundle;
  CertificateSource source = CertificateSource::analytic;
};

/// Univariate factor g(t) of a separable target f(x, y) = g_x(x) g_y(y).
/// derivative(q, t) is valid for q <= max_order; above it the derivative is
/// not a function (or is not provided).
struct UnivariateFactor {
  std::function<double(int order, double t)> derivative;
  int max_order = 0;
};

/// A test function with its partials and smoothness metadata.
struct CorpusEntry {
  std::string name;
  std::string formula;
  TargetFunction f;
  SmoothnessClass cls;
  /// Analytic variations for `cls`, when known in closed form.
  std::optional<VariationBundle> analytic_variations;
  /// Certificates for `cls` and any other class the entry provably belongs
  /// to. The first certificate with k, l >= 1 (if any) is used for fold tail
  /// bounds.
  std::vector<VariationCertificate> certificates;
  /// Max degree per axis when f is a tensor polynomial.
  std::optional<std::pair<int, int>> polynomial_degree;
  std::string notes;

  /// Analytic mixed partial of the given order, if the entry provides one.
  std::function<std::optional<MixedPartialSpec>(int order_x, int order_y)> analytic_partial;
  /// Highest analytic partial orders along each axis; requests beyond them
  /// are differenced from the highest available analytic partial.
  int max_analytic_x = 0;
  int max_analytic_y = 0;

  /// Analytic partial when available, otherwise a grid-scaled difference of
  /// the highest analytic partial. Throws ArgumentError when the extra
  /// difference order exceeds the finite-difference cap.
  MixedPartialSpec partial(int order_x, int order_y) const;

  const VariationCertificate* certificate_for(SmoothnessClass c) const;
  const VariationCertificate* tail_certificate() const;
};

/// The shipped corpus: const_one, bilinear, tensor_cheb, abs_xy, abs_cubed,
/// shifted_kink, smooth_exp, runge.
const std::vector<CorpusEntry>& builtin_corpus();

/// Looks up an entry by name; nullptr when absent.
const CorpusEntry* find_corpus_entry(const std::string& name);

nlohmann::ordered_json to_json(const CorpusEntry& e);

/// Integral over [0, pi] of |cos(theta) - a| for |a| <= 1.
double abs_shifted_cosine_integral(double a);

}  // namespace cheb2d
