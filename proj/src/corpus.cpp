#include "cheb2d/corpus.hpp"

#include <cmath>
#include <numbers>

#include "cheb2d/errors.hpp"

namespace cheb2d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kPolynomialOrderCap = 64;

double sgn(double t) { return (t > 0.0) - (t < 0.0); }

double chebyshev_weight(double t) { return 1.0 / std::sqrt(1.0 - t * t); }

UnivariateFactor constant_one() {
  return {[](int q, double) { return q == 0 ? 1.0 : 0.0; }, kPolynomialOrderCap};
}

UnivariateFactor linear() {
  return {[](int q, double t) { return q == 0 ? t : (q == 1 ? 1.0 : 0.0); }, kPolynomialOrderCap};
}

UnivariateFactor cheb_t2() {
  return {[](int q, double t) {
            switch (q) {
              case 0: return 2.0 * t * t - 1.0;
              case 1: return 4.0 * t;
              case 2: return 4.0;
              default: return 0.0;
            }
          },
          kPolynomialOrderCap};
}

UnivariateFactor cheb_t3() {
  return {[](int q, double t) {
            switch (q) {
              case 0: return 4.0 * t * t * t - 3.0 * t;
              case 1: return 12.0 * t * t - 3.0;
              case 2: return 24.0 * t;
              case 3: return 24.0;
              default: return 0.0;
            }
          },
          kPolynomialOrderCap};
}

// |t - a|; the second derivative is a point mass.
UnivariateFactor shifted_abs(double a) {
  return {[a](int q, double t) { return q == 0 ? std::abs(t - a) : sgn(t - a); }, 1};
}

// |t|^3 with derivatives 3t|t|, 6|t|, 6 sgn(t).
UnivariateFactor abs_cubed() {
  return {[](int q, double t) {
            switch (q) {
              case 0: return std::abs(t) * t * t;
              case 1: return 3.0 * t * std::abs(t);
              case 2: return 6.0 * std::abs(t);
              default: return 6.0 * sgn(t);
            }
          },
          3};
}

CorpusEntry separable(std::string name, std::string formula, UnivariateFactor gx, UnivariateFactor gy) {
  CorpusEntry e;
  e.name = std::move(name);
  e.formula = std::move(formula);
  e.max_analytic_x = gx.max_order;
  e.max_analytic_y = gy.max_order;
  e.f = [gx = gx.derivative, gy = gy.derivative](double x, double y) { return gx(0, x) * gy(0, y); };
  e.analytic_partial = [gx, gy](int ox, int oy) -> std::optional<MixedPartialSpec> {
    if (ox < 0 || oy < 0 || ox > gx.max_order || oy > gy.max_order) return std::nullopt;
    return MixedPartialSpec::analytic(
        ox, oy, [dx = gx.derivative, dy = gy.derivative, ox, oy](double x, double y) { return dx(ox, x) * dy(oy, y); });
  };
  return e;
}

VariationBundle uniform_bundle(double v) { return {v, v, v}; }

std::vector<CorpusEntry> make_corpus() {
  std::vector<CorpusEntry> corpus;

  {
    CorpusEntry e = separable("const_one", "1", constant_one(), constant_one());
    e.cls = {0, 0};
    e.analytic_variations = uniform_bundle(0.0);
    e.certificates = {{{0, 0}, uniform_bundle(0.0)}, {{1, 1}, uniform_bundle(0.0)}};
    e.polynomial_degree = std::pair{0, 0};
    e.notes = "Constant; every partial of positive order vanishes, so it belongs to every class with zero variation.";
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e = separable("bilinear", "x*y", linear(), linear());
    e.cls = {0, 0};
    e.analytic_variations = VariationBundle{kPi * kPi, 2.0 * kPi, 2.0 * kPi};
    e.certificates = {{{0, 0}, *e.analytic_variations}, {{1, 1}, uniform_bundle(0.0)}};
    e.polynomial_degree = std::pair{1, 1};
    e.notes = "f_xy = 1, f_x = y, f_y = x.";
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e = separable("tensor_cheb", "(2*x^2 - 1)*(4*y^3 - 3*y)", cheb_t2(), cheb_t3());
    e.cls = {2, 3};
    e.analytic_variations = uniform_bundle(0.0);
    e.certificates = {{{2, 3}, uniform_bundle(0.0)}};
    e.polynomial_degree = std::pair{2, 3};
    e.notes = "T_2(x) T_3(y); its only nonzero raw coefficient is c_{2,3} = 1.";
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e = separable("abs_xy", "abs(x)*abs(y)", shifted_abs(0.0), shifted_abs(0.0));
    e.cls = {0, 0};
    e.analytic_variations = VariationBundle{kPi * kPi, 2.0 * kPi, 2.0 * kPi};
    // f_{x^2 y^2} = 4 delta(x) delta(y) and f_{xx} = 2 delta(x) |y| as measures.
    e.certificates = {{{0, 0}, *e.analytic_variations},
                      {{1, 1}, uniform_bundle(4.0), CertificateSource::stieltjes}};
    e.notes = "Kinks along both axes; f_xy = sgn(x) sgn(y) has a jump at the origin lines.";
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e = separable("abs_cubed", "abs(x)^3*abs(y)^3", abs_cubed(), abs_cubed());
    e.cls = {2, 2};
    // f_{x^3 y^3} = 36 sgn(x) sgn(y); f_{x^3} = 6 sgn(x) |y|^3 with
    // int_0^pi |cos|^3 = 4/3.
    e.analytic_variations = VariationBundle{36.0 * kPi * kPi, 8.0 * kPi, 8.0 * kPi};
    e.certificates = {{{2, 2}, *e.analytic_variations}};
    e.notes = "Third partials jump across the axes; coefficients decay like i^-4 j^-4.";
    corpus.push_back(std::move(e));
  }
  {
    constexpr double ax = 0.3;
    constexpr double ay = -0.2;
    CorpusEntry e = separable("shifted_kink", "abs(x - 0.3)*abs(y + 0.2)", shifted_abs(ax), shifted_abs(ay));
    e.cls = {0, 0};
    const double jx = abs_shifted_cosine_integral(ax);
    const double jy = abs_shifted_cosine_integral(ay);
    e.analytic_variations = VariationBundle{kPi * kPi, kPi * jy, kPi * jx};
    const double wx = chebyshev_weight(ax);
    const double wy = chebyshev_weight(ay);
    e.certificates = {{{0, 0}, *e.analytic_variations},
                      {{1, 1}, VariationBundle{4.0 * wx * wy, 2.0 * wx * jy, 2.0 * wy * jx},
                       CertificateSource::stieltjes}};
    e.notes = "Kinks at x = 0.3 and y = -0.2, off the grid symmetry axes.";
    corpus.push_back(std::move(e));
  }
  {
    UnivariateFactor exp_factor{[](int, double t) { return std::exp(t); }, kPolynomialOrderCap};
    CorpusEntry e = separable("smooth_exp", "exp(x + y)", exp_factor, exp_factor);
    e.f = [](double x, double y) { return std::exp(x + y); };
    e.analytic_partial = [](int ox, int oy) -> std::optional<MixedPartialSpec> {
      if (ox < 0 || oy < 0) return std::nullopt;
      return MixedPartialSpec::analytic(ox, oy, [](double x, double y) { return std::exp(x + y); });
    };
    e.cls = {2, 2};
    // Every partial is exp(x + y); int_0^pi exp(cos t) dt = pi I_0(1).
    const double v = std::pow(kPi * std::cyl_bessel_i(0.0, 1.0), 2);
    e.analytic_variations = uniform_bundle(v);
    for (int k = 0; k <= 4; ++k) {
      for (int l = 0; l <= 4; ++l) {
        SmoothnessClass c{k, l};
        if (c == e.cls) {
          e.certificates.insert(e.certificates.begin(), {c, uniform_bundle(v)});
        } else {
          e.certificates.push_back({c, uniform_bundle(v)});
        }
      }
    }
    e.notes = "Entire; every mixed partial equals f.";
    corpus.push_back(std::move(e));
  }
  {
    CorpusEntry e;
    e.name = "runge";
    e.formula = "1/(1 + 25*x^2 + 25*y^2)";
    e.f = [](double x, double y) { return 1.0 / (1.0 + 25.0 * x * x + 25.0 * y * y); };
    e.analytic_partial = [](int ox, int oy) -> std::optional<MixedPartialSpec> {
      auto u = [](double x, double y) { return 1.0 + 25.0 * x * x + 25.0 * y * y; };
      if (ox == 0 && oy == 0) {
        return MixedPartialSpec::analytic(0, 0, [u](double x, double y) { return 1.0 / u(x, y); });
      }
      if (ox == 1 && oy == 0) {
        return MixedPartialSpec::analytic(1, 0, [u](double x, double y) { return -50.0 * x / std::pow(u(x, y), 2); });
      }
      if (ox == 0 && oy == 1) {
        return MixedPartialSpec::analytic(0, 1, [u](double x, double y) { return -50.0 * y / std::pow(u(x, y), 2); });
      }
      if (ox == 1 && oy == 1) {
        return MixedPartialSpec::analytic(1, 1,
                                          [u](double x, double y) { return 5000.0 * x * y / std::pow(u(x, y), 3); });
      }
      return std::nullopt;
    };
    e.max_analytic_x = 1;
    e.max_analytic_y = 1;
    e.cls = {0, 0};
    e.notes = "Smooth on the square with complex poles at distance 1/5; variations come from quadrature.";
    corpus.push_back(std::move(e));
  }
  return corpus;
}

nlohmann::ordered_json bundle_json(const VariationBundle& b) {
  return {{"v_kl", b.v_kl}, {"v_k", b.v_k}, {"v_l", b.v_l}};
}

}  // namespace

std::string to_string(CertificateSource source) {
  return source == CertificateSource::analytic ? "analytic" : "stieltjes";
}

double abs_shifted_cosine_integral(double a) {
  if (!(std::abs(a) <= 1.0)) throw ArgumentError("abs_shifted_cosine_integral needs |a| <= 1");
  const double theta = std::acos(a);
  return 2.0 * std::sin(theta) - 2.0 * a * theta + a * kPi;
}

MixedPartialSpec CorpusEntry::partial(int order_x, int order_y) const {
  if (order_x < 0 || order_y < 0) throw ArgumentError("partial orders must be nonnegative");
  if (auto spec = analytic_partial(order_x, order_y)) return *spec;
  const int base_x = std::min(order_x, max_analytic_x);
  const int base_y = std::min(order_y, max_analytic_y);
  auto base = analytic_partial(base_x, base_y);
  if (!base) {
    throw ArgumentError("corpus entry '" + name + "' has no analytic partial of order (" + std::to_string(base_x) +
                        ", " + std::to_string(base_y) + ")");
  }
  return grid_scaled_difference(base->eval, base_x, base_y, order_x - base_x, order_y - base_y);
}

const VariationCertificate* CorpusEntry::certificate_for(SmoothnessClass c) const {
  for (const auto& cert : certificates)
    if (cert.cls == c) return &cert;
  return nullptr;
}

const VariationCertificate* CorpusEntry::tail_certificate() const {
  for (const auto& cert : certificates)
    if (cert.cls.k >= 1 && cert.cls.l >= 1) return &cert;
  return nullptr;
}

const std::vector<CorpusEntry>& builtin_corpus() {
  static const std::vector<CorpusEntry> corpus = make_corpus();
  return corpus;
}

const CorpusEntry* find_corpus_entry(const std::string& name) {
  for (const auto& e : builtin_corpus())
    if (e.name == name) return &e;
  return nullptr;
}

nlohmann::ordered_json to_json(const CorpusEntry& e) {
  nlohmann::ordered_json j;
  j["name"] = e.name;
  j["formula"] = e.formula;
  j["class"] = {{"k", e.cls.k}, {"l", e.cls.l}};
  j["analytic_variations"] = e.analytic_variations ? bundle_json(*e.analytic_variations) : nlohmann::ordered_json();
  auto certs = nlohmann::ordered_json::array();
  for (const auto& c : e.certificates) {
    certs.push_back({{"class", {{"k", c.cls.k}, {"l", c.cls.l}}},
                     {"variations", bundle_json(c.bundle)},
                     {"source", to_string(c.source)}});
  }
  j["certificates"] = certs;
  if (e.polynomial_degree) {
    j["polynomial_degree"] = {e.polynomial_degree->first, e.polynomial_degree->second};
  } else {
    j["polynomial_degree"] = nullptr;
  }
  j["analytic_partial_orders"] = {e.max_analytic_x, e.max_analytic_y};
  j["notes"] = e.notes;
  return j;
}

}  // namespace cheb2d
