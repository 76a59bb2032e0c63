#include <doctest.h>

#include <cmath>

#include "../support/oracles.hpp"
#include "cheb2d/corpus.hpp"
#include "cheb2d/errors.hpp"
#include "cheb2d/variation.hpp"

using namespace cheb2d;

TEST_CASE("corpus contents") {
  for (const char* name :
       {"const_one", "bilinear", "tensor_cheb", "abs_xy", "abs_cubed", "shifted_kink", "smooth_exp", "runge"}) {
    INFO(name);
    CHECK(find_corpus_entry(name) != nullptr);
  }
  CHECK(find_corpus_entry("nope") == nullptr);
  const auto* cubed = find_corpus_entry("abs_cubed");
  CHECK(cubed->cls == SmoothnessClass{2, 2});
  CHECK(cubed->analytic_variations->v_kl == doctest::Approx(36.0 * oracle::pi * oracle::pi));
}

TEST_CASE("advertised partials") {
  CHECK(find_corpus_entry("abs_xy")->partial(1, 1).eval(0.5, -0.5) == -1.0);
  const auto p33 = find_corpus_entry("abs_cubed")->partial(3, 3);
  CHECK(p33.source == PartialSource::analytic);
  CHECK(std::abs(p33.eval(0.4, -0.7)) == 36.0);
  CHECK(find_corpus_entry("abs_xy")->partial(3, 3).source == PartialSource::grid_scaled_difference);
  CHECK_THROWS_AS(find_corpus_entry("abs_xy")->partial(6, 1), ArgumentError);
  CHECK(find_corpus_entry("smooth_exp")->partial(5, 4).eval(0.1, 0.2) == doctest::Approx(std::exp(0.3)));
}

TEST_CASE("analytic variations agree with quadrature") {
  for (const auto& e : builtin_corpus()) {
    if (!e.analytic_variations) continue;
    INFO(e.name);
    const auto est = estimate_variation_bundle(e.partial(e.cls.k + 1, e.cls.l + 1), e.partial(e.cls.k + 1, 0),
                                               e.partial(0, e.cls.l + 1), 256);
    const auto& v = *e.analytic_variations;
    auto close = [](double a, double b) { return std::abs(a - b) <= 5e-3 * std::max(std::abs(b), 1e-300) || a == b; };
    CHECK(close(est.bundle.v_kl, v.v_kl));
    CHECK(close(est.bundle.v_k, v.v_k));
    CHECK(close(est.bundle.v_l, v.v_l));
  }
}

TEST_CASE("bilinear variations") {
  const auto& v = *find_corpus_entry("bilinear")->analytic_variations;
  CHECK(v.v_kl == doctest::Approx(oracle::pi * oracle::pi));
  CHECK(v.v_k == doctest::Approx(2.0 * oracle::pi));
}

TEST_CASE("measure-valued certificates match the exact coefficient decay") {
  const auto* e = find_corpus_entry("abs_xy");
  const auto* cert = e->tail_certificate();
  REQUIRE(cert);
  CHECK(cert->source == CertificateSource::stieltjes);
  // c_{2,2} = 16/(9 pi^2) is attained by the (1,1) bound with V = 4.
  const auto c = exact_coeffs_oracle(e->f, 40, 40, 4);
  for (int i = 2; i <= 40; ++i) {
    for (int j = 2; j <= 40; ++j) {
      const double bound = 4.0 * cert->bundle.v_kl / (oracle::pi * oracle::pi) / ((i * i - 1.0) * (j * j - 1.0));
      CHECK(std::abs(c(i, j)) <= bound * (1 + 1e-9) + 1e-14);
    }
  }
  CHECK(std::abs(c(2, 2)) == doctest::Approx(4.0 * 4.0 / (oracle::pi * oracle::pi) / 9.0).epsilon(1e-4));
}

TEST_CASE("shifted cosine integral") {
  for (double a : {-0.9, -0.2, 0.0, 0.3, 1.0}) {
    std::vector<double> breaks{0.0};
    if (std::abs(a) < 1.0) breaks.push_back(std::acos(a));
    breaks.push_back(oracle::pi);
    const double ref = oracle::piecewise_simpson([a](double t) { return std::abs(std::cos(t) - a); }, breaks);
    CHECK(abs_shifted_cosine_integral(a) == doctest::Approx(ref).epsilon(1e-10));
  }
  CHECK_THROWS_AS(abs_shifted_cosine_integral(1.5), ArgumentError);
}

TEST_CASE("corpus json") {
  const auto j = to_json(*find_corpus_entry("runge"));
  CHECK(j["name"] == "runge");
  CHECK(j["analytic_variations"].is_null());
  CHECK(j["polynomial_degree"].is_null());
  CHECK(to_json(*find_corpus_entry("tensor_cheb"))["polynomial_degree"][1] == 3);
}
