#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "qtc/constants.hpp"
#include "qtc/potential.hpp"
#include "qtc/wkb_phase.hpp"

using namespace qtc;
using Catch::Approx;

namespace {

// Finite-difference derivative of a member of SPrimeTerms along x.
template <typename Pick>
double fd(const Potential& pot, double energy, double x, Pick pick) {
  const double h = 1e-14;
  return (pick(s_prime_terms(pot, energy, x + h)) -
          pick(s_prime_terms(pot, energy, x - h))) /
         (2.0 * h);
}

}  // namespace

TEST_CASE("local momentum and its derivatives") {
  auto p = make_parabolic(1.0, -2e-9, 2e-9);
  const double e = 1e-19;

  SECTION("p matches the closed form") {
    for (double x : {-1.5e-9, 0.0, 0.8e-9}) {
      const auto lm = momentum_derivs(p, e, x);
      CHECK(lm.p == Approx(std::sqrt(2.0 * constants::m_e *
                                     (e - p.value(x)))).epsilon(1e-14));
    }
  }

  SECTION("p1..p3 match finite differences of p") {
    const double h = 1e-14;
    for (double x : {-1.2e-9, 0.5e-9, 1.6e-9}) {
      auto pm = [&](double xx) { return momentum_derivs(p, e, xx).p; };
      const double p1 = (pm(x + h) - pm(x - h)) / (2.0 * h);
      const double p2 = (pm(x + h) - 2.0 * pm(x) + pm(x - h)) / (h * h);
      const auto lm = momentum_derivs(p, e, x);
      CHECK(lm.p1 == Approx(p1).epsilon(1e-5));
      CHECK(lm.p2 == Approx(p2).epsilon(1e-3));
      auto pm1 = [&](double xx) { return momentum_derivs(p, e, xx).p1; };
      const double p3 =
          (pm1(x + h) - 2.0 * pm1(x) + pm1(x - h)) / (h * h);
      CHECK(lm.p3 == Approx(p3).epsilon(1e-3));
    }
  }

  SECTION("turning point guard") {
    CHECK_THROWS_AS(momentum_derivs(p, -1e-19, 0.0), turning_point_error);
  }
}

TEST_CASE("S' expansion terms satisfy the eikonal recursion") {
  // Order-by-order consequences of (S')^2 - i hbar S'' = p^2:
  //   O(h):   2 s0 s1 = s0'
  //   O(h^2): 2 s0 s2 - s1^2 + s1' = 0
  //   O(h^3): 2 s0 s3 + 2 s1 s2 - s2' = 0
  auto par = make_parabolic(1.0, -2e-9, 2e-9);
  auto sech = make_sech2(1e-18, 1e-9, -2e-9, 2e-9);
  const double e = 1e-19;
  for (const auto& pot : {par, sech}) {
    for (double x : {-1.3e-9, -0.2e-9, 0.9e-9, 1.8e-9}) {
      const auto t = s_prime_terms(pot, e, x);
      const double s0p = fd(pot, e, x, [](const SPrimeTerms& u) { return u.s0; });
      const double s1p = fd(pot, e, x, [](const SPrimeTerms& u) { return u.s1; });
      const double s2p = fd(pot, e, x, [](const SPrimeTerms& u) { return u.s2; });
      CHECK(2.0 * t.s0 * t.s1 == Approx(s0p).epsilon(1e-5));
      CHECK(2.0 * t.s0 * t.s2 - t.s1 * t.s1 ==
            Approx(-s1p).epsilon(1e-4));
      CHECK(2.0 * t.s0 * t.s3 + 2.0 * t.s1 * t.s2 ==
            Approx(s2p).epsilon(1e-4));
    }
  }
}

TEST_CASE("composite incident/reflected actions") {
  WkbPhase ph;
  ph.S0 = 2.0;
  ph.S1 = 3.0;
  ph.S2 = 5.0;
  ph.S3 = 7.0;
  const double h = constants::hbar;
  const auto si = ph.incident();
  const auto sr = ph.reflected();
  CHECK(si.real() == Approx(2.0 + h * h * 5.0));
  CHECK(si.imag() == Approx(h * (3.0 + h * h * 7.0)));
  // odd orders flip sign, even orders (the imaginary part) are shared
  CHECK(sr.real() == Approx(-si.real()));
  CHECK(sr.imag() == Approx(si.imag()));

  SECTION("first-order truncation drops S2/S3 only") {
    ph.d = {11.0, 13.0, 17.0, 19.0};
    const auto t = ph.truncated_first_order();
    CHECK(t.S0 == ph.S0);
    CHECK(t.S1 == ph.S1);
    CHECK(t.S2 == 0.0);
    CHECK(t.S3 == 0.0);
    CHECK(t.d.s0 == 11.0);
    CHECK(t.d.s1 == 13.0);
    CHECK(t.d.s2 == 0.0);
    CHECK(t.d.s3 == 0.0);
    CHECK(t.incident_deriv().real() == Approx(11.0));
    CHECK(t.incident_deriv().imag() == Approx(h * 13.0));
  }
}

TEST_CASE("phase integration") {
  SECTION("constant potential accumulates S0 = p dx only") {
    auto c = make_constant(-1e-19, -1e-9, 1e-9);
    const double e = 1e-19;
    const double pconst =
        std::sqrt(2.0 * constants::m_e * (e - (-1e-19)));
    const auto ph = integrate_phase(c, e, -1e-9, 1e-9);
    CHECK(ph.S0 == Approx(pconst * 2e-9).epsilon(1e-12));
    // flat potential: every derivative term vanishes identically
    CHECK(ph.S1 == 0.0);
    CHECK(ph.S2 == 0.0);
    CHECK(ph.S3 == 0.0);
  }

  SECTION("additivity over subintervals") {
    auto p = make_parabolic(1.0, -2e-9, 2e-9);
    const double e = 1e-19;
    const auto whole = integrate_phase(p, e, -2e-9, 2e-9);
    const auto left = integrate_phase(p, e, -2e-9, 0.3e-9);
    const auto right = integrate_phase(p, e, 0.3e-9, 2e-9);
    CHECK(whole.S0 == Approx(left.S0 + right.S0).epsilon(1e-9));
    // the odd-parity terms (S1, S3) cancel between the halves of the
    // symmetric barrier, so compare on the scale of the pieces
    CHECK(whole.S1 == Approx(left.S1 + right.S1)
                          .margin(1e-10 * std::fabs(left.S1) + 1e-30));
    CHECK(whole.S2 == Approx(left.S2 + right.S2).epsilon(1e-8));
    CHECK(whole.S3 ==
          Approx(left.S3 + right.S3).margin(1e-10 * std::fabs(left.S3)));
  }

  SECTION("zero-width interval carries only the local derivative data") {
    auto p = make_parabolic(1.0, -2e-9, 2e-9);
    const auto ph = integrate_phase(p, 1e-19, 0.5e-9, 0.5e-9);
    CHECK(ph.S0 == 0.0);
    CHECK(ph.d.s0 == Approx(s_prime_terms(p, 1e-19, 0.5e-9).s0));
  }
}
