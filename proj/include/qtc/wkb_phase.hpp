#pragma once

#include <cmath>
#include <complex>

#include "qtc/constants.hpp"
#include "qtc/errors.hpp"
#include "qtc/potential.hpp"
#include "qtc/quadrature.hpp"

namespace qtc {

/// Local classical momentum p(x) = sqrt(2m(E - V(x))) and its first three
/// spatial derivatives. Only defined where the point is classically allowed.
struct LocalMomentum {
  double p = 0.0;   // kg m/s
  double p1 = 0.0;  // dp/dx
  double p2 = 0.0;  // d2p/dx2
  double p3 = 0.0;  // d3p/dx3
};

namespace wkb {
// Guard against evaluating the expansion on top of a turning point.
inline constexpr double turning_point_guard = 1e-25;  // J
}  // namespace wkb

inline LocalMomentum momentum_derivs(const Potential& pot, double energy,
                                     double x) {
  const double gap = energy - pot.value(x);
  if (!(gap > wkb::turning_point_guard))
    throw turning_point_error("classical turning point at boundary");
  const double m = constants::m_e;
  const double v1 = pot.deriv(x, 1);
  const double v2 = pot.deriv(x, 2);
  const double v3 = pot.deriv(x, 3);
  LocalMomentum lm;
  lm.p = std::sqrt(2.0 * m * gap);
  const double p = lm.p;
  lm.p1 = -m * v1 / p;
  lm.p2 = -m * v2 / p - m * m * v1 * v1 / (p * p * p);
  lm.p3 = -m * v3 / p - 3.0 * m * m * v1 * v2 / (p * p * p) -
          3.0 * m * m * m * v1 * v1 * v1 / std::pow(p, 5);
  return lm;
}

/// The four WKB expansion terms S'_0..S'_3 (+branch for S'_0, S'_2).
/// s1 and s3 are the real coefficients multiplying i in S'_1 and S'_3.
struct SPrimeTerms {
  double s0 = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
};

inline SPrimeTerms from_momentum(const LocalMomentum& lm) {
  const double p = lm.p, p1 = lm.p1, p2 = lm.p2, p3 = lm.p3;
  SPrimeTerms t;
  t.s0 = p;
  t.s1 = 0.5 * p1 / p;
  t.s2 = -p2 / (4.0 * p * p) + 3.0 * p1 * p1 / (8.0 * p * p * p);
  t.s3 = -p3 / (8.0 * p * p * p) + 3.0 * p1 * p2 / (4.0 * std::pow(p, 4)) -
         3.0 * p1 * p1 * p1 / (4.0 * std::pow(p, 5));
  return t;
}

inline SPrimeTerms s_prime_terms(const Potential& pot, double energy,
                                 double x) {
  return from_momentum(momentum_derivs(pot, energy, x));
}

/// Accumulated WKB phase terms S_0..S_3 at a point (relative to a reference
/// point where all vanish) together with the local S'_n terms. S1 and S3 are
/// stored as the real coefficients multiplying i.
///
/// The composite incident/reflected actions are
///   S_i = +S0 + hbar (i S1) + hbar^2 S2 + hbar^3 (i S3)
///   S_r = -S0 + hbar (i S1) - hbar^2 S2 + hbar^3 (i S3)
struct WkbPhase {
  double S0 = 0.0, S1 = 0.0, S2 = 0.0, S3 = 0.0;
  SPrimeTerms d{};  // S'_n at the evaluation point

  std::complex<double> incident() const {
    const double h = constants::hbar;
    return {S0 + h * h * S2, h * (S1 + h * h * S3)};
  }
  std::complex<double> reflected() const {
    const double h = constants::hbar;
    return {-S0 - h * h * S2, h * (S1 + h * h * S3)};
  }
  std::complex<double> incident_deriv() const {
    const double h = constants::hbar;
    return {d.s0 + h * h * d.s2, h * (d.s1 + h * h * d.s3)};
  }
  std::complex<double> reflected_deriv() const {
    const double h = constants::hbar;
    return {-d.s0 - h * h * d.s2, h * (d.s1 + h * h * d.s3)};
  }

  /// Same phase data with the S2/S3 terms removed; reduces the third-order
  /// machinery to the first-order wave.
  WkbPhase truncated_first_order() const {
    WkbPhase t = *this;
    t.S2 = t.S3 = 0.0;
    t.d.s2 = t.d.s3 = 0.0;
    return t;
  }
};

/// Integrate the S'_n terms from x_ref to x (each term separately, adaptive
/// quadrature). Requires the whole interval to be classically allowed.
inline WkbPhase integrate_phase(const Potential& pot, double energy,
                                double x_ref, double x) {
  WkbPhase ph;
  ph.d = s_prime_terms(pot, energy, x);
  if (x == x_ref) return ph;

  auto term = [&](auto pick) {
    auto f = [&, pick](double xx) {
      return pick(s_prime_terms(pot, energy, xx));
    };
    return integrate(f, x_ref, x, 1e-11, 0.0);
  };
  ph.S0 = term([](const SPrimeTerms& t) { return t.s0; });
  ph.S1 = term([](const SPrimeTerms& t) { return t.s1; });
  ph.S2 = term([](const SPrimeTerms& t) { return t.s2; });
  ph.S3 = term([](const SPrimeTerms& t) { return t.s3; });
  return ph;
}

}  // namespace qtc
