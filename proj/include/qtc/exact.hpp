#pragma once

#include <cfloat>
#include <cmath>

#include "qtc/constants.hpp"
#include "qtc/errors.hpp"
#include "qtc/potential.hpp"
#include "qtc/quadrature.hpp"
#include "qtc/result.hpp"

namespace qtc {

/// The two classical turning points V(x1) = V(x2) = E, x1 < x2.
struct TurningPoints {
  double x1 = 0.0;
  double x2 = 0.0;
};

/// Kemble formula for the inverted parabola V = -alpha x^2:
/// TC = 1 / (1 + exp(-2 pi E / (hbar omega))), omega = sqrt(2 alpha / m).
inline double exact_tc_parabolic(double energy, double alpha) {
  if (!(alpha > 0)) throw config_error("alpha must be positive");
  const double omega = std::sqrt(2.0 * alpha / constants::m_e);
  const double u = 2.0 * M_PI * energy / (constants::hbar * omega);
  return 1.0 / (1.0 + std::exp(-u));
}

/// Eckart (modified Poschl-Teller) transmission for V = V0 (sech^2(x/a) - 1).
/// Energy is measured from the barrier top; the incident channel has
/// k = sqrt(2m(E + V0)) / hbar relative to the asymptote -V0.
inline double exact_tc_sech2(double energy, double v0, double a) {
  if (!(v0 > 0) || !(a > 0)) throw config_error("V0 and a must be positive");
  const double depth =
      8.0 * constants::m_e * v0 * a * a / (constants::hbar * constants::hbar);
  if (!(depth > 1.0))
    throw config_error("sech2 barrier too shallow for the Eckart formula");
  if (!(energy > -v0))
    throw config_error("no incident channel: E <= -V0");
  const double k =
      std::sqrt(2.0 * constants::m_e * (energy + v0)) / constants::hbar;
  const double sa = M_PI * k * a;                       // sinh argument
  const double ca = 0.5 * M_PI * std::sqrt(depth - 1);  // cosh argument
  if (sa > 20.0 && ca > 20.0) {
    // log-space evaluation; the direct sinh/cosh would overflow for thick
    // barriers
    const double ls = sa + std::log1p(-std::exp(-2.0 * sa)) - M_LN2;
    const double lc = ca + std::log1p(std::exp(-2.0 * ca)) - M_LN2;
    return 1.0 / (1.0 + std::exp(2.0 * (lc - ls)));
  }
  const double s2 = std::pow(std::sinh(sa), 2);
  const double c2 = std::pow(std::cosh(ca), 2);
  return s2 / (s2 + c2);
}

namespace detail {

inline double barrier_top(const Potential& pot, int scan_points = 10000) {
  double vmax = -INFINITY;
  for (int i = 0; i <= scan_points; ++i) {
    const double x = pot.x_lo() + pot.width() * i / scan_points;
    vmax = std::fmax(vmax, pot.value(x));
  }
  return vmax;
}

}  // namespace detail

/// Locate the turning points of V(x) = E by a 10^4-point sign scan refined
/// with bisection. Throws no_turning_points when E lies above the barrier.
inline TurningPoints find_turning_points(const Potential& pot, double energy) {
  constexpr int scan = 10000;
  const double h = pot.width() / scan;

  auto g = [&](double x) { return pot.value(x) - energy; };

  auto bisect = [&](double lo, double hi) {
    double glo = g(lo);
    const double tol = 1e-12 * std::fmax(std::fabs(energy), 1e-30);
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double gm = g(mid);
      if (std::fabs(gm) <= tol || hi - lo <= 4.0 * DBL_EPSILON * std::fabs(mid))
        return mid;
      if ((gm > 0) == (glo > 0)) {
        lo = mid;
        glo = gm;
      } else {
        hi = mid;
      }
    }
    return 0.5 * (lo + hi);
  };

  double first = NAN, last = NAN;
  double xp = pot.x_lo(), gp = g(xp);
  for (int i = 1; i <= scan; ++i) {
    const double x = pot.x_lo() + i * h;
    const double gx = g(x);
    if ((gx > 0) != (gp > 0)) {
      const double root = bisect(xp, x);
      if (std::isnan(first)) first = root;
      last = root;
    }
    xp = x;
    gp = gx;
  }
  if (std::isnan(first) || last == first)
    throw no_turning_points("energy above the barrier: no turning points");
  return {first, last};
}

/// WKB tunneling formula: TC = exp(-theta) / (1 + exp(-theta)/4)^2 with
/// theta = (2/hbar) Int sqrt(2m(V - E)) dx between the turning points.
///
/// Note: the barrier action is implemented with the positive-real integrand
/// sqrt(2m(V - E)); at the barrier top theta = 0 and TC = 0.64.
inline double wkb_tc(const Potential& pot, double energy) {
  const double vmax = detail::barrier_top(pot);
  const double top_tol =
      1e-12 * std::fmax(std::fabs(energy), std::fmax(std::fabs(vmax), 1e-30));
  double theta = 0.0;
  if (energy >= vmax - top_tol) {
    if (energy > vmax + top_tol)
      throw no_turning_points("energy above the barrier top");
    // Degenerate turning points: vanishing barrier action.
  } else {
    const TurningPoints tp = find_turning_points(pot, energy);
    const double w = tp.x2 - tp.x1;
    // Substitution x = x1 + w sin^2(u) removes the inverse-square-root
    // endpoint singularity of the integrand's derivative.
    auto f = [&](double u) {
      const double s = std::sin(u);
      const double x = tp.x1 + w * s * s;
      const double q = 2.0 * constants::m_e * (pot.value(x) - energy);
      return std::sqrt(std::fmax(q, 0.0)) * w * std::sin(2.0 * u);
    };
    // Pure relative control: the integrand carries SI momentum units, so a
    // fixed absolute tolerance would be meaningless at this scale.
    theta = 2.0 / constants::hbar * integrate(f, 0.0, 0.5 * M_PI, 1e-10, 0.0);
  }
  const double t = std::exp(-theta);
  return t / std::pow(1.0 + 0.25 * t, 2);
}

}  // namespace qtc
