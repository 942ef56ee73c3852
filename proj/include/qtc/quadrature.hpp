#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>

#include "qtc/errors.hpp"

namespace qtc {

/// Adaptive Gauss-Kronrod (G7/K15) quadrature on [a, b].
///
/// Bisects until the embedded |K15 - G7| estimate of an interval drops below
/// its share of the tolerance. Throws numerical_error if the recursion depth
/// limit is reached before convergence.
template <std::invocable<double> F>
double integrate(F&& f, double a, double b, double rel_tol = 1e-10,
                 double abs_tol = 1e-10) {
  // QUADPACK 15-point Kronrod abscissae/weights and the embedded 7-point
  // Gauss weights.
  static constexpr double xgk[8] = {
      0.991455371120812639206854697526329,
      0.949107912342758524526189684047851,
      0.864864423359769072789712788640926,
      0.741531185599394439863864773280788,
      0.586087235467691130294144838258730,
      0.405845151377397166906606412076961,
      0.207784955007898467600689403773245,
      0.000000000000000000000000000000000};
  static constexpr double wgk[8] = {
      0.022935322010529224963732008058970,
      0.063092092629978553290700663189204,
      0.104790010322250183839876322541518,
      0.140653259715525918745189590510238,
      0.169004726639267902826583426598550,
      0.190350578064785409913256402421014,
      0.204432940075298892414161999234649,
      0.209482141084727828012999174891714};
  static constexpr double wg[4] = {
      0.129484966168869693270611432679082,
      0.279705391489276667901467771423780,
      0.381830050505118944950369775488975,
      0.417959183673469387755102040816327};

  struct Rule {
    static void apply(F& f, double lo, double hi, double& kronrod,
                      double& err) {
      const double c = 0.5 * (lo + hi);
      const double h = 0.5 * (hi - lo);
      const double fc = f(c);
      double gauss = wg[3] * fc;
      kronrod = wgk[7] * fc;
      for (int j = 0; j < 7; ++j) {
        const double fsum = f(c - h * xgk[j]) + f(c + h * xgk[j]);
        kronrod += wgk[j] * fsum;
        if (j % 2 == 1) gauss += wg[j / 2] * fsum;
      }
      kronrod *= h;
      gauss *= h;
      err = std::fabs(kronrod - gauss);
    }
  };

  struct Recurse {
    F& f;
    double rel_tol, abs_tol;
    double run(double lo, double hi, double whole, double err, int depth) {
      if (err <= std::fmax(abs_tol, rel_tol * std::fabs(whole)) || err == 0.0)
        return whole;
      if (depth > 60)
        throw numerical_error("adaptive quadrature failed to converge");
      const double mid = 0.5 * (lo + hi);
      double il, el, ir, er;
      Rule::apply(f, lo, mid, il, el);
      Rule::apply(f, mid, hi, ir, er);
      return run(lo, mid, il, el, depth + 1) + run(mid, hi, ir, er, depth + 1);
    }
  };

  if (a == b) return 0.0;
  double whole, err;
  Rule::apply(f, a, b, whole, err);
  // The per-interval tolerance is shared between halves on each split.
  Recurse rec{f, rel_tol, abs_tol * 0.5};
  return rec.run(a, b, whole, err, 0);
}

}  // namespace qtc
