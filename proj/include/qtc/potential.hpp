#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "qtc/errors.hpp"

namespace qtc {

/// An immutable 1-D potential-energy landscape over a finite computational
/// domain [x_lo, x_hi], with spatial derivatives up to third order. All
/// quantities are SI (joules, metres).
class Potential {
 public:
  using Fn = std::function<double(double)>;

  Potential(std::string name, double x_lo, double x_hi, Fn value,
            std::array<Fn, 3> derivs, std::map<std::string, double> params)
      : name_(std::move(name)),
        x_lo_(x_lo),
        x_hi_(x_hi),
        value_(std::move(value)),
        derivs_(std::move(derivs)),
        params_(std::move(params)) {
    if (!(x_lo_ < x_hi_)) throw config_error("degenerate domain");
  }

  const std::string& name() const { return name_; }
  double x_lo() const { return x_lo_; }
  double x_hi() const { return x_hi_; }
  double width() const { return x_hi_ - x_lo_; }

  double value(double x) const { return value_(x); }

  /// d^order V / dx^order, order in {1,2,3}.
  double deriv(double x, int order) const {
    if (order < 1 || order > 3)
      throw config_error("derivative order must be 1, 2 or 3");
    return derivs_[order - 1](x);
  }

  bool has_param(const std::string& key) const { return params_.count(key); }
  double param(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end())
      throw config_error("unknown potential parameter: " + key);
    return it->second;
  }

 private:
  std::string name_;
  double x_lo_, x_hi_;
  Fn value_;
  std::array<Fn, 3> derivs_;
  std::map<std::string, double> params_;
};

/// V(x) = -alpha x^2 (inverted parabola, barrier top at x = 0).
inline Potential make_parabolic(double alpha, double x_lo, double x_hi) {
  if (!(alpha > 0)) throw config_error("parabolic: alpha must be positive");
  return Potential(
      "parabolic", x_lo, x_hi, [alpha](double x) { return -alpha * x * x; },
      {[alpha](double x) { return -2.0 * alpha * x; },
       [alpha](double) { return -2.0 * alpha; }, [](double) { return 0.0; }},
      {{"alpha", alpha}});
}

/// V(x) = V0 (sech^2(x/x0) - 1): barrier top at 0, asymptote -V0.
inline Potential make_sech2(double v0, double x0, double x_lo, double x_hi) {
  if (!(v0 > 0) || !(x0 > 0))
    throw config_error("sech2: V0 and x0 must be positive");
  auto sech = [](double u) { return 1.0 / std::cosh(u); };
  auto value = [v0, x0, sech](double x) {
    const double s = sech(x / x0);
    return v0 * (s * s - 1.0);
  };
  auto d1 = [v0, x0, sech](double x) {
    const double u = x / x0;
    const double s = sech(u);
    return -2.0 * v0 * s * s * std::tanh(u) / x0;
  };
  auto d2 = [v0, x0, sech](double x) {
    const double u = x / x0;
    const double s = sech(u);
    const double t = std::tanh(u);
    return -2.0 * v0 * s * s * (s * s - 2.0 * t * t) / (x0 * x0);
  };
  auto d3 = [v0, x0, sech](double x) {
    const double u = x / x0;
    const double s = sech(u);
    const double t = std::tanh(u);
    return 8.0 * v0 * s * s * t * (2.0 * s * s - t * t) / (x0 * x0 * x0);
  };
  return Potential("sech2", x_lo, x_hi, value, {d1, d2, d3},
                   {{"v0", v0}, {"x0", x0}});
}

/// Constant potential (mostly for free-propagation checks).
inline Potential make_constant(double v, double x_lo, double x_hi) {
  return Potential(
      "constant", x_lo, x_hi, [v](double) { return v; },
      {[](double) { return 0.0; }, [](double) { return 0.0; },
       [](double) { return 0.0; }},
      {{"v", v}});
}

namespace detail {

// Not-a-knot cubic spline; reproduces cubic data exactly, so tabulated
// smooth barriers keep full accuracy up to the domain edges.
class CubicSpline {
 public:
  explicit CubicSpline(std::vector<std::pair<double, double>> samples) {
    const std::size_t n = samples.size();
    if (n < 4) throw config_error("tabulated potential needs >= 4 samples");
    x_.resize(n);
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      x_[i] = samples[i].first;
      y_[i] = samples[i].second;
      if (i > 0 && !(x_[i] > x_[i - 1]))
        throw config_error("tabulated abscissae must be strictly increasing");
    }
    solve_second_derivs();
  }

  double x_front() const { return x_.front(); }
  double x_back() const { return x_.back(); }

  double eval(double x, int order) const {
    const std::size_t i = interval(x);
    const double h = x_[i + 1] - x_[i];
    const double a = (x_[i + 1] - x) / h;
    const double b = (x - x_[i]) / h;
    switch (order) {
      case 0:
        return a * y_[i] + b * y_[i + 1] +
               ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) *
                   (h * h) / 6.0;
      case 1:
        return (y_[i + 1] - y_[i]) / h +
               h / 6.0 *
                   ((3.0 * b * b - 1.0) * m_[i + 1] -
                    (3.0 * a * a - 1.0) * m_[i]);
      case 2:
        return a * m_[i] + b * m_[i + 1];
      case 3:
        return (m_[i + 1] - m_[i]) / h;
      default:
        throw config_error("spline derivative order out of range");
    }
  }

 private:
  std::size_t interval(double x) const {
    // Clamp to end polynomials outside the tabulated range.
    if (x <= x_.front()) return 0;
    if (x >= x_.back()) return x_.size() - 2;
    auto it = std::upper_bound(x_.begin(), x_.end(), x);
    return static_cast<std::size_t>(it - x_.begin()) - 1;
  }

  void solve_second_derivs() {
    const std::size_t n = x_.size();
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) h[i] = x_[i + 1] - x_[i];

    // Unknowns m_1..m_{n-2}; m_0 and m_{n-1} follow from the not-a-knot
    // conditions (third derivative continuous across the second and the
    // second-to-last knot).
    const std::size_t m = n - 2;
    std::vector<double> sub(m), diag(m), sup(m), rhs(m);
    for (std::size_t i = 1; i + 1 < n; ++i) {
      const std::size_t j = i - 1;
      sub[j] = h[i - 1];
      diag[j] = 2.0 * (h[i - 1] + h[i]);
      sup[j] = h[i];
      rhs[j] = 6.0 * ((y_[i + 1] - y_[i]) / h[i] -
                      (y_[i] - y_[i - 1]) / h[i - 1]);
    }
    // m_0 = (1 + h0/h1) m_1 - (h0/h1) m_2
    {
      const double r = h[0] / h[1];
      diag[0] += sub[0] * (1.0 + r);
      sup[0] -= sub[0] * r;
    }
    // m_{n-1} = (1 + h_{n-2}/h_{n-3}) m_{n-2} - (h_{n-2}/h_{n-3}) m_{n-3}
    {
      const double r = h[n - 2] / h[n - 3];
      diag[m - 1] += sup[m - 1] * (1.0 + r);
      sub[m - 1] -= sup[m - 1] * r;
    }
    // Thomas algorithm.
    for (std::size_t j = 1; j < m; ++j) {
      const double w = sub[j] / diag[j - 1];
      diag[j] -= w * sup[j - 1];
      rhs[j] -= w * rhs[j - 1];
    }
    std::vector<double> sol(m);
    sol[m - 1] = rhs[m - 1] / diag[m - 1];
    for (std::size_t j = m - 1; j-- > 0;)
      sol[j] = (rhs[j] - sup[j] * sol[j + 1]) / diag[j];

    m_.assign(n, 0.0);
    for (std::size_t j = 0; j < m; ++j) m_[j + 1] = sol[j];
    m_[0] = m_[1] + (h[0] / h[1]) * (m_[1] - m_[2]);
    m_[n - 1] = m_[n - 2] + (h[n - 2] / h[n - 3]) * (m_[n - 2] - m_[n - 3]);
  }

  std::vector<double> x_, y_, m_;
};

}  // namespace detail

/// Cubic-spline interpolant through user-supplied (x, V) samples.
/// Derivatives come from the spline; the third derivative is piecewise
/// constant and therefore of lower accuracy than for the analytic models.
inline Potential make_tabulated(std::vector<std::pair<double, double>> samples) {
  auto sp = std::make_shared<detail::CubicSpline>(std::move(samples));
  const double lo = sp->x_front(), hi = sp->x_back();
  return Potential(
      "tabulated", lo, hi, [sp](double x) { return sp->eval(x, 0); },
      {[sp](double x) { return sp->eval(x, 1); },
       [sp](double x) { return sp->eval(x, 2); },
       [sp](double x) { return sp->eval(x, 3); }},
      {});
}

}  // namespace qtc
