#pragma once

#include <atomic>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include "qtc/de_solver.hpp"
#include "qtc/errors.hpp"
#include "qtc/exact.hpp"
#include "qtc/potential.hpp"
#include "qtc/transfer_matrix.hpp"

namespace qtc {

enum class Method { TmPw, TmWkb1, TmWkb3, DePw, DeWkb, WkbFormula, Exact };

inline std::string method_name(Method m) {
  switch (m) {
    case Method::TmPw:
      return "tm-pw";
    case Method::TmWkb1:
      return "tm-wkb1";
    case Method::TmWkb3:
      return "tm-wkb3";
    case Method::DePw:
      return "de-pw";
    case Method::DeWkb:
      return "de-wkb";
    case Method::WkbFormula:
      return "wkb-formula";
    default:
      return "exact";
  }
}

inline std::optional<Method> parse_method(const std::string& tag) {
  static const std::map<std::string, Method> lut = {
      {"tm-pw", Method::TmPw},     {"tm-wkb1", Method::TmWkb1},
      {"tm-wkb3", Method::TmWkb3}, {"de-pw", Method::DePw},
      {"de-wkb", Method::DeWkb},   {"wkb-formula", Method::WkbFormula},
      {"exact", Method::Exact}};
  auto it = lut.find(tag);
  if (it == lut.end()) return std::nullopt;
  return it->second;
}

/// True when an analytic transmission formula exists for this potential.
inline bool has_exact_reference(const Potential& pot) {
  return pot.name() == "parabolic" || pot.name() == "sech2";
}

inline double exact_tc(const Potential& pot, double energy) {
  if (pot.name() == "parabolic")
    return exact_tc_parabolic(energy, pot.param("alpha"));
  if (pot.name() == "sech2")
    return exact_tc_sech2(energy, pot.param("v0"), pot.param("x0"));
  throw config_error(
      "no exact reference for potential '" + pot.name() +
      "'; supported reference potentials: parabolic, sech2");
}

/// Single-energy dispatch. For the DE methods n_steps is the integrator step
/// count; for the TM methods the number of potential steps.
inline TcResult compute_tc(const Potential& pot, double energy, Method method,
                           long n_steps) {
  switch (method) {
    case Method::TmPw:
      return compute_tc_tm(pot, energy, static_cast<int>(n_steps),
                           BoundaryKind::PW);
    case Method::TmWkb1:
      return compute_tc_tm(pot, energy, static_cast<int>(n_steps),
                           BoundaryKind::WKB1);
    case Method::TmWkb3:
      return compute_tc_tm(pot, energy, static_cast<int>(n_steps),
                           BoundaryKind::WKB3);
    case Method::DePw:
      return compute_tc_de(pot, energy, DeBoundaryKind::PW, n_steps);
    case Method::DeWkb:
      return compute_tc_de(pot, energy, DeBoundaryKind::WKB, n_steps);
    case Method::WkbFormula:
      return {energy, wkb_tc(pot, energy), "wkb-formula", 0};
    default:
      return {energy, exact_tc(pot, energy), "exact", 0};
  }
}

struct EnergyGrid {
  double e_min = 0.0, e_max = 0.0;
  int count = 0;

  std::vector<double> points() const {
    if (count < 2 || !(e_min < e_max))
      throw config_error("energy grid must be strictly increasing with >= 2 points");
    std::vector<double> e(count);
    for (int i = 0; i < count; ++i)
      e[i] = e_min + (e_max - e_min) * i / (count - 1);
    return e;
  }
};

struct SweepConfig {
  Method method = Method::Exact;
  long n_steps = 100000;
  EnergyGrid grid;
  int threads = 0;  // 0: hardware concurrency
};

/// One sweep row; failures are recorded (ok = false) and the sweep continues.
struct SweepRow {
  double energy = 0.0;
  std::string method;
  long n_steps = 0;
  double tc = NAN;
  bool ok = false;
  std::string message;
};

namespace detail {

template <typename Work>
void parallel_for(int n, int threads, Work&& work) {
  unsigned tn = threads > 0 ? static_cast<unsigned>(threads)
                            : std::thread::hardware_concurrency();
  if (tn < 1) tn = 1;
  if (tn == 1 || n < 2) {
    for (int i = 0; i < n; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  auto body = [&] {
    for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) work(i);
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < tn; ++t) pool.emplace_back(body);
  body();
  for (auto& th : pool) th.join();
}

}  // namespace detail

/// TC-vs-energy sweep for one method; rows come back in energy order
/// regardless of worker scheduling.
inline std::vector<SweepRow> run_tc_sweep(const Potential& pot,
                                          const SweepConfig& cfg) {
  const std::vector<double> energies = cfg.grid.points();
  std::vector<SweepRow> rows(energies.size());
  detail::parallel_for(
      static_cast<int>(energies.size()), cfg.threads, [&](int i) {
        SweepRow& row = rows[i];
        row.energy = energies[i];
        row.method = method_name(cfg.method);
        row.n_steps = cfg.method == Method::Exact ||
                              cfg.method == Method::WkbFormula
                          ? 0
                          : cfg.n_steps;
        try {
          row.tc = compute_tc(pot, energies[i], cfg.method, cfg.n_steps).tc;
          row.ok = true;
        } catch (const std::exception& ex) {
          row.message = ex.what();
        }
      });
  return rows;
}

enum class Averaging { Arithmetic, Geometric };

/// Per-method relative-error curves against the exact reference, plus
/// energy-averaged errors and pairwise improvement ratios.
struct ErrorReport {
  std::vector<double> energies;
  std::vector<double> tc_exact;
  std::map<Method, std::vector<SweepRow>> rows;
  std::map<Method, std::vector<double>> rel_error;  // NAN where excluded
  std::map<Method, double> avg_error;

  double ratio(Method a, Method b) const {
    return avg_error.at(a) / avg_error.at(b);
  }
};

/// Energies where the exact TC is below this are excluded from averages (the
/// relative-error denominator would blow up).
inline constexpr double error_exclusion_floor = 1e-12;

inline ErrorReport run_error_analysis(const Potential& pot,
                                      const std::vector<Method>& methods,
                                      const SweepConfig& base,
                                      Averaging avg = Averaging::Arithmetic) {
  if (!has_exact_reference(pot)) exact_tc(pot, 0.0);  // throws with message
  ErrorReport rep;
  rep.energies = base.grid.points();
  rep.tc_exact.reserve(rep.energies.size());
  for (double e : rep.energies) rep.tc_exact.push_back(exact_tc(pot, e));

  for (Method m : methods) {
    SweepConfig cfg = base;
    cfg.method = m;
    auto rows = run_tc_sweep(pot, cfg);
    std::vector<double> errs(rows.size(), NAN);
    double acc = 0.0;
    int used = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (!rows[i].ok || rep.tc_exact[i] < error_exclusion_floor) continue;
      errs[i] = std::fabs(rows[i].tc - rep.tc_exact[i]) / rep.tc_exact[i];
      acc += avg == Averaging::Arithmetic ? errs[i]
                                          : std::log(std::fmax(errs[i], 1e-300));
      ++used;
    }
    rep.avg_error[m] =
        used == 0 ? NAN
        : avg == Averaging::Arithmetic ? acc / used
                                       : std::exp(acc / used);
    rep.rel_error[m] = std::move(errs);
    rep.rows[m] = std::move(rows);
  }
  return rep;
}

struct NSweepRow {
  long n_steps = 0;
  double energy = 0.0;
  std::string method;
  double tc = NAN;
  double tc_exact = NAN;
  double rel_error = NAN;
  bool ok = false;
  std::string message;
};

/// Error-vs-N study for one method, plus DE-WKB reference rows at the
/// default integrator resolution.
inline std::vector<NSweepRow> run_n_sweep(const Potential& pot, Method method,
                                          const std::vector<long>& n_list,
                                          const SweepConfig& base,
                                          bool de_reference = true) {
  if (n_list.empty()) throw config_error("N list must not be empty");
  for (std::size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw config_error("N list must be ascending");
  if (!has_exact_reference(pot)) exact_tc(pot, 0.0);

  std::vector<NSweepRow> out;
  auto append = [&](Method m, long n) {
    SweepConfig cfg = base;
    cfg.method = m;
    cfg.n_steps = n;
    for (const SweepRow& r : run_tc_sweep(pot, cfg)) {
      NSweepRow row;
      row.n_steps = r.n_steps;
      row.energy = r.energy;
      row.method = r.method;
      row.tc = r.tc;
      row.ok = r.ok;
      row.message = r.message;
      row.tc_exact = exact_tc(pot, r.energy);
      if (r.ok && row.tc_exact >= error_exclusion_floor)
        row.rel_error = std::fabs(r.tc - row.tc_exact) / row.tc_exact;
      out.push_back(std::move(row));
    }
  };
  for (long n : n_list) append(method, n);
  if (de_reference && method != Method::DeWkb)
    append(Method::DeWkb, de_default_steps);
  return out;
}

// ---- output formatting ----------------------------------------------------

namespace detail {

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17e", v);
  return buf;
}

}  // namespace detail

inline void write_tc_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "energy_J,method,n_steps,tc\n";
  for (const auto& r : rows) {
    os << detail::fmt_g(r.energy) << ',' << r.method << ',' << r.n_steps << ','
       << (r.ok ? detail::fmt_g(r.tc) : "error:" + r.message) << '\n';
  }
}

inline void write_error_csv(std::ostream& os, const ErrorReport& rep) {
  os << "energy_J,method,n_steps,tc,tc_exact,rel_error\n";
  for (const auto& [m, rows] : rep.rows) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& r = rows[i];
      os << detail::fmt_g(r.energy) << ',' << r.method << ',' << r.n_steps
         << ',' << (r.ok ? detail::fmt_g(r.tc) : "error:" + r.message) << ','
         << detail::fmt_g(rep.tc_exact[i]) << ','
         << detail::fmt_g(rep.rel_error.at(m)[i]) << '\n';
    }
  }
}

inline void write_nsweep_csv(std::ostream& os,
                             const std::vector<NSweepRow>& rows) {
  os << "energy_J,method,n_steps,tc,tc_exact,rel_error\n";
  for (const auto& r : rows) {
    os << detail::fmt_g(r.energy) << ',' << r.method << ',' << r.n_steps << ','
       << (r.ok ? detail::fmt_g(r.tc) : "error:" + r.message) << ','
       << detail::fmt_g(r.tc_exact) << ',' << detail::fmt_g(r.rel_error)
       << '\n';
  }
}

}  // namespace qtc
