// Command-line front end: transmission-coefficient sweeps, error analysis
// against the exact references, and error-vs-N studies. Outputs CSV or JSON.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qtc/qtc.hpp"

namespace {

using nlohmann::json;

struct CommonOpts {
  std::string potential = "parabolic";
  double alpha = 1.0;       // J/m^2
  double v0 = 1e-18;        // J
  double width = 1e-9;      // sech2 x0, m
  double xmin = -2e-9, xmax = 2e-9;
  double emin = -2e-19, emax = 2e-19;
  int epoints = 101;
  long nsteps = 100000;
  std::string out;
  std::string format = "csv";
  int threads = 0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--potential", o.potential,
                  "parabolic | sech2 | table:<path>");
  cmd->add_option("--alpha", o.alpha, "parabola coefficient (J/m^2)");
  cmd->add_option("--v0", o.v0, "sech2 depth (J)");
  cmd->add_option("--width", o.width, "sech2 width x0 (m)");
  cmd->add_option("--xmin", o.xmin, "left domain edge (m)");
  cmd->add_option("--xmax", o.xmax, "right domain edge (m)");
  cmd->add_option("--emin", o.emin, "lowest energy (J)");
  cmd->add_option("--emax", o.emax, "highest energy (J)");
  cmd->add_option("--epoints", o.epoints, "number of energy grid points");
  cmd->add_option("--nsteps", o.nsteps, "TM segments / DE integrator steps");
  cmd->add_option("--out", o.out, "output path (default: stdout)");
  cmd->add_option("--format", o.format, "csv | json");
  cmd->add_option("--threads", o.threads, "worker threads (0 = auto)");
}

qtc::Potential load_tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw qtc::config_error("cannot open table file: " + path);
  std::vector<std::pair<double, double>> samples;
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    for (char& c : line)
      if (c == ',') c = ' ';
    std::istringstream ls(line);
    double x, v;
    if (ls >> x >> v) samples.emplace_back(x, v);
  }
  return qtc::make_tabulated(std::move(samples));
}

qtc::Potential make_potential(const CommonOpts& o) {
  if (o.potential == "parabolic")
    return qtc::make_parabolic(o.alpha, o.xmin, o.xmax);
  if (o.potential == "sech2")
    return qtc::make_sech2(o.v0, o.width, o.xmin, o.xmax);
  if (o.potential.rfind("table:", 0) == 0)
    return load_tabulated(o.potential.substr(6));
  throw qtc::config_error("unknown potential: " + o.potential +
                          " (expected parabolic, sech2 or table:<path>)");
}

qtc::Method require_method(const std::string& tag) {
  auto m = qtc::parse_method(tag);
  if (!m) throw qtc::config_error("unknown method tag: " + tag);
  return *m;
}

void emit(const CommonOpts& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(o.out, std::ios::binary);
  if (!out) throw qtc::config_error("cannot open output path: " + o.out);
  out << text;
}

json row_json(const qtc::SweepRow& r) {
  json j{{"energy_J", r.energy},
         {"method", r.method},
         {"n_steps", r.n_steps}};
  if (r.ok)
    j["tc"] = r.tc;
  else
    j["error"] = r.message;
  return j;
}

int run_tc(const CommonOpts& o, const std::string& method) {
  const auto pot = make_potential(o);
  qtc::SweepConfig cfg;
  cfg.method = require_method(method);
  cfg.n_steps = o.nsteps;
  cfg.grid = {o.emin, o.emax, o.epoints};
  cfg.threads = o.threads;
  const auto rows = qtc::run_tc_sweep(pot, cfg);

  std::ostringstream os;
  if (o.format == "json") {
    json j = json::array();
    for (const auto& r : rows) j.push_back(row_json(r));
    os << j.dump(2) << '\n';
  } else {
    qtc::write_tc_csv(os, rows);
  }
  emit(o, os.str());
  return 0;
}

int run_error(const CommonOpts& o, std::vector<std::string> method_tags,
              const std::string& average) {
  const auto pot = make_potential(o);
  if (method_tags.empty())
    method_tags = {"tm-pw", "tm-wkb1", "tm-wkb3", "de-pw", "de-wkb"};
  std::vector<qtc::Method> methods;
  for (const auto& t : method_tags) methods.push_back(require_method(t));

  qtc::Averaging avg;
  if (average == "arith")
    avg = qtc::Averaging::Arithmetic;
  else if (average == "geom")
    avg = qtc::Averaging::Geometric;
  else
    throw qtc::config_error("--average must be arith or geom");

  qtc::SweepConfig base;
  base.n_steps = o.nsteps;
  base.grid = {o.emin, o.emax, o.epoints};
  base.threads = o.threads;
  const auto rep = qtc::run_error_analysis(pot, methods, base, avg);

  std::ostringstream os;
  if (o.format == "json") {
    json j;
    for (const auto& [m, rows] : rep.rows) {
      json rj = json::array();
      for (std::size_t i = 0; i < rows.size(); ++i) {
        json r = row_json(rows[i]);
        r["tc_exact"] = rep.tc_exact[i];
        r["rel_error"] = rep.rel_error.at(m)[i];
        rj.push_back(std::move(r));
      }
      j["rows"][qtc::method_name(m)] = std::move(rj);
      j["avg_error"][qtc::method_name(m)] = rep.avg_error.at(m);
    }
    os << j.dump(2) << '\n';
  } else {
    qtc::write_error_csv(os, rep);
  }
  emit(o, os.str());

  // Averaged errors and improvement ratios on stderr so they never disturb
  // machine-readable stdout.
  for (const auto& [m, e] : rep.avg_error)
    std::cerr << "avg_rel_error[" << qtc::method_name(m) << "] = " << e
              << '\n';
  return 0;
}

int run_nsweep(const CommonOpts& o, const std::string& method,
               const std::string& nlist) {
  const auto pot = make_potential(o);
  std::vector<long> ns;
  std::istringstream ls(nlist);
  std::string tok;
  while (std::getline(ls, tok, ',')) ns.push_back(std::stol(tok));

  qtc::SweepConfig base;
  base.grid = {o.emin, o.emax, o.epoints};
  base.threads = o.threads;
  const auto rows =
      qtc::run_n_sweep(pot, require_method(method), ns, base);

  std::ostringstream os;
  if (o.format == "json") {
    json j = json::array();
    for (const auto& r : rows) {
      json rj{{"energy_J", r.energy}, {"method", r.method},
              {"n_steps", r.n_steps}, {"tc_exact", r.tc_exact}};
      if (r.ok) {
        rj["tc"] = r.tc;
        rj["rel_error"] = r.rel_error;
      } else {
        rj["error"] = r.message;
      }
      j.push_back(std::move(rj));
    }
    os << j.dump(2) << '\n';
  } else {
    qtc::write_nsweep_csv(os, rows);
  }
  emit(o, os.str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"1-D quantum transmission coefficients: transfer-matrix and "
               "direct-integration methods with plane-wave or WKB "
               "non-reflecting boundaries"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string method = "tm-wkb1";
  std::vector<std::string> error_methods;
  std::string average = "arith";
  std::string nlist = "1000,10000,100000";

  auto* tc = app.add_subcommand("tc", "TC-vs-energy sweep for one method");
  add_common(tc, o);
  tc->add_option("--method", method,
                 "tm-pw | tm-wkb1 | tm-wkb3 | de-pw | de-wkb | wkb-formula | "
                 "exact");

  auto* err = app.add_subcommand(
      "error", "relative error against the exact reference, several methods");
  add_common(err, o);
  err->add_option("--method", error_methods,
                  "methods to compare (repeatable; default: all numeric)");
  err->add_option("--average", average, "arith | geom");

  auto* nsw = app.add_subcommand("nsweep", "error vs step count N");
  add_common(nsw, o);
  nsw->add_option("--method", method, "method to study");
  nsw->add_option("--nlist", nlist, "comma-separated ascending N values");

  try {
    app.parse(argc, argv);
    if (tc->parsed()) return run_tc(o, method);
    if (err->parsed()) return run_error(o, error_methods, average);
    return run_nsweep(o, method, nlist);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  } catch (const qtc::config_error& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return 3;
  }
}
