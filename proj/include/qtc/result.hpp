#pragma once

#include <string>

namespace qtc {

/// One transmission-coefficient evaluation: the unit of all sweep outputs.
struct TcResult {
  double energy = 0.0;   // J
  double tc = 0.0;       // dimensionless
  std::string method;    // tag, e.g. "tm-wkb1"
  long n_steps = 0;      // 0 for analytic references
};

}  // namespace qtc
