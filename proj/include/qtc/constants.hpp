#pragma once

namespace qtc::constants {

// Frozen CODATA-style values (SI). Not configurable: reference numbers in the
// test suite depend on them.
inline constexpr double hbar = 1.0545718e-34;    // J s
inline constexpr double m_e = 9.10938356e-31;    // kg
inline constexpr double q_e = 1.602176634e-19;   // C

}  // namespace qtc::constants
