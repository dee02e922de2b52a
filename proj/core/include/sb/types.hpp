#pragma once

#include <complex>
#include <numbers>

namespace sb {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;

// eighth root of unity used by the reference parameter family
inline Complex zeta8() { return std::polar(1.0, pi / 4.0); }

// the matching fiber coupling strength: 1 / (20 (zeta - 1))
inline Complex eps_ref() { return 1.0 / (20.0 * (zeta8() - 1.0)); }

inline double sq(double x) { return x * x; }
inline Complex sq(Complex z) { return z * z; }

} // namespace sb
