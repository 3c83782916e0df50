#pragma once

// Scalar layer. Every numerical kernel is templated on a real type Real so a
// whole verification can be re-run in extended precision when cancellation
// exceeds what double can absorb (alternating q-series with q^{-n^2}-sized
// prefactors). Two instantiations are supported:
//   double            — native, default
//   qleg::Extended    — ~50 significant decimal digits
#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cmath>
#include <limits>
#include <string>

namespace qleg {

using Extended = boost::multiprecision::cpp_bin_float_50;

template <class Real>
inline const char* precision_name = "unknown";
template <>
inline const char* precision_name<double> = "double";
template <>
inline const char* precision_name<Extended> = "extended";

// Default relative tolerance for infinite products/sums; leaves ~10 digits of
// headroom above machine epsilon in each mode.
template <class Real>
Real default_eps() {
    return Real(1e-15);
}
template <>
inline Extended default_eps<Extended>() {
    return Extended(1e-40);
}

inline double to_double(double x) { return x; }
inline double to_double(const Extended& x) { return x.convert_to<double>(); }

// Exact integer power by binary exponentiation; e may be negative.
template <class Real>
Real pow_int(Real base, long e) {
    if (e < 0) return Real(1) / pow_int(base, -e);
    Real acc(1);
    while (e > 0) {
        if (e & 1) acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

}  // namespace qleg
