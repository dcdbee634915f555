#pragma once

#include <cmath>

// Unit helpers. Everything inside the library is SI (meters, seconds, watts,
// linear power ratios); conversions happen at the configuration boundary.
namespace irsho::units {

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }

inline double dbm_to_watt(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w / 1e-3); }

// Densities are usually quoted per km^2; internal unit is per m^2. Dividing
// by the exactly representable 1e6/1e3 keeps the quotient correctly rounded
// (10/km^2 becomes the double nearest 1e-5, bit-identical to the literal).
inline double per_km2_to_per_m2(double d) { return d / 1e6; }
inline double per_m2_to_per_km2(double d) { return d * 1e6; }

inline double ms_to_s(double ms) { return ms / 1e3; }
inline double s_to_ms(double s) { return s * 1e3; }
inline double ghz_to_hz(double ghz) { return ghz * 1e9; }

}  // namespace irsho::units
