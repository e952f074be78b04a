#pragma once

// Unit conversions. Everything inside the library is SI (m, m², m³);
// imperial units only appear at configuration load and report output.

namespace gwnash::units {

inline constexpr double kSquareMetersPerAcre = 4046.8564224;
inline constexpr double kMetersPerFoot = 0.3048;
inline constexpr double kMetersPerMillimeter = 1e-3;
// Feet of water head per psi of gauge pressure.
inline constexpr double kFeetHeadPerPsi = 2.31;

constexpr double acres_to_m2(double acres) { return acres * kSquareMetersPerAcre; }
constexpr double m2_to_acres(double m2) { return m2 / kSquareMetersPerAcre; }
constexpr double mm_to_m(double mm) { return mm * kMetersPerMillimeter; }
constexpr double feet_to_m(double ft) { return ft * kMetersPerFoot; }

/// Yield per acre to yield per square meter (bushels).
constexpr double per_acre_to_per_m2(double v) { return v / kSquareMetersPerAcre; }

}  // namespace gwnash::units
