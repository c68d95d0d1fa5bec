// Independent reference implementations used to cross-check the library.
// Everything here is deliberately coded from first principles along a
// different algorithmic route than the code under test: great-circle via the
// atan2 form instead of haversine, point-in-polygon via winding numbers
// instead of ray casting, OLS via explicit normal equations instead of QR,
// and tail probabilities via adaptive quadrature instead of the incomplete
// beta continued fraction.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "svip/geotrack.hpp"
#include "svip/georef.hpp"

namespace svip::oracle {

/// Great-circle distance via the atan2 (Vincenty sphere) formula.
double great_circle_distance(const GeoPoint& a, const GeoPoint& b);

/// Brute-force greedy subsample over precomputed positions; returns indices
/// of kept frames.
std::vector<std::size_t> greedy_keep(const std::vector<GeoPoint>& positions,
                                     double spacing_m);

/// Winding-number point-in-polygon over all rings (nonzero winding of the
/// union treated with even-odd parity to mirror hole semantics).
bool point_in_rings_winding(const GeoPoint& p, const std::vector<Ring>& rings);

/// First containing region by load order, scanning every region.
std::string exhaustive_match(const GeoPoint& p,
                             const std::vector<Region>& regions);

/// Per-detection companion counting: expands view counts to individual
/// detections and checks each one's companions.
std::int64_t subset_count_per_detection(const std::vector<std::int64_t>& counts,
                                        int k);

/// P(T > t), Student's t, via adaptive Simpson quadrature of the density.
double t_sf_quadrature(double t, double df);

/// P(F > f) via adaptive Simpson quadrature of the density.
double f_sf_quadrature(double f, double d1, double d2);

struct OlsOracleResult {
  std::vector<double> coef;
  std::vector<double> se;
  std::vector<double> t;
  std::vector<double> p;
  double r2 = 0.0;
  double adj_r2 = 0.0;
  double f = 0.0;
  double f_p = 0.0;
  double loglik = 0.0;
};

/// OLS through the normal equations (Gauss-Jordan inverse of X^T X),
/// p-values from the quadrature survival functions above.
OlsOracleResult ols_normal_equations(const std::vector<double>& x_row_major,
                                     std::size_t rows, std::size_t cols,
                                     const std::vector<double>& y);

struct TwoClassSplit {
  double break_value = 0.0;
  double ssd = 0.0;
  std::size_t lower_size = 0;
};

/// Exhaustive 2-class split search over sorted values, naive SSD.
TwoClassSplit best_two_class_split(std::vector<double> values);

}  // namespace svip::oracle
