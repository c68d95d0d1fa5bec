#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>

namespace svip::oracle {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kRad = kPi / 180.0;

double adaptive_simpson_rec(const std::function<double(double)>& f, double a,
                            double b, double fa, double fm, double fb,
                            double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, eps / 2.0, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, eps / 2.0, depth - 1);
}

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double rel_eps) {
  // Coarse pass to scale the absolute tolerance.
  double coarse = 0.0;
  const int panels = 64;
  const double h = (b - a) / panels;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h, x1 = x0 + h;
    coarse += (x1 - x0) / 6.0 * (f(x0) + 4.0 * f(0.5 * (x0 + x1)) + f(x1));
  }
  const double eps = std::abs(coarse) * rel_eps + 1e-300;

  double total = 0.0;
  for (int i = 0; i < panels; ++i) {
    const double x0 = a + i * h, x1 = x0 + h;
    const double fa = f(x0), fb = f(x1), fm = f(0.5 * (x0 + x1));
    const double whole = (x1 - x0) / 6.0 * (fa + 4.0 * fm + fb);
    total += adaptive_simpson_rec(f, x0, x1, fa, fm, fb, whole,
                                  eps / panels, 40);
  }
  return total;
}

double t_log_density_coef(double df) {
  return std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
         0.5 * std::log(df * kPi);
}

double t_density(double x, double df, double log_coef) {
  return std::exp(log_coef - (df + 1.0) / 2.0 * std::log1p(x * x / df));
}

double f_log_density_coef(double d1, double d2) {
  return std::lgamma((d1 + d2) / 2.0) - std::lgamma(d1 / 2.0) -
         std::lgamma(d2 / 2.0) + (d1 / 2.0) * std::log(d1 / d2);
}

double f_density(double x, double d1, double d2, double log_coef) {
  return std::exp(log_coef + (d1 / 2.0 - 1.0) * std::log(x) -
                  (d1 + d2) / 2.0 * std::log1p(d1 * x / d2));
}

}  // namespace

double great_circle_distance(const GeoPoint& a, const GeoPoint& b) {
  const double lat1 = a.lat * kRad, lat2 = b.lat * kRad;
  const double dlon = (b.lon - a.lon) * kRad;
  const double num = std::hypot(
      std::cos(lat2) * std::sin(dlon),
      std::cos(lat1) * std::sin(lat2) -
          std::sin(lat1) * std::cos(lat2) * std::cos(dlon));
  const double den = std::sin(lat1) * std::sin(lat2) +
                     std::cos(lat1) * std::cos(lat2) * std::cos(dlon);
  return 6'371'000.0 * std::atan2(num, den);
}

std::vector<std::size_t> greedy_keep(const std::vector<GeoPoint>& positions,
                                     double spacing_m) {
  std::vector<std::size_t> kept;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (kept.empty() ||
        great_circle_distance(positions[kept.back()], positions[i]) >=
            spacing_m) {
      kept.push_back(i);
    }
  }
  return kept;
}

bool point_in_rings_winding(const GeoPoint& p, const std::vector<Ring>& rings) {
  // Sum each ring's winding number; odd total parity = inside. Holes wind
  // the same as outers under even-odd semantics.
  int crossings_parity = 0;
  for (const Ring& ring : rings) {
    int winding = 0;
    const auto& v = ring.vertices;
    for (std::size_t i = 0; i + 1 < v.size(); ++i) {
      const GeoPoint& a = v[i];
      const GeoPoint& b = v[i + 1];
      const double cross = (b.lon - a.lon) * (p.lat - a.lat) -
                           (p.lon - a.lon) * (b.lat - a.lat);
      if (a.lat <= p.lat) {
        if (b.lat > p.lat && cross > 0.0) ++winding;
      } else {
        if (b.lat <= p.lat && cross < 0.0) --winding;
      }
    }
    if (winding % 2 != 0) crossings_parity ^= 1;
  }
  return crossings_parity == 1;
}

std::string exhaustive_match(const GeoPoint& p,
                             const std::vector<Region>& regions) {
  for (const Region& r : regions) {
    if (point_in_region(p, r)) return r.geoid;
  }
  return kUnmatchedGeoid;
}

std::int64_t subset_count_per_detection(const std::vector<std::int64_t>& counts,
                                        int k) {
  std::int64_t total = 0;
  for (std::int64_t c : counts) {
    for (std::int64_t det = 0; det < c; ++det) {
      const std::int64_t companions = c - 1;
      if (companions >= k) ++total;
    }
  }
  return total;
}

double t_sf_quadrature(double t, double df) {
  if (t < 0.0) return 1.0 - t_sf_quadrature(-t, df);
  const double log_coef = t_log_density_coef(df);
  if (t == 0.0) return 0.5;
  // x = t/u maps the tail [t, inf) to u in (0, 1].
  const auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double x = t / u;
    return t_density(x, df, log_coef) * t / (u * u);
  };
  return adaptive_simpson(integrand, 1e-12, 1.0, 1e-12);
}

double f_sf_quadrature(double f, double d1, double d2) {
  if (f <= 0.0) return 1.0;
  const double log_coef = f_log_density_coef(d1, d2);
  const auto integrand = [&](double u) {
    if (u <= 0.0) return 0.0;
    const double x = f / u;
    return f_density(x, d1, d2, log_coef) * f / (u * u);
  };
  return adaptive_simpson(integrand, 1e-12, 1.0, 1e-12);
}

OlsOracleResult ols_normal_equations(const std::vector<double>& x_row_major,
                                     std::size_t rows, std::size_t cols,
                                     const std::vector<double>& y) {
  const std::size_t n = rows, p = cols;
  const auto X = [&](std::size_t r, std::size_t c) {
    return x_row_major[r * p + c];
  };

  // XtX and Xty.
  std::vector<double> xtx(p * p, 0.0), xty(p, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      xty[i] += X(r, i) * y[r];
      for (std::size_t j = 0; j < p; ++j) xtx[i * p + j] += X(r, i) * X(r, j);
    }
  }

  // Gauss-Jordan inverse with partial pivoting.
  std::vector<double> aug(p * 2 * p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) aug[i * 2 * p + j] = xtx[i * p + j];
    aug[i * 2 * p + p + i] = 1.0;
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(aug[r * 2 * p + col]) > std::abs(aug[pivot * 2 * p + col])) {
        pivot = r;
      }
    }
    if (std::abs(aug[pivot * 2 * p + col]) < 1e-12) {
      throw std::runtime_error("oracle: singular normal equations");
    }
    if (pivot != col) {
      for (std::size_t j = 0; j < 2 * p; ++j) {
        std::swap(aug[col * 2 * p + j], aug[pivot * 2 * p + j]);
      }
    }
    const double d = aug[col * 2 * p + col];
    for (std::size_t j = 0; j < 2 * p; ++j) aug[col * 2 * p + j] /= d;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double factor = aug[r * 2 * p + col];
      if (factor == 0.0) continue;
      for (std::size_t j = 0; j < 2 * p; ++j) {
        aug[r * 2 * p + j] -= factor * aug[col * 2 * p + j];
      }
    }
  }
  const auto inv = [&](std::size_t i, std::size_t j) {
    return aug[i * 2 * p + p + j];
  };

  OlsOracleResult out;
  out.coef.assign(p, 0.0);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) out.coef[i] += inv(i, j) * xty[j];
  }

  double rss = 0.0, mean_y = 0.0;
  for (std::size_t r = 0; r < n; ++r) mean_y += y[r];
  mean_y /= double(n);
  double tss = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    double fit = 0.0;
    for (std::size_t j = 0; j < p; ++j) fit += X(r, j) * out.coef[j];
    rss += (y[r] - fit) * (y[r] - fit);
    tss += (y[r] - mean_y) * (y[r] - mean_y);
  }

  const double df = double(n - p);
  const double sigma2 = rss / df;
  out.se.assign(p, 0.0);
  out.t.assign(p, 0.0);
  out.p.assign(p, 0.0);
  for (std::size_t j = 0; j < p; ++j) {
    out.se[j] = std::sqrt(sigma2 * inv(j, j));
    out.t[j] = out.coef[j] / out.se[j];
    out.p[j] = 2.0 * t_sf_quadrature(std::abs(out.t[j]), df);
  }
  out.r2 = 1.0 - rss / tss;
  out.adj_r2 = 1.0 - (1.0 - out.r2) * double(n - 1) / df;
  out.f = ((tss - rss) / double(p - 1)) / (rss / df);
  out.f_p = f_sf_quadrature(out.f, double(p - 1), df);
  out.loglik = -0.5 * double(n) *
               (std::log(2.0 * kPi) + std::log(rss / double(n)) + 1.0);
  return out;
}

TwoClassSplit best_two_class_split(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  const auto ssd = [&](std::size_t lo, std::size_t hi) {  // [lo, hi)
    double mean = 0.0;
    for (std::size_t i = lo; i < hi; ++i) mean += values[i];
    mean /= double(hi - lo);
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) {
      s += (values[i] - mean) * (values[i] - mean);
    }
    return s;
  };

  TwoClassSplit best;
  double best_ssd = std::numeric_limits<double>::infinity();
  for (std::size_t split = 1; split < n; ++split) {
    const double total = ssd(0, split) + ssd(split, n);
    if (total < best_ssd) {
      best_ssd = total;
      best.break_value = values[split - 1];
      best.ssd = total;
      best.lower_size = split;
    }
  }
  return best;
}

}  // namespace svip::oracle
