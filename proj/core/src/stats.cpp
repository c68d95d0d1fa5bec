#include "svip/stats.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "svip/csv.hpp"
#include "svip/distributions.hpp"
#include "svip/error.hpp"

namespace svip {

namespace {

constexpr double kPi = 3.14159265358979323846;

double parse_double_field(const std::string& s, const char* what,
                          const std::filesystem::path& path, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError(path.string() + " line " + std::to_string(line) +
                     ": bad " + std::string(what) + " \"" + s + "\"");
  }
}

}  // namespace

Season season_of(const CivilDate& d) {
  switch (d.month) {
    case 12:
    case 1:
    case 2:
      return Season::Winter;
    case 3:
    case 4:
    case 5:
      return Season::Spring;
    case 6:
    case 7:
    case 8:
      return Season::Summer;
    default:
      return Season::Fall;
  }
}

std::string to_string(Season s) {
  switch (s) {
    case Season::Fall:
      return "Fall";
    case Season::Spring:
      return "Spring";
    case Season::Summer:
      return "Summer";
    default:
      return "Winter";
  }
}

std::vector<TractAttributes> load_tract_attributes(
    const std::filesystem::path& path) {
  CsvReader reader(path, "geoid,median_income,pct_white");
  std::vector<TractAttributes> attrs;
  std::set<std::string> seen;
  std::vector<std::string> f;
  while (reader.next(f)) {
    TractAttributes a;
    a.geoid = f[0];
    a.median_income = parse_double_field(f[1], "median_income", path, reader.line());
    a.pct_white = parse_double_field(f[2], "pct_white", path, reader.line());
    if (a.median_income < 0.0) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": median_income must be >= 0");
    }
    if (!(a.pct_white >= 0.0 && a.pct_white <= 1.0)) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": pct_white must be in [0, 1]");
    }
    if (!seen.insert(a.geoid).second) {
      throw ParseError(path.string() + " line " + std::to_string(reader.line()) +
                       ": duplicate geoid \"" + a.geoid + "\"");
    }
    attrs.push_back(std::move(a));
  }
  return attrs;
}

std::vector<double> quintile_thresholds(std::vector<double> values) {
  if (values.empty()) {
    throw ValidationError("cannot derive income quintiles from zero tracts");
  }
  std::sort(values.begin(), values.end());
  std::vector<double> cuts;
  for (int i = 1; i <= 4; ++i) {
    const double h = (values.size() - 1) * (i / 5.0);
    const std::size_t lo = std::size_t(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    cuts.push_back(values[lo] + (h - double(lo)) * (values[hi] - values[lo]));
  }
  return cuts;
}

int income_bracket_of(double income, std::span<const double> thresholds) {
  int bracket = 1;
  for (double t : thresholds) {
    if (income > t) ++bracket;
  }
  return bracket;
}

Encoder::Encoder(EncodingConfig config,
                 const std::vector<TractAttributes>& attributes)
    : config_(std::move(config)) {
  if (config_.income_thresholds.empty()) {
    std::vector<double> incomes;
    incomes.reserve(attributes.size());
    for (const TractAttributes& a : attributes) incomes.push_back(a.median_income);
    thresholds_ = quintile_thresholds(std::move(incomes));
  } else {
    if (config_.income_thresholds.size() != 4 ||
        !std::is_sorted(config_.income_thresholds.begin(),
                        config_.income_thresholds.end())) {
      throw ConfigError("income_thresholds must be 4 ascending cut points");
    }
    thresholds_ = config_.income_thresholds;
  }
  for (const TractAttributes& a : attributes) by_geoid_[a.geoid] = a;
}

std::optional<EncodedObservation> Encoder::encode(
    const SurveyObservation& obs) const {
  const auto it = by_geoid_.find(obs.geoid);
  if (it == by_geoid_.end()) return std::nullopt;
  const TractAttributes& attrs = it->second;

  EncodedObservation row;
  row.y = obs.detections_per_image;
  row.subset_y = obs.subset_per_image;
  row.vaccine = obs.survey_date >= config_.vaccine_date;
  row.season = season_of(obs.survey_date);
  row.weekend = is_weekend(obs.survey_date);
  row.income_bracket = income_bracket_of(attrs.median_income, thresholds_);
  row.white_majority = attrs.pct_white >= config_.white_threshold;
  return row;
}

Dataset build_design(const std::vector<EncodedObservation>& rows, int subset_k) {
  if (subset_k < 0 || subset_k > kMaxSubsetK) {
    throw ValidationError("subset_k must be in [0, 4], got " +
                          std::to_string(subset_k));
  }
  std::set<Season> seasons;
  std::set<int> brackets;
  for (const EncodedObservation& r : rows) {
    if (r.season != Season::Fall) seasons.insert(r.season);
    if (r.income_bracket != 1) brackets.insert(r.income_bracket);
  }
  // Fixed column order mirroring the reported tables; dummy levels absent
  // from the data are omitted.
  const std::array<Season, 3> season_order{Season::Spring, Season::Summer,
                                           Season::Winter};
  Dataset d;
  d.labels.push_back("Intercept");
  for (Season s : season_order) {
    if (seasons.count(s)) d.labels.push_back(to_string(s));
  }
  d.labels.push_back("Vaccine Available");
  d.labels.push_back("Weekend");
  for (int b : brackets) d.labels.push_back("Income Bracket " + std::to_string(b));
  d.labels.push_back("More than 55.5% White");

  d.rows = rows.size();
  d.cols = d.labels.size();
  d.x.reserve(d.rows * d.cols);
  d.y.reserve(d.rows);
  for (const EncodedObservation& r : rows) {
    d.x.push_back(1.0);
    for (Season s : season_order) {
      if (seasons.count(s)) d.x.push_back(r.season == s ? 1.0 : 0.0);
    }
    d.x.push_back(r.vaccine ? 1.0 : 0.0);
    d.x.push_back(r.weekend ? 1.0 : 0.0);
    for (int b : brackets) d.x.push_back(r.income_bracket == b ? 1.0 : 0.0);
    d.x.push_back(r.white_majority ? 1.0 : 0.0);
    d.y.push_back(subset_k == 0 ? r.y : r.subset_y[subset_k - 1]);
  }
  return d;
}

RegressionResult ols_fit(const Dataset& data) {
  const std::size_t n = data.rows;
  const std::size_t p = data.cols;
  if (data.labels.size() != p || data.x.size() != n * p || data.y.size() != n) {
    throw ValidationError("design matrix dimensions are inconsistent");
  }
  if (n <= p) {
    throw ValidationError("OLS needs more rows than parameters; got " +
                          std::to_string(n) + " rows for " + std::to_string(p) +
                          " parameters");
  }

  Eigen::MatrixXd X(n, p);
  Eigen::VectorXd y(n);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < p; ++c) X(r, c) = data.at(r, c);
    y(r) = data.y[r];
  }

  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
  qr.setThreshold(1e-10);
  if (std::size_t(qr.rank()) < p) {
    const auto perm = qr.colsPermutation().indices();
    std::string cols;
    for (Eigen::Index i = qr.rank(); i < Eigen::Index(p); ++i) {
      if (!cols.empty()) cols += ", ";
      cols += data.labels[perm[i]];
    }
    throw ValidationError("design matrix is rank deficient (rank " +
                          std::to_string(qr.rank()) + " of " +
                          std::to_string(p) + "); collinear columns: " + cols);
  }

  const Eigen::VectorXd beta = qr.solve(y);
  const Eigen::VectorXd resid = y - X * beta;
  const double rss = resid.squaredNorm();
  const double tss = (y.array() - y.mean()).matrix().squaredNorm();
  if (tss <= 0.0) {
    throw ValidationError("response has zero variance; the model is undefined");
  }

  // X P = Q R  =>  (X^T X)^-1 = P R^-1 R^-T P^T.
  const Eigen::MatrixXd R =
      qr.matrixR().topLeftCorner(p, p).triangularView<Eigen::Upper>();
  const Eigen::MatrixXd Rinv =
      R.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(p, p));
  const Eigen::MatrixXd unpermuted = Rinv * Rinv.transpose();
  const Eigen::MatrixXd xtx_inv =
      qr.colsPermutation() * unpermuted * qr.colsPermutation().transpose();

  RegressionResult result;
  result.n_observations = n;
  result.df_residuals = n - p;
  const double df = double(result.df_residuals);
  const double sigma2 = rss / df;
  const double t_crit = student_t_critical(df, 0.05);

  result.coefficients.resize(p);
  for (std::size_t j = 0; j < p; ++j) {
    CoefficientEstimate& c = result.coefficients[j];
    c.label = data.labels[j];
    c.coef = beta(j);
    c.std_error = std::sqrt(sigma2 * xtx_inv(j, j));
    c.t_value = c.coef / c.std_error;
    c.p_value = student_t_two_sided_p(c.t_value, df);
    c.ci_low = c.coef - t_crit * c.std_error;
    c.ci_high = c.coef + t_crit * c.std_error;
  }

  result.r_squared = 1.0 - rss / tss;
  result.adj_r_squared =
      1.0 - (1.0 - result.r_squared) * double(n - 1) / df;
  const double df_model = double(p - 1);
  result.f_statistic = ((tss - rss) / df_model) / (rss / df);
  result.f_pvalue = f_sf(result.f_statistic, df_model, df);
  result.log_likelihood =
      -0.5 * double(n) * (std::log(2.0 * kPi) + std::log(rss / double(n)) + 1.0);
  result.residuals.assign(resid.data(), resid.data() + n);
  return result;
}

JenksResult jenks_breaks(std::vector<double> values, int classes) {
  if (values.empty()) {
    throw ValidationError("jenks_breaks needs at least one value");
  }
  if (classes < 2) {
    throw ValidationError("jenks_breaks needs >= 2 classes, got " +
                          std::to_string(classes));
  }
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  std::size_t distinct = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (values[i] != values[i - 1]) ++distinct;
  }
  if (std::size_t(classes) > distinct) {
    throw ValidationError("jenks_breaks: " + std::to_string(classes) +
                          " classes exceed " + std::to_string(distinct) +
                          " distinct values");
  }

  // Prefix sums for O(1) within-class SSD of values[i..j] (0-based,
  // inclusive).
  std::vector<double> sum(n + 1, 0.0), sumsq(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    sum[i + 1] = sum[i] + values[i];
    sumsq[i + 1] = sumsq[i] + values[i] * values[i];
  }
  const auto ssd = [&](std::size_t i, std::size_t j) {
    const double s = sum[j + 1] - sum[i];
    const double s2 = sumsq[j + 1] - sumsq[i];
    const double len = double(j - i + 1);
    return s2 - s * s / len;
  };

  const std::size_t k = std::size_t(classes);
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // cost[c][j]: best SSD for the first j values split into c classes.
  std::vector<std::vector<double>> cost(k + 1, std::vector<double>(n + 1, kInf));
  std::vector<std::vector<std::size_t>> split(k + 1,
                                              std::vector<std::size_t>(n + 1, 0));
  for (std::size_t j = 1; j <= n; ++j) cost[1][j] = ssd(0, j - 1);
  for (std::size_t c = 2; c <= k; ++c) {
    for (std::size_t j = c; j <= n; ++j) {
      for (std::size_t i = c; i <= j; ++i) {
        // Last class is values[i-1 .. j-1]; classes stay nonempty.
        const double candidate = cost[c - 1][i - 1] + ssd(i - 1, j - 1);
        if (candidate < cost[c][j]) {
          cost[c][j] = candidate;
          split[c][j] = i - 1;  // elements before the last class
        }
      }
    }
  }

  JenksResult result;
  result.within_class_ssd = cost[k][n];
  std::vector<std::size_t> boundaries(k + 1, 0);
  boundaries[k] = n;
  for (std::size_t c = k; c >= 2; --c) {
    boundaries[c - 1] = split[c][boundaries[c]];
  }
  for (std::size_t c = 1; c <= k; ++c) {
    result.class_sizes.push_back(boundaries[c] - boundaries[c - 1]);
    if (c < k) result.breaks.push_back(values[boundaries[c] - 1]);
  }
  return result;
}

double pearson_corr(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) {
    throw ValidationError("pearson_corr requires equal-length series, got " +
                          std::to_string(a.size()) + " and " +
                          std::to_string(b.size()));
  }
  const std::size_t n = a.size();
  if (n < 2) {
    throw ValidationError("pearson_corr requires >= 2 points");
  }
  double mean_a = 0.0, mean_b = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= double(n);
  mean_b /= double(n);
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = a[i] - mean_a;
    const double db = b[i] - mean_b;
    sab += da * db;
    saa += da * da;
    sbb += db * db;
  }
  if (saa == 0.0 || sbb == 0.0) {
    throw ValidationError("pearson_corr undefined: a series has zero variance");
  }
  return sab / std::sqrt(saa * sbb);
}

}  // namespace svip
