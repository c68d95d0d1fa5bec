#pragma once

#include <array>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "svip/aggregate.hpp"
#include "svip/timestamp.hpp"

namespace svip {

enum class Season { Fall, Spring, Summer, Winter };

/// Meteorological seasons: Dec-Feb Winter, Mar-May Spring, Jun-Aug Summer,
/// Sep-Nov Fall (the regression baseline).
Season season_of(const CivilDate& d);
std::string to_string(Season s);

/// Census-tract covariates joined by GEOID.
struct TractAttributes {
  std::string geoid;
  double median_income = 0.0;
  double pct_white = 0.0;  // proportion in [0, 1]
};

/// CSV with header `geoid,median_income,pct_white`.
std::vector<TractAttributes> load_tract_attributes(
    const std::filesystem::path& path);

struct EncodingConfig {
  CivilDate vaccine_date{2021, 4, 15};
  /// Four ascending cut points defining brackets 1..5. Empty = derive
  /// quintiles from the attribute table's incomes.
  std::vector<double> income_thresholds;
  double white_threshold = 0.555;
};

/// One categorical-coded row of the regression dataset.
struct EncodedObservation {
  double y = 0.0;  // detections per image
  std::array<double, kMaxSubsetK> subset_y{};
  bool vaccine = false;
  Season season = Season::Fall;
  bool weekend = false;
  int income_bracket = 1;  // 1..5, 1 is the baseline
  bool white_majority = false;
};

/// Linear-interpolation quantiles at p = 0.2, 0.4, 0.6, 0.8.
std::vector<double> quintile_thresholds(std::vector<double> values);

/// Bracket 1 + number of thresholds strictly below the value.
int income_bracket_of(double income, std::span<const double> thresholds);

/// Applies the categorical coding rules. Observations whose GEOID is absent
/// from the attribute table are dropped (encode returns nullopt; callers
/// count the drops).
class Encoder {
 public:
  Encoder(EncodingConfig config, const std::vector<TractAttributes>& attributes);

  std::optional<EncodedObservation> encode(const SurveyObservation& obs) const;
  const std::vector<double>& income_thresholds() const { return thresholds_; }

 private:
  EncodingConfig config_;
  std::vector<double> thresholds_;
  std::unordered_map<std::string, TractAttributes> by_geoid_;
};

/// A dense design matrix with labeled columns.
struct Dataset {
  std::vector<std::string> labels;  // size = cols
  std::vector<double> x;            // row-major, rows x cols
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> y;

  double at(std::size_t r, std::size_t c) const { return x[r * cols + c]; }
};

/// Builds the Eq-style design matrix: intercept, season dummies (Fall
/// baseline), vaccine, weekend, income bracket dummies (bracket 1
/// baseline), white majority. Dummy columns are emitted only for levels
/// present in the data. subset_k = 0 selects detections per image as the
/// response; 1..4 select the subset ratios.
Dataset build_design(const std::vector<EncodedObservation>& rows, int subset_k);

struct CoefficientEstimate {
  std::string label;
  double coef = 0.0;
  double std_error = 0.0;
  double t_value = 0.0;
  double p_value = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
};

struct RegressionResult {
  std::vector<CoefficientEstimate> coefficients;
  double r_squared = 0.0;
  double adj_r_squared = 0.0;
  double f_statistic = 0.0;
  double f_pvalue = 0.0;
  double log_likelihood = 0.0;
  std::size_t n_observations = 0;
  std::size_t df_residuals = 0;
  std::vector<double> residuals;
};

/// Ordinary least squares via column-pivoted Householder QR. Standard
/// errors from sigma^2 (X^T X)^-1, two-sided t p-values, the all-slopes
/// F test, Gaussian log-likelihood and 95% confidence intervals. Rank
/// deficiency raises an error naming the collinear columns.
RegressionResult ols_fit(const Dataset& data);

/// Fisher's exact dynamic program minimizing total within-class sum of
/// squared deviations over contiguous classes of the sorted values. Break
/// values are the maximum of each lower class.
struct JenksResult {
  std::vector<double> breaks;  // classes - 1 values
  double within_class_ssd = 0.0;
  std::vector<std::size_t> class_sizes;
};

JenksResult jenks_breaks(std::vector<double> values, int classes = 2);

/// Sample Pearson correlation. Throws on length mismatch, n < 2, or zero
/// variance in either series.
double pearson_corr(std::span<const double> a, std::span<const double> b);

}  // namespace svip
