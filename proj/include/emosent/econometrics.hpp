#pragma once

#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "emosent/series.hpp"

namespace emosent {

struct AlignedRow {
    Date x_date;              ///< y is observed at x_date + lag
    std::vector<double> x;    ///< one value per predictor
    double y = 0.0;
};

struct AlignedSample {
    int lag_days = 0;
    std::vector<std::string> predictors;
    std::string response;
    std::vector<AlignedRow> rows;

    std::vector<double> column(std::size_t predictor) const;
    std::vector<double> responses() const;
};

/// Pairs predictor values at date d with the response at d + lag_days for
/// every d where all of them exist; other dates are dropped. Throws
/// ModelError when no date survives.
AlignedSample align(const std::vector<DatedSeries>& predictors, const DatedSeries& response, int lag_days,
                    std::vector<std::string> predictor_names = {}, std::string response_name = "y");
AlignedSample align(const DatedSeries& predictor, const DatedSeries& response, int lag_days,
                    std::string predictor_name = "x", std::string response_name = "y");

enum class ModelKind { ols, logit };

struct Coefficient {
    std::string name;
    double estimate = 0.0;
    double std_error = 0.0;
    double statistic = 0.0;  ///< t (ols) or z (logit)
    double p_value = 1.0;    ///< two-sided
    std::string stars;
};

struct RegressionReport {
    ModelKind model = ModelKind::ols;
    std::string response;
    int lag_days = 0;
    std::vector<Coefficient> coefficients;  ///< intercept first
    std::size_t n_obs = 0;
    bool robust = false;

    // ols
    double r_squared = 0.0;
    double adj_r_squared = 0.0;
    std::vector<double> residuals;

    // logit
    double pseudo_r_squared = 0.0;  ///< McFadden: 1 - ll / ll_null
    double log_likelihood = 0.0;
    double null_log_likelihood = 0.0;
    int iterations = 0;
    double score_norm = 0.0;  ///< Euclidean norm of the gradient at the solution
    bool converged = true;
    bool separation = false;  ///< estimates do not exist; numbers are the last iterate
    std::string note;

    double fit_statistic() const { return model == ModelKind::ols ? adj_r_squared : pseudo_r_squared; }
    const Coefficient& slope(std::size_t i = 0) const { return coefficients.at(i + 1); }
};

struct FitOptions {
    bool robust = false;  ///< HC1 (ols) / sandwich (logit) standard errors
};

/// "*" for p < 0.1, "**" for p < 0.05, "***" for p < 0.01.
std::string significance_stars(double p_value);

/// Two-sided p-value of a t statistic with `df` degrees of freedom.
double t_p_value(double t, double df);
/// Two-sided p-value of a standard-normal statistic.
double normal_p_value(double z);

/// Least squares with intercept. Classical standard errors and t-based
/// p-values (n - k - 1 df). Throws ModelError with fewer than 3 rows, fewer
/// rows than parameters + 1, a constant predictor, or a rank-deficient design.
RegressionReport ols_fit(const AlignedSample& sample, FitOptions options = {});

struct LogitOptions {
    FitOptions fit;
    double tolerance = 1e-8;  ///< stop when |ll change| falls below this
    int max_iterations = 100;
};

/// Binomial GLM with logit link fit by iteratively reweighted least squares
/// (Newton-Raphson with step halving). Standard errors from the observed
/// information, normal p-values. Throws ModelError on a non-binary response,
/// a single-class response, or a rank-deficient design. Complete or
/// quasi-complete separation is reported through `separation`, never as a
/// silent estimate.
RegressionReport logit_fit(const AlignedSample& sample, LogitOptions options = {});

/// Affine map onto [-1, 1]: 2 (x - min) / (max - min) - 1. Throws on
/// constant or empty input.
std::vector<double> rescale_signed(std::span<const double> xs);

/// 0.5 * ln((1 + r) / (1 - r)); throws ModelError unless |r| < 1.
double fisher_z(double r);

/// Sample correlation. Throws on length mismatch, fewer than two points, or
/// a constant series.
double pearson_correlation(std::span<const double> xs, std::span<const double> ys);

struct PredictorComparison {
    RegressionReport first_only;
    RegressionReport second_only;
    RegressionReport joint;
};

/// Two-predictor sample (e.g. text sentiment, emoji sentiment): each predictor
/// alone and both jointly, on the same rows. With `rescale`, each predictor
/// is first mapped onto [-1, 1] using the sample's own min and max.
PredictorComparison compare_predictors(const AlignedSample& sample, bool rescale = true, FitOptions options = {});

nlohmann::ordered_json report_json(const RegressionReport& report);

struct TableColumn {
    std::string label;
    const RegressionReport* report;
};

/// Plain-text regression table: one column per model, coefficient with
/// stars over its standard error in parentheses, then lag, observations
/// and the fit statistic.
std::string format_table(const std::string& title, const std::vector<TableColumn>& columns);

}  // namespace emosent
