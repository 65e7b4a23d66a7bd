#include "emosent/econometrics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <Eigen/Dense>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "emosent/error.hpp"

namespace emosent {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// --- alignment -------------------------------------------------------------

std::vector<double> AlignedSample::column(std::size_t predictor) const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.x.at(predictor));
    return out;
}

std::vector<double> AlignedSample::responses() const {
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r.y);
    return out;
}

AlignedSample align(const std::vector<DatedSeries>& predictors, const DatedSeries& response, int lag_days,
                    std::vector<std::string> predictor_names, std::string response_name) {
    if (predictors.empty()) throw ModelError("align: no predictors");
    AlignedSample out;
    out.lag_days = lag_days;
    out.response = std::move(response_name);
    out.predictors = std::move(predictor_names);
    for (std::size_t i = out.predictors.size(); i < predictors.size(); ++i)
        out.predictors.push_back("x" + std::to_string(i + 1));

    const std::chrono::days lag{lag_days};
    for (const auto& point : predictors.front()) {
        auto y = value_at(response, point.date + lag);
        if (!y) continue;
        AlignedRow row;
        row.x_date = point.date;
        row.y = *y;
        row.x.push_back(point.value);
        bool complete = true;
        for (std::size_t j = 1; j < predictors.size() && complete; ++j) {
            auto v = value_at(predictors[j], point.date);
            if (v) row.x.push_back(*v);
            else complete = false;
        }
        if (complete) out.rows.push_back(std::move(row));
    }
    if (out.rows.empty()) throw ModelError("align: predictor and response dates do not overlap at lag " +
                                           std::to_string(lag_days));
    return out;
}

AlignedSample align(const DatedSeries& predictor, const DatedSeries& response, int lag_days,
                    std::string predictor_name, std::string response_name) {
    return align(std::vector<DatedSeries>{predictor}, response, lag_days, {std::move(predictor_name)},
                 std::move(response_name));
}

// --- inference helpers -----------------------------------------------------

std::string significance_stars(double p) {
    if (p < 0.01) return "***";
    if (p < 0.05) return "**";
    if (p < 0.1) return "*";
    return "";
}

double t_p_value(double t, double df) {
    if (std::isnan(t)) return 1.0;
    if (!std::isfinite(t)) return 0.0;
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t)));
}

double normal_p_value(double z) {
    if (std::isnan(z)) return 1.0;
    if (!std::isfinite(z)) return 0.0;
    boost::math::normal dist;
    return 2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(z)));
}

namespace {

struct Design {
    MatrixXd x;  // n x (k + 1), first column ones
    VectorXd y;
};

Design make_design(const AlignedSample& sample) {
    const auto n = static_cast<Eigen::Index>(sample.rows.size());
    const auto k = static_cast<Eigen::Index>(sample.predictors.size());
    Design d{MatrixXd(n, k + 1), VectorXd(n)};
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = sample.rows[static_cast<std::size_t>(i)];
        if (static_cast<Eigen::Index>(row.x.size()) != k) throw ModelError("ragged predictor rows");
        d.x(i, 0) = 1.0;
        for (Eigen::Index j = 0; j < k; ++j) d.x(i, j + 1) = row.x[static_cast<std::size_t>(j)];
        d.y(i) = row.y;
    }
    for (Eigen::Index j = 1; j <= k; ++j) {
        if (d.x.col(j).maxCoeff() == d.x.col(j).minCoeff())
            throw ModelError("constant predictor '" + sample.predictors[static_cast<std::size_t>(j - 1)] +
                             "' (singular design)");
    }
    if (!d.x.allFinite() || !d.y.allFinite()) throw ModelError("non-finite value in regression sample");
    return d;
}

// Rank check on the column-scaled design so units do not matter.
void require_full_rank(const MatrixXd& x) {
    VectorXd scale = x.colwise().norm().transpose();
    MatrixXd xs = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) xs.col(j) /= scale(j);
    Eigen::ColPivHouseholderQR<MatrixXd> qr(xs);
    qr.setThreshold(1e-10);
    if (qr.rank() < x.cols()) throw ModelError("singular design: predictors are collinear");
}

std::vector<std::string> coefficient_names(const AlignedSample& s) {
    std::vector<std::string> names{"Intercept"};
    names.insert(names.end(), s.predictors.begin(), s.predictors.end());
    return names;
}

}  // namespace

// --- OLS -------------------------------------------------------------------

RegressionReport ols_fit(const AlignedSample& sample, FitOptions options) {
    const std::size_t n = sample.rows.size();
    const std::size_t p = sample.predictors.size() + 1;
    if (n < 3) throw ModelError("OLS needs at least 3 rows (got " + std::to_string(n) + ")");
    if (n <= p) throw ModelError("OLS needs more rows than parameters");
    auto d = make_design(sample);
    require_full_rank(d.x);

    Eigen::ColPivHouseholderQR<MatrixXd> qr(d.x);
    VectorXd beta = qr.solve(d.y);
    VectorXd resid = d.y - d.x * beta;

    // (X'X)^-1 = P R^-1 R^-T P^T
    const auto pp = static_cast<Eigen::Index>(p);
    MatrixXd r = qr.matrixR().topLeftCorner(pp, pp).triangularView<Eigen::Upper>();
    MatrixXd rinv = r.triangularView<Eigen::Upper>().solve(MatrixXd::Identity(pp, pp));
    MatrixXd xtx_inv_perm = rinv * rinv.transpose();
    MatrixXd xtx_inv = qr.colsPermutation() * xtx_inv_perm * qr.colsPermutation().transpose();

    const double df = static_cast<double>(n - p);
    const double ssr = resid.squaredNorm();
    MatrixXd cov;
    if (options.robust) {
        MatrixXd meat = MatrixXd::Zero(pp, pp);
        for (Eigen::Index i = 0; i < d.x.rows(); ++i) meat += resid(i) * resid(i) * d.x.row(i).transpose() * d.x.row(i);
        cov = xtx_inv * meat * xtx_inv * (static_cast<double>(n) / df);
    } else {
        cov = xtx_inv * (ssr / df);
    }

    const double ybar = d.y.mean();
    const double sst = (d.y.array() - ybar).square().sum();

    RegressionReport rep;
    rep.model = ModelKind::ols;
    rep.response = sample.response;
    rep.lag_days = sample.lag_days;
    rep.n_obs = n;
    rep.robust = options.robust;
    rep.r_squared = sst > 0.0 ? std::clamp(1.0 - ssr / sst, 0.0, 1.0) : 0.0;
    rep.adj_r_squared = 1.0 - (1.0 - rep.r_squared) * static_cast<double>(n - 1) / df;
    rep.residuals.assign(resid.data(), resid.data() + resid.size());

    const auto names = coefficient_names(sample);
    for (Eigen::Index j = 0; j < pp; ++j) {
        Coefficient c;
        c.name = names[static_cast<std::size_t>(j)];
        c.estimate = beta(j);
        c.std_error = std::sqrt(std::max(cov(j, j), 0.0));
        c.statistic = c.std_error > 0.0 ? c.estimate / c.std_error
                                        : (c.estimate == 0.0 ? 0.0 : std::copysign(INFINITY, c.estimate));
        c.p_value = t_p_value(c.statistic, df);
        c.stars = significance_stars(c.p_value);
        rep.coefficients.push_back(std::move(c));
    }
    return rep;
}

// --- logit -----------------------------------------------------------------

namespace {

double log_sigmoid(double eta) { return eta >= 0 ? -std::log1p(std::exp(-eta)) : eta - std::log1p(std::exp(eta)); }

double sigmoid(double eta) {
    if (eta >= 0) return 1.0 / (1.0 + std::exp(-eta));
    const double e = std::exp(eta);
    return e / (1.0 + e);
}

double log_likelihood(const MatrixXd& x, const VectorXd& y, const VectorXd& beta) {
    VectorXd eta = x * beta;
    double ll = 0.0;
    for (Eigen::Index i = 0; i < eta.size(); ++i)
        ll += y(i) > 0.5 ? log_sigmoid(eta(i)) : log_sigmoid(-eta(i));
    return ll;
}

// Single-predictor separation: some threshold on x splits the classes, with
// ties at the threshold allowed (quasi-complete).
bool separated_1d(const VectorXd& x, const VectorXd& y) {
    double min0 = INFINITY, max0 = -INFINITY, min1 = INFINITY, max1 = -INFINITY;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (y(i) > 0.5) {
            min1 = std::min(min1, x(i));
            max1 = std::max(max1, x(i));
        } else {
            min0 = std::min(min0, x(i));
            max0 = std::max(max0, x(i));
        }
    }
    return max0 <= min1 || max1 <= min0;
}

}  // namespace

RegressionReport logit_fit(const AlignedSample& sample, LogitOptions options) {
    const std::size_t n = sample.rows.size();
    const std::size_t p = sample.predictors.size() + 1;
    if (n < p + 1) throw ModelError("logit needs more rows than parameters");
    auto d = make_design(sample);
    std::size_t ones = 0;
    for (Eigen::Index i = 0; i < d.y.size(); ++i) {
        if (d.y(i) != 0.0 && d.y(i) != 1.0) throw ModelError("logit response must be 0 or 1");
        if (d.y(i) == 1.0) ++ones;
    }
    if (ones == 0 || ones == n) throw ModelError("single-class response");
    require_full_rank(d.x);

    const auto pp = static_cast<Eigen::Index>(p);
    const double ybar = static_cast<double>(ones) / static_cast<double>(n);

    RegressionReport rep;
    rep.model = ModelKind::logit;
    rep.response = sample.response;
    rep.lag_days = sample.lag_days;
    rep.n_obs = n;
    rep.robust = options.fit.robust;
    rep.null_log_likelihood =
        static_cast<double>(n) * (ybar * std::log(ybar) + (1.0 - ybar) * std::log(1.0 - ybar));

    VectorXd beta = VectorXd::Zero(pp);
    beta(0) = std::log(ybar / (1.0 - ybar));
    double ll = log_likelihood(d.x, d.y, beta);

    auto gradient_and_hessian = [&](const VectorXd& b, VectorXd& grad, MatrixXd& info) {
        VectorXd eta = d.x * b;
        grad = VectorXd::Zero(pp);
        info = MatrixXd::Zero(pp, pp);
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double mu = sigmoid(eta(i));
            const double w = mu * (1.0 - mu);
            grad += (d.y(i) - mu) * d.x.row(i).transpose();
            info += w * d.x.row(i).transpose() * d.x.row(i);
        }
    };

    VectorXd grad;
    MatrixXd info;
    bool converged = false;
    int iter = 0;
    while (iter < options.max_iterations) {
        ++iter;
        gradient_and_hessian(beta, grad, info);
        Eigen::LDLT<MatrixXd> ldlt(info);
        if (ldlt.info() != Eigen::Success) break;
        VectorXd step = ldlt.solve(grad);
        // Weighted least-squares update; halve until the likelihood does not drop.
        double t = 1.0;
        VectorXd next = beta + step;
        double ll_next = log_likelihood(d.x, d.y, next);
        while (!(ll_next >= ll - 1e-12) && t > 1e-10) {
            t /= 2.0;
            next = beta + t * step;
            ll_next = log_likelihood(d.x, d.y, next);
        }
        const double change = std::abs(ll_next - ll);
        beta = next;
        ll = ll_next;
        if (change < options.tolerance) {
            converged = true;
            break;
        }
    }
    // Polish: a few more Newton steps drive the score to round-off level
    // without changing the convergence verdict.
    for (int k = 0; converged && k < 5; ++k) {
        gradient_and_hessian(beta, grad, info);
        if (grad.norm() < 1e-12) break;
        VectorXd step = info.ldlt().solve(grad);
        VectorXd next = beta + step;
        double ll_next = log_likelihood(d.x, d.y, next);
        if (!(ll_next >= ll - 1e-12)) break;
        beta = next;
        ll = ll_next;
    }
    gradient_and_hessian(beta, grad, info);

    bool separation = p == 2 && separated_1d(d.x.col(1), d.y);
    if (!separation) {
        // Multi-predictor designs: divergence signatures of separation.
        if (!converged || ll > -1e-6) separation = true;
        for (Eigen::Index j = 1; j < pp && !separation; ++j) {
            const double mean = d.x.col(j).mean();
            const double sd = std::sqrt((d.x.col(j).array() - mean).square().sum() / static_cast<double>(n - 1));
            if (std::abs(beta(j)) * sd > 20.0) separation = true;
        }
    }

    rep.iterations = iter;
    rep.log_likelihood = ll;
    rep.pseudo_r_squared = 1.0 - ll / rep.null_log_likelihood;
    rep.score_norm = grad.norm();
    rep.converged = converged && !separation;
    rep.separation = separation;
    if (separation)
        rep.note = "complete or quasi-complete separation: maximum-likelihood estimates do not exist";
    else if (!converged)
        rep.note = "did not converge in " + std::to_string(options.max_iterations) + " iterations";

    MatrixXd info_inv = info.ldlt().solve(MatrixXd::Identity(pp, pp));
    MatrixXd cov = info_inv;
    if (options.fit.robust) {
        VectorXd eta = d.x * beta;
        MatrixXd meat = MatrixXd::Zero(pp, pp);
        for (Eigen::Index i = 0; i < eta.size(); ++i) {
            const double r = d.y(i) - sigmoid(eta(i));
            meat += r * r * d.x.row(i).transpose() * d.x.row(i);
        }
        cov = info_inv * meat * info_inv;
    }

    const auto names = coefficient_names(sample);
    for (Eigen::Index j = 0; j < pp; ++j) {
        Coefficient c;
        c.name = names[static_cast<std::size_t>(j)];
        c.estimate = beta(j);
        c.std_error = std::sqrt(std::max(cov(j, j), 0.0));
        c.statistic = c.std_error > 0.0 ? c.estimate / c.std_error : 0.0;
        c.p_value = normal_p_value(c.statistic);
        c.stars = separation ? "" : significance_stars(c.p_value);
        rep.coefficients.push_back(std::move(c));
    }
    return rep;
}

// --- small statistics ------------------------------------------------------

std::vector<double> rescale_signed(std::span<const double> xs) {
    if (xs.empty()) throw ModelError("rescale of empty series");
    auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
    const double lo = *lo_it, hi = *hi_it;
    if (!(hi > lo)) throw ModelError("rescale of constant series");
    std::vector<double> out;
    out.reserve(xs.size());
    for (double x : xs) {
        double v = 2.0 * (x - lo) / (hi - lo) - 1.0;
        if (x == lo) v = -1.0;
        if (x == hi) v = 1.0;
        out.push_back(std::clamp(v, -1.0, 1.0));
    }
    return out;
}

double fisher_z(double r) {
    if (!(std::abs(r) < 1.0)) throw ModelError("fisher_z needs |r| < 1");
    return std::atanh(r);
}

double pearson_correlation(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size()) throw ModelError("correlation: length mismatch");
    if (xs.size() < 2) throw ModelError("correlation needs at least two points");
    const auto n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw ModelError("correlation of a constant series");
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

PredictorComparison compare_predictors(const AlignedSample& sample, bool rescale, FitOptions options) {
    if (sample.predictors.size() != 2) throw ModelError("compare_predictors needs exactly two predictors");
    AlignedSample both = sample;
    if (rescale) {
        for (std::size_t j = 0; j < 2; ++j) {
            auto scaled = rescale_signed(sample.column(j));
            for (std::size_t i = 0; i < both.rows.size(); ++i) both.rows[i].x[j] = scaled[i];
        }
    }
    auto single = [&](std::size_t j) {
        AlignedSample s;
        s.lag_days = both.lag_days;
        s.response = both.response;
        s.predictors = {both.predictors[j]};
        for (const auto& r : both.rows) s.rows.push_back({r.x_date, {r.x[j]}, r.y});
        return s;
    };
    PredictorComparison out;
    out.joint = ols_fit(both, options);
    out.first_only = ols_fit(single(0), options);
    out.second_only = ols_fit(single(1), options);
    return out;
}

// --- output ----------------------------------------------------------------

nlohmann::ordered_json report_json(const RegressionReport& r) {
    nlohmann::ordered_json j;
    j["model"] = r.model == ModelKind::ols ? "ols" : "logit";
    j["response"] = r.response;
    j["lag_days"] = r.lag_days;
    j["n_obs"] = r.n_obs;
    j["std_errors"] = r.model == ModelKind::ols ? (r.robust ? "HC1" : "classical")
                                                 : (r.robust ? "sandwich" : "observed information");
    j["p_values"] = r.model == ModelKind::ols ? "student t" : "normal";
    auto coefs = nlohmann::ordered_json::array();
    for (const auto& c : r.coefficients) {
        nlohmann::ordered_json cj;
        cj["name"] = c.name;
        cj["estimate"] = c.estimate;
        cj["std_error"] = c.std_error;
        cj["statistic"] = c.statistic;
        cj["p_value"] = c.p_value;
        cj["stars"] = c.stars;
        coefs.push_back(std::move(cj));
    }
    j["coefficients"] = std::move(coefs);
    if (r.model == ModelKind::ols) {
        j["r_squared"] = r.r_squared;
        j["adj_r_squared"] = r.adj_r_squared;
    } else {
        j["pseudo_r_squared"] = r.pseudo_r_squared;
        j["pseudo_r_squared_kind"] = "McFadden";
        j["log_likelihood"] = r.log_likelihood;
        j["null_log_likelihood"] = r.null_log_likelihood;
        j["iterations"] = r.iterations;
        j["score_norm"] = r.score_norm;
        j["converged"] = r.converged;
        j["separation"] = r.separation;
    }
    if (!r.note.empty()) j["note"] = r.note;
    return j;
}

namespace {

std::string table_number(double v) {
    char buf[64];
    const double a = std::abs(v);
    if (a != 0.0 && (a >= 1e4 || a < 1e-3)) std::snprintf(buf, sizeof buf, "%.3e", v);
    else std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

std::string pad_right(const std::string& s, std::size_t width) {
    return s.size() >= width ? s + " " : s + std::string(width - s.size(), ' ');
}

}  // namespace

std::string format_table(const std::string& title, const std::vector<TableColumn>& columns) {
    constexpr std::size_t label_w = 18, col_w = 22;
    std::ostringstream out;
    out << title << '\n';
    out << pad_right("", label_w);
    for (std::size_t i = 0; i < columns.size(); ++i)
        out << pad_right("(" + std::to_string(i + 1) + ") " + columns[i].label, col_w);
    out << '\n';
    out << pad_right("Y", label_w);
    for (const auto& c : columns) out << pad_right(c.report->response, col_w);
    out << '\n';

    // Union of coefficient names across columns, slopes first, intercept last.
    std::vector<std::string> names;
    for (const auto& c : columns)
        for (std::size_t k = 1; k < c.report->coefficients.size(); ++k)
            if (std::find(names.begin(), names.end(), c.report->coefficients[k].name) == names.end())
                names.push_back(c.report->coefficients[k].name);
    names.push_back("Intercept");

    for (const auto& name : names) {
        std::string est_line = pad_right(name, label_w), se_line = pad_right("", label_w);
        for (const auto& c : columns) {
            auto it = std::find_if(c.report->coefficients.begin(), c.report->coefficients.end(),
                                   [&](const Coefficient& x) { return x.name == name; });
            if (it == c.report->coefficients.end() || c.report->separation) {
                est_line += pad_right(c.report->separation ? "n/a" : "-", col_w);
                se_line += pad_right("", col_w);
            } else {
                est_line += pad_right(table_number(it->estimate) + it->stars, col_w);
                se_line += pad_right("(" + table_number(it->std_error) + ")", col_w);
            }
        }
        out << est_line << '\n' << se_line << '\n';
    }
    std::string lag = pad_right("Lag", label_w), obs = pad_right("Observation", label_w);
    bool any_logit = false, any_ols = false;
    for (const auto& c : columns) {
        lag += pad_right(std::to_string(c.report->lag_days), col_w);
        obs += pad_right(std::to_string(c.report->n_obs), col_w);
        any_logit |= c.report->model == ModelKind::logit;
        any_ols |= c.report->model == ModelKind::ols;
    }
    out << lag << '\n' << obs << '\n';
    if (any_logit) {
        std::string line = pad_right("Pseudo_R2", label_w);
        for (const auto& c : columns) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", c.report->pseudo_r_squared);
            line += pad_right(c.report->model == ModelKind::logit ? buf : "", col_w);
        }
        out << line << '\n';
    }
    if (any_ols) {
        std::string line = pad_right("Adj_R2", label_w);
        for (const auto& c : columns) {
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.3f", c.report->adj_r_squared);
            line += pad_right(c.report->model == ModelKind::ols ? buf : "", col_w);
        }
        out << line << '\n';
    }
    for (const auto& c : columns)
        if (!c.report->note.empty()) out << "note (" << c.label << "): " << c.report->note << '\n';
    out << "Significance: * p<0.1, ** p<0.05, *** p<0.01";
    if (any_logit) out << "; pseudo R2 is McFadden's";
    out << '\n';
    return out.str();
}

}  // namespace emosent
