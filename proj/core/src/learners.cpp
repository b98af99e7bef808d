#include "goliath/learners.hpp"

#include "goliath/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace goliath {

namespace {

void column_moments(const Matrix& x, std::vector<double>& centre, std::vector<double>& scale) {
    centre.assign(x.cols(), 0.0);
    scale.assign(x.cols(), 1.0);
    for (std::size_t j = 0; j < x.cols(); ++j) {
        const auto col = x.column(j);
        centre[j] = stats::mean(col);
        const double sd = stats::stddev(col);
        if (sd > 0.0) scale[j] = sd;
    }
}

void require_fit_input(const Matrix& x, std::span<const double> y) {
    if (x.rows() == 0) throw std::invalid_argument("learner: empty training set");
    if (y.size() != x.rows()) throw std::invalid_argument("learner: target length differs from row count");
}

// Solves the symmetric positive definite system a x = b in place (Cholesky).
std::vector<double> cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t p) {
    for (std::size_t j = 0; j < p; ++j) {
        double d = a[j * p + j];
        for (std::size_t k = 0; k < j; ++k) d -= a[j * p + k] * a[j * p + k];
        if (!(d > 0.0)) throw std::runtime_error("ridge: system is not positive definite");
        const double l = std::sqrt(d);
        a[j * p + j] = l;
        for (std::size_t i = j + 1; i < p; ++i) {
            double s = a[i * p + j];
            for (std::size_t k = 0; k < j; ++k) s -= a[i * p + k] * a[j * p + k];
            a[i * p + j] = s / l;
        }
    }
    for (std::size_t i = 0; i < p; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= a[i * p + k] * b[k];
        b[i] = s / a[i * p + i];
    }
    for (std::size_t i = p; i-- > 0;) {
        double s = b[i];
        for (std::size_t k = i + 1; k < p; ++k) s -= a[k * p + i] * b[k];
        b[i] = s / a[i * p + i];
    }
    return b;
}

} // namespace

std::string to_string(LearnerKind kind) {
    switch (kind) {
    case LearnerKind::Forest: return "forest";
    case LearnerKind::Ridge: return "ridge";
    case LearnerKind::Knn: return "knn";
    }
    return "forest";
}

LearnerKind parse_learner(const std::string& text) {
    if (text == "forest") return LearnerKind::Forest;
    if (text == "ridge") return LearnerKind::Ridge;
    if (text == "knn" || text == "knn-regressor") return LearnerKind::Knn;
    throw std::invalid_argument("unknown learner '" + text + "'");
}

void RidgeRegressor::fit(const Matrix& x, std::span<const double> y) {
    require_fit_input(x, y);
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    column_moments(x, centre_, scale_);
    intercept_ = stats::mean(y);
    std::vector<double> gram(p * p, 0.0);
    std::vector<double> rhs(p, 0.0);
    std::vector<double> z(p);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) z[j] = (x(i, j) - centre_[j]) / scale_[j];
        for (std::size_t a = 0; a < p; ++a) {
            rhs[a] += z[a] * (y[i] - intercept_);
            for (std::size_t b = 0; b <= a; ++b) gram[a * p + b] += z[a] * z[b];
        }
    }
    double trace = 0.0;
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = 0; b < a; ++b) gram[b * p + a] = gram[a * p + b];
        trace += gram[a * p + a];
    }
    // Constant columns leave a zero trace contribution; keep the system definite.
    const double lambda = std::max(1e-3 * trace / static_cast<double>(std::max<std::size_t>(p, 1)), 1e-12);
    for (std::size_t a = 0; a < p; ++a) gram[a * p + a] += lambda;
    beta_ = p == 0 ? std::vector<double>{} : cholesky_solve(std::move(gram), std::move(rhs), p);
}

std::vector<double> RidgeRegressor::predict(const Matrix& x) const {
    if (x.cols() != beta_.size()) throw std::invalid_argument("ridge: dimension mismatch");
    std::vector<double> out(x.rows(), intercept_);
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) out[i] += beta_[j] * (x(i, j) - centre_[j]) / scale_[j];
    }
    return out;
}

void KnnRegressor::fit(const Matrix& x, std::span<const double> y) {
    require_fit_input(x, y);
    if (k_ == 0) throw std::invalid_argument("knn: k must be positive");
    column_moments(x, centre_, scale_);
    z_ = Matrix(x.rows(), x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t j = 0; j < x.cols(); ++j) z_(i, j) = (x(i, j) - centre_[j]) / scale_[j];
    }
    y_.assign(y.begin(), y.end());
}

std::vector<double> KnnRegressor::predict(const Matrix& x) const {
    if (x.cols() != z_.cols()) throw std::invalid_argument("knn: dimension mismatch");
    const std::size_t n = z_.rows();
    const std::size_t k = std::min(k_, n);
    std::vector<double> out(x.rows());
    std::vector<std::pair<double, std::size_t>> cand(n);
    std::vector<double> q(x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) {
        for (std::size_t j = 0; j < x.cols(); ++j) q[j] = (x(r, j) - centre_[j]) / scale_[j];
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < q.size(); ++j) d += (z_(i, j) - q[j]) * (z_(i, j) - q[j]);
            cand[i] = {std::sqrt(d), i};
        }
        std::partial_sort(cand.begin(), cand.begin() + static_cast<std::ptrdiff_t>(k), cand.end());
        if (cand[0].first == 0.0) {
            double s = 0.0;
            std::size_t m = 0;
            for (std::size_t l = 0; l < k && cand[l].first == 0.0; ++l, ++m) s += y_[cand[l].second];
            out[r] = s / static_cast<double>(m);
            continue;
        }
        double sw = 0.0;
        double sy = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            const double w = 1.0 / cand[l].first;
            sw += w;
            sy += w * y_[cand[l].second];
        }
        out[r] = sy / sw;
    }
    return out;
}

void ForestRegressor::fit(const Matrix& x, std::span<const double> y) {
    model_ = train_forest(x, y, params_);
}

std::vector<double> ForestRegressor::predict(const Matrix& x) const { return model_.predict(x); }

std::unique_ptr<Learner> make_learner(LearnerKind kind, std::uint64_t seed) {
    switch (kind) {
    case LearnerKind::Forest: {
        ForestParams fp;
        fp.seed = seed;
        return std::make_unique<ForestRegressor>(fp);
    }
    case LearnerKind::Ridge: return std::make_unique<RidgeRegressor>();
    case LearnerKind::Knn: return std::make_unique<KnnRegressor>(10);
    }
    throw std::invalid_argument("unknown learner kind");
}

} // namespace goliath
