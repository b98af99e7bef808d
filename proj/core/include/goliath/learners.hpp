#pragma once

#include "goliath/forest.hpp"
#include "goliath/matrix.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace goliath {

enum class LearnerKind { Forest, Ridge, Knn };

std::string to_string(LearnerKind kind);
LearnerKind parse_learner(const std::string& text);

class Learner {
public:
    virtual ~Learner() = default;
    virtual void fit(const Matrix& x, std::span<const double> y) = 0;
    virtual std::vector<double> predict(const Matrix& x) const = 0;
};

/// Ridge on standardized covariates with an intercept; the penalty is
/// 1e-3 * trace(Z'Z) / p.
class RidgeRegressor final : public Learner {
public:
    void fit(const Matrix& x, std::span<const double> y) override;
    std::vector<double> predict(const Matrix& x) const override;
    const std::vector<double>& coefficients() const { return beta_; }

private:
    std::vector<double> centre_;
    std::vector<double> scale_;
    std::vector<double> beta_;
    double intercept_ = 0.0;
};

/// Inverse-distance weighted k-NN on covariates standardized with the
/// training moments. Exact matches take the mean of the matching targets.
class KnnRegressor final : public Learner {
public:
    explicit KnnRegressor(std::size_t k = 10) : k_(k) {}
    void fit(const Matrix& x, std::span<const double> y) override;
    std::vector<double> predict(const Matrix& x) const override;

private:
    std::size_t k_;
    std::vector<double> centre_;
    std::vector<double> scale_;
    Matrix z_;
    std::vector<double> y_;
};

class ForestRegressor final : public Learner {
public:
    explicit ForestRegressor(ForestParams params) : params_(params) {}
    void fit(const Matrix& x, std::span<const double> y) override;
    std::vector<double> predict(const Matrix& x) const override;

private:
    ForestParams params_;
    ForestModel model_;
};

std::unique_ptr<Learner> make_learner(LearnerKind kind, std::uint64_t seed);

} // namespace goliath
