#include "goliath/clustering.hpp"

#include "goliath/diagnostics.hpp"
#include "goliath/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace goliath {

namespace {

constexpr double kLog2Pi = 1.83787706640934548356;
constexpr double kVarianceFloor = 1e-8;

double log_component_density(const GmmComponent& c, std::span<const double> x) {
    double acc = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
        const double d = x[j] - c.mean[j];
        acc += -0.5 * (kLog2Pi + std::log(c.variance[j]) + d * d / c.variance[j]);
    }
    return acc;
}

double log_sum_exp(std::span<const double> v) {
    const double m = *std::max_element(v.begin(), v.end());
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

struct ColumnMoments {
    std::vector<double> mean;
    std::vector<double> variance; // population
};

ColumnMoments column_moments(const Matrix& x) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    ColumnMoments cm{std::vector<double>(p, 0.0), std::vector<double>(p, 0.0)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) cm.mean[j] += x(i, j);
    }
    for (double& m : cm.mean) m /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < p; ++j) {
            const double d = x(i, j) - cm.mean[j];
            cm.variance[j] += d * d;
        }
    }
    for (double& v : cm.variance) v /= static_cast<double>(n);
    return cm;
}

std::vector<std::size_t> kmeanspp_centres(const Matrix& x, std::size_t g, Rng& rng) {
    const std::size_t n = x.rows();
    std::vector<std::size_t> centres{rng.uniform_index(n)};
    std::vector<double> d2(n, std::numeric_limits<double>::infinity());
    while (centres.size() < g) {
        const auto last = x.row(centres.back());
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double d = 0.0;
            for (std::size_t j = 0; j < x.cols(); ++j) d += (x(i, j) - last[j]) * (x(i, j) - last[j]);
            d2[i] = std::min(d2[i], d);
            total += d2[i];
        }
        std::size_t pick = 0;
        if (total > 0.0) {
            const double u = rng.uniform() * total;
            double cum = 0.0;
            pick = n - 1;
            for (std::size_t i = 0; i < n; ++i) {
                cum += d2[i];
                if (u < cum) {
                    pick = i;
                    break;
                }
            }
        } else {
            pick = rng.uniform_index(n); // all points coincide with centres
        }
        centres.push_back(pick);
    }
    return centres;
}

// M-step from responsibilities resp (n x g, row-major). Returns true when a
// variance had to be floored.
bool maximize(const Matrix& x, const std::vector<double>& resp, std::size_t g, const ColumnMoments& cm,
              std::vector<GmmComponent>& comps) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    bool floored = false;
    comps.assign(g, GmmComponent{});
    for (std::size_t k = 0; k < g; ++k) {
        auto& c = comps[k];
        c.mean.assign(p, 0.0);
        c.variance.assign(p, 0.0);
        double nk = 0.0;
        for (std::size_t i = 0; i < n; ++i) nk += resp[i * g + k];
        if (!(nk > 1e-10)) {
            // Empty component: park it on the global moments with negligible weight.
            c.weight = 1e-10;
            c.mean = cm.mean;
            for (std::size_t j = 0; j < p; ++j) c.variance[j] = std::max(cm.variance[j], kVarianceFloor);
            floored = true;
            continue;
        }
        c.weight = nk / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double r = resp[i * g + k];
            for (std::size_t j = 0; j < p; ++j) c.mean[j] += r * x(i, j);
        }
        for (double& m : c.mean) m /= nk;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = resp[i * g + k];
            for (std::size_t j = 0; j < p; ++j) {
                const double d = x(i, j) - c.mean[j];
                c.variance[j] += r * d * d;
            }
        }
        for (std::size_t j = 0; j < p; ++j) {
            c.variance[j] /= nk;
            const double floor = kVarianceFloor * (cm.variance[j] > 0.0 ? cm.variance[j] : 1.0);
            if (c.variance[j] < floor) {
                c.variance[j] = floor;
                floored = true;
            }
        }
    }
    const double total = std::accumulate(comps.begin(), comps.end(), 0.0,
                                         [](double s, const GmmComponent& c) { return s + c.weight; });
    for (auto& c : comps) c.weight /= total;
    return floored;
}

// E-step; fills resp and returns the log-likelihood.
double expect(const Matrix& x, const std::vector<GmmComponent>& comps, std::vector<double>& resp) {
    const std::size_t n = x.rows();
    const std::size_t g = comps.size();
    std::vector<double> lp(g);
    double ll = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < g; ++k) lp[k] = std::log(comps[k].weight) + log_component_density(comps[k], x.row(i));
        const double lse = log_sum_exp(lp);
        ll += lse;
        for (std::size_t k = 0; k < g; ++k) resp[i * g + k] = std::exp(lp[k] - lse);
    }
    return ll;
}

struct EmRun {
    std::vector<GmmComponent> comps;
    double ll = -std::numeric_limits<double>::infinity();
    std::vector<double> trace;
    bool floored = false;
};

EmRun run_em(const Matrix& x, std::size_t g, Rng rng, const ColumnMoments& cm, const GmmOptions& opts) {
    const std::size_t n = x.rows();
    const std::size_t p = x.cols();
    const auto centres = kmeanspp_centres(x, g, rng);
    std::vector<double> resp(n * g, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t k = 0; k < g; ++k) {
            double d = 0.0;
            for (std::size_t j = 0; j < p; ++j) {
                const double diff = x(i, j) - x(centres[k], j);
                d += diff * diff;
            }
            if (d < best_d) {
                best_d = d;
                best = k;
            }
        }
        resp[i * g + best] = 1.0;
    }
    EmRun run;
    run.floored = maximize(x, resp, g, cm, run.comps);
    double prev = -std::numeric_limits<double>::infinity();
    for (std::size_t it = 0; it < opts.max_iterations; ++it) {
        const double ll = expect(x, run.comps, resp);
        run.trace.push_back(ll);
        run.ll = ll;
        if (std::isfinite(prev) && std::abs(ll - prev) <= opts.tolerance * std::abs(ll)) break;
        if (it + 1 == opts.max_iterations) break; // keep parameters matching run.ll
        prev = ll;
        std::vector<GmmComponent> next;
        run.floored = maximize(x, resp, g, cm, next) || run.floored;
        run.comps = std::move(next);
    }
    return run;
}

double bic_of(double ll, std::size_t g, std::size_t p, std::size_t n) {
    const auto params = static_cast<double>((g - 1) + 2 * g * p);
    return -2.0 * ll + params * std::log(static_cast<double>(n));
}

} // namespace

std::vector<double> GmmModel::responsibilities(std::span<const double> x) const {
    if (x.size() != dims()) throw std::invalid_argument("GmmModel: dimension mismatch");
    std::vector<double> lp(components.size());
    for (std::size_t k = 0; k < components.size(); ++k) {
        lp[k] = std::log(components[k].weight) + log_component_density(components[k], x);
    }
    const double lse = log_sum_exp(lp);
    for (double& v : lp) v = std::exp(v - lse);
    return lp;
}

GmmModel fit_gmm_components(const Matrix& x, std::size_t g, Rng& rng, const GmmOptions& opts) {
    const std::size_t n = x.rows();
    if (g == 0) throw std::invalid_argument("fit_gmm: need at least one component");
    if (n <= g) throw std::invalid_argument("fit_gmm: need more rows than components");
    if (opts.restarts == 0) throw std::invalid_argument("fit_gmm: need at least one restart");
    const auto cm = column_moments(x);

    const Rng base = rng.split(g);
    std::vector<EmRun> runs(opts.restarts);
    parallel_for(opts.restarts, [&](std::size_t r) { runs[r] = run_em(x, g, base.split(r), cm, opts); });
    std::size_t best = 0;
    for (std::size_t r = 1; r < runs.size(); ++r) {
        if (runs[r].ll > runs[best].ll) best = r;
    }
    if (runs[best].floored) warn("degenerate mixture component; variance floor applied");

    GmmModel model;
    model.components = std::move(runs[best].comps);
    model.log_likelihood = runs[best].ll;
    model.ll_trace = std::move(runs[best].trace);
    model.bic = bic_of(model.log_likelihood, g, x.cols(), n);
    model.bic_by_components.assign(g, std::numeric_limits<double>::quiet_NaN());
    model.bic_by_components[g - 1] = model.bic;
    return model;
}

GmmModel fit_gmm(const Matrix& x, std::size_t m, Rng& rng, const GmmOptions& opts) {
    if (m == 0) throw std::invalid_argument("fit_gmm: max components must be positive");
    if (x.rows() <= m) throw std::invalid_argument("fit_gmm: need more rows than max components");
    std::vector<double> bics;
    GmmModel best;
    for (std::size_t g = 1; g <= m; ++g) {
        auto model = fit_gmm_components(x, g, rng, opts);
        bics.push_back(model.bic);
        if (g == 1 || model.bic < best.bic) best = std::move(model);
    }
    best.bic_by_components = std::move(bics);
    return best;
}

std::vector<std::size_t> assign(const GmmModel& model, const Matrix& x) {
    if (x.cols() != model.dims()) throw std::invalid_argument("assign: dimension mismatch");
    std::vector<std::size_t> labels(x.rows());
    std::vector<double> lp(model.n_components());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        for (std::size_t k = 0; k < lp.size(); ++k) {
            lp[k] = std::log(model.components[k].weight) + log_component_density(model.components[k], x.row(i));
        }
        labels[i] = static_cast<std::size_t>(std::max_element(lp.begin(), lp.end()) - lp.begin());
    }
    return labels;
}

} // namespace goliath
