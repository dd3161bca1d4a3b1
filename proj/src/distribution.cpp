#include "frechet/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace frechet {

DiscreteDistribution DiscreteDistribution::make(std::vector<double> values,
                                                std::vector<double> weights, double merge_tol) {
    if (values.empty() || values.size() != weights.size()) {
        throw std::invalid_argument("distribution: values and weights must be nonempty parallel lists");
    }
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw std::invalid_argument("distribution: weights must be finite and nonnegative");
        }
    }
    for (double v : values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("distribution: support values must be finite");
        }
    }

    std::vector<std::size_t> order(values.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

    DiscreteDistribution d;
    for (std::size_t k : order) {
        const double v = values[k] == 0.0 ? 0.0 : values[k]; // canonicalize -0
        const double w = weights[k];
        if (w == 0.0) continue;
        if (!d.support_.empty() && v - d.support_.back() <= merge_tol) {
            d.probs_.back() += w;
        } else {
            d.support_.push_back(v);
            d.probs_.push_back(w);
        }
    }
    if (d.support_.empty()) {
        throw std::invalid_argument("distribution: total weight must be positive");
    }

    double total = std::accumulate(d.probs_.begin(), d.probs_.end(), 0.0);
    if (total != 1.0) {
        for (double& p : d.probs_) p /= total;
    }

    d.cum_.resize(d.probs_.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < d.probs_.size(); ++k) {
        acc += d.probs_[k];
        d.cum_[k] = acc;
    }
    d.tail_.resize(d.probs_.size());
    acc = 0.0;
    for (std::size_t k = d.probs_.size(); k-- > 0;) {
        acc += d.probs_[k];
        d.tail_[k] = acc;
    }
    return d;
}

double DiscreteDistribution::cdf(double x) const {
    // index of the last support point <= x
    auto it = std::upper_bound(support_.begin(), support_.end(), x);
    if (it == support_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - support_.begin()) - 1];
}

double DiscreteDistribution::sf(double x) const {
    auto it = std::upper_bound(support_.begin(), support_.end(), x);
    if (it == support_.end()) return 0.0;
    return tail_[static_cast<std::size_t>(it - support_.begin())];
}

double DiscreteDistribution::quantile(double p) const {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("quantile: level must lie in (0, 1]");
    }
    auto it = std::lower_bound(cum_.begin(), cum_.end(), p - kCompareTol);
    if (it == cum_.end()) return support_.back();
    return support_[static_cast<std::size_t>(it - cum_.begin())];
}

double DiscreteDistribution::mean() const {
    double s = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) s += support_[k] * probs_[k];
    return s;
}

double DiscreteDistribution::stop_loss(double d) const {
    double s = 0.0;
    for (std::size_t k = 0; k < support_.size(); ++k) {
        if (support_[k] > d) s += (support_[k] - d) * probs_[k];
    }
    return s;
}

std::pair<double, double> DiscreteDistribution::essential_bounds() const {
    return {support_.front(), support_.back()};
}

DiscreteDistribution DiscreteDistribution::shift(double c) const {
    std::vector<double> values(support_);
    for (double& v : values) v += c;
    return make(std::move(values), probs_);
}

DiscreteDistribution DiscreteDistribution::negate() const {
    std::vector<double> values(support_);
    for (double& v : values) v = -v;
    return make(std::move(values), probs_);
}

DiscreteDistribution DiscreteDistribution::scale(double lambda) const {
    std::vector<double> values(support_);
    for (double& v : values) v *= lambda;
    return make(std::move(values), probs_);
}

bool equal_in_distribution(const DiscreteDistribution& a, const DiscreteDistribution& b,
                           double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("equal_in_distribution: tol must be positive");
    const DiscreteDistribution am = DiscreteDistribution::make(a.support(), a.probs(), tol);
    const DiscreteDistribution bm = DiscreteDistribution::make(b.support(), b.probs(), tol);
    if (am.size() != bm.size()) return false;
    for (std::size_t k = 0; k < am.size(); ++k) {
        if (std::abs(am.support()[k] - bm.support()[k]) > tol) return false;
        if (std::abs(am.probs()[k] - bm.probs()[k]) > tol) return false;
    }
    return true;
}

} // namespace frechet
