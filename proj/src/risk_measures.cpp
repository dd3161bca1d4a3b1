#include "frechet/risk_measures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace frechet {

DistortionFunction DistortionFunction::identity() {
    return {Kind::identity, 0.0, true};
}

DistortionFunction DistortionFunction::var_level(double p) {
    if (!(p > 0.0) || p > 1.0) {
        throw std::invalid_argument("var_level: level must lie in (0, 1]");
    }
    return {Kind::var_level, p, false};
}

DistortionFunction DistortionFunction::tvar_level(double p) {
    if (!(p >= 0.0) || p >= 1.0) {
        throw std::invalid_argument("tvar_level: level must lie in [0, 1)");
    }
    return {Kind::tvar_level, p, true};
}

DistortionFunction DistortionFunction::proportional_hazard(double r) {
    if (!(r > 0.0)) throw std::invalid_argument("proportional_hazard: exponent must be positive");
    return {Kind::proportional_hazard, r, r <= 1.0};
}

DistortionFunction DistortionFunction::dual_power(double s) {
    if (!(s > 0.0)) throw std::invalid_argument("dual_power: exponent must be positive");
    return {Kind::dual_power, s, s >= 1.0};
}

DistortionFunction DistortionFunction::piecewise_linear(
    std::vector<std::pair<double, double>> points) {
    if (points.size() < 2) {
        throw std::invalid_argument("piecewise_linear: at least two knots required");
    }
    if (std::abs(points.front().first) > kCompareTol ||
        std::abs(points.front().second) > kCompareTol ||
        std::abs(points.back().first - 1.0) > kCompareTol ||
        std::abs(points.back().second - 1.0) > kCompareTol) {
        throw std::invalid_argument("piecewise_linear: knots must run from (0,0) to (1,1)");
    }
    bool concave = true;
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < points.size(); ++k) {
        const double du = points[k].first - points[k - 1].first;
        const double dg = points[k].second - points[k - 1].second;
        if (!(du > 0.0)) {
            throw std::invalid_argument("piecewise_linear: abscissae must be strictly increasing");
        }
        if (dg < -kCompareTol) {
            throw std::invalid_argument("piecewise_linear: values must be nondecreasing");
        }
        const double slope = dg / du;
        if (slope > prev_slope + kCompareTol) concave = false;
        prev_slope = slope;
    }
    DistortionFunction g(Kind::piecewise_linear, 0.0, concave);
    g.points_ = std::move(points);
    return g;
}

double DistortionFunction::operator()(double u) const {
    if (!(u >= 0.0) || u > 1.0) {
        throw std::invalid_argument("distortion: argument must lie in [0, 1]");
    }
    switch (kind_) {
        case Kind::identity:
            return u;
        case Kind::var_level:
            return u > 1.0 - param_ ? 1.0 : 0.0;
        case Kind::tvar_level:
            return std::min(u / (1.0 - param_), 1.0);
        case Kind::proportional_hazard:
            return std::pow(u, param_);
        case Kind::dual_power:
            return 1.0 - std::pow(1.0 - u, param_);
        case Kind::piecewise_linear: {
            auto it = std::lower_bound(points_.begin(), points_.end(), u,
                                       [](const auto& pt, double x) { return pt.first < x; });
            if (it == points_.begin()) return points_.front().second;
            if (it == points_.end()) return points_.back().second;
            const auto& [u1, g1] = *(it - 1);
            const auto& [u2, g2] = *it;
            return g1 + (g2 - g1) * (u - u1) / (u2 - u1);
        }
    }
    return 0.0; // unreachable
}

std::string DistortionFunction::name() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::identity: return "identity";
        case Kind::var_level: os << "var(" << param_ << ")"; break;
        case Kind::tvar_level: os << "tvar(" << param_ << ")"; break;
        case Kind::proportional_hazard: os << "ph(" << param_ << ")"; break;
        case Kind::dual_power: os << "dual_power(" << param_ << ")"; break;
        case Kind::piecewise_linear: os << "piecewise_linear[" << points_.size() << "]"; break;
    }
    return os.str();
}

double rho(const DistortionFunction& g, const DiscreteDistribution& d) {
    const auto& xs = d.support();
    double result = 0.0;
    double g_prev = g(1.0); // distorted tail level above the whole support
    for (std::size_t k = 0; k < xs.size(); ++k) {
        const double s_k = k + 1 == xs.size() ? 0.0 : std::min(d.sf(xs[k]), 1.0);
        const double g_k = g(s_k);
        result += xs[k] * (g_prev - g_k);
        g_prev = g_k;
    }
    return result;
}

namespace {

template <bool Parallel>
double spectral_blocks(const DistortionFunction& g, const DiscreteDistribution& d, long steps) {
    if (!g.is_concave()) {
        throw std::domain_error("rho_spectral: quantile form requires a concave distortion");
    }
    if (steps < 1000) {
        throw std::invalid_argument("rho_spectral: at least 1000 grid steps required");
    }
    constexpr long kBlock = 4096;
    const long nblocks = (steps + kBlock - 1) / kBlock;
    std::vector<double> partial(static_cast<std::size_t>(nblocks), 0.0);

    auto block_sum = [&](long b) {
        const long lo = b * kBlock;
        const long hi = std::min(steps, lo + kBlock);
        double local = 0.0;
        for (long jx = lo; jx < hi; ++jx) {
            const double q0 = static_cast<double>(jx) / static_cast<double>(steps);
            const double q1 = static_cast<double>(jx + 1) / static_cast<double>(steps);
            const double qmid = 0.5 * (q0 + q1);
            local += d.quantile(1.0 - qmid) * (g(q1) - g(q0));
        }
        partial[static_cast<std::size_t>(b)] = local;
    };

    // Block sums accumulate independently and are folded in index order, so
    // the result does not depend on the OpenMP schedule or thread count.
    if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
        for (long b = 0; b < nblocks; ++b) block_sum(b);
    } else {
        for (long b = 0; b < nblocks; ++b) block_sum(b);
    }
    double total = 0.0;
    for (double v : partial) total += v;
    return total;
}

} // namespace

double rho_spectral(const DistortionFunction& g, const DiscreteDistribution& d, long steps) {
    return spectral_blocks<true>(g, d, steps);
}

double rho_spectral_serial(const DistortionFunction& g, const DiscreteDistribution& d,
                           long steps) {
    return spectral_blocks<false>(g, d, steps);
}

double value_at_risk(const DiscreteDistribution& d, double p) {
    return d.quantile(p);
}

double tail_value_at_risk(const DiscreteDistribution& d, double p) {
    if (!(p >= 0.0) || p >= 1.0) {
        throw std::invalid_argument("tail_value_at_risk: level must lie in [0, 1)");
    }
    const double tail = 1.0 - p;
    double need = tail;
    double acc = 0.0;
    const auto& xs = d.support();
    const auto& ps = d.probs();
    for (std::size_t k = xs.size(); k-- > 0 && need > 0.0;) {
        const double take = std::min(ps[k], need);
        acc += take * xs[k];
        need -= take;
    }
    return acc / tail;
}

std::vector<DistortionFunction> distortion_catalog() {
    std::vector<DistortionFunction> gs;
    gs.push_back(DistortionFunction::identity());
    for (double p : {0.3, 0.6, 0.9}) gs.push_back(DistortionFunction::var_level(p));
    for (double p : {0.3, 0.6, 0.9}) gs.push_back(DistortionFunction::tvar_level(p));
    gs.push_back(DistortionFunction::proportional_hazard(0.5));
    gs.push_back(DistortionFunction::dual_power(2.0));
    return gs;
}

std::vector<DistortionFunction> concave_distortion_catalog() {
    std::vector<DistortionFunction> gs;
    for (const auto& g : distortion_catalog()) {
        if (g.is_concave()) gs.push_back(g);
    }
    return gs;
}

} // namespace frechet
