#include "frechet/orders.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frechet/risk_measures.hpp"

namespace frechet {

namespace {

// Union of both supports plus one retention below both minima; ascending.
std::vector<double> retention_grid(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    std::vector<double> grid;
    grid.push_back(std::min(x.support().front(), y.support().front()) - 1.0);
    grid.insert(grid.end(), x.support().begin(), x.support().end());
    grid.insert(grid.end(), y.support().begin(), y.support().end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) <= kCompareTol; }),
               grid.end());
    return grid;
}

// Union of both CDF jump levels below 1, plus p = 0; ascending.
std::vector<double> level_grid(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    std::vector<double> grid{0.0};
    for (const auto* d : {&x, &y}) {
        double acc = 0.0;
        for (std::size_t k = 0; k + 1 < d->probs().size(); ++k) {
            acc += d->probs()[k];
            grid.push_back(acc);
        }
    }
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) <= kCompareTol; }),
               grid.end());
    while (!grid.empty() && grid.back() >= 1.0 - kCompareTol) grid.pop_back();
    return grid;
}

} // namespace

OrderVerdict sl_order(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    for (double d : retention_grid(x, y)) {
        const double lhs = x.stop_loss(d);
        const double rhs = y.stop_loss(d);
        if (lhs > rhs + kMergeTol) {
            return {false, OrderWitness{OrderWitness::Kind::retention, d, lhs, rhs}};
        }
    }
    return {true, std::nullopt};
}

double sl_margin(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    double margin = std::numeric_limits<double>::infinity();
    for (double d : retention_grid(x, y)) {
        margin = std::min(margin, y.stop_loss(d) - x.stop_loss(d));
    }
    return margin;
}

OrderVerdict cx_order(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    const double mx = x.mean();
    const double my = y.mean();
    if (std::abs(mx - my) > kMergeTol) {
        return {false, OrderWitness{OrderWitness::Kind::mean, mx - my, mx, my}};
    }
    return sl_order(x, y);
}

OrderVerdict sl_order_via_tvar(const DiscreteDistribution& x, const DiscreteDistribution& y) {
    for (double p : level_grid(x, y)) {
        const double lhs = tail_value_at_risk(x, p);
        const double rhs = tail_value_at_risk(y, p);
        if (lhs > rhs + kMergeTol) {
            return {false, OrderWitness{OrderWitness::Kind::level, p, lhs, rhs}};
        }
    }
    return {true, std::nullopt};
}

double TestFunction::operator()(double x) const {
    switch (kind) {
        case Kind::square: return x * x;
        case Kind::fourth_power: return (x * x) * (x * x);
        case Kind::hinge: return x > d ? x - d : 0.0;
    }
    return 0.0; // unreachable
}

std::string TestFunction::name() const {
    switch (kind) {
        case Kind::square: return "square";
        case Kind::fourth_power: return "fourth_power";
        case Kind::hinge: return "hinge(" + std::to_string(d) + ")";
    }
    return {};
}

std::vector<std::pair<double, double>> convex_test_expectations(
    const DiscreteDistribution& x, const DiscreteDistribution& y,
    const std::vector<TestFunction>& fs) {
    auto expect = [](const DiscreteDistribution& d, const TestFunction& f) {
        double s = 0.0;
        for (std::size_t k = 0; k < d.size(); ++k) s += f(d.support()[k]) * d.probs()[k];
        return s;
    };
    std::vector<std::pair<double, double>> out;
    out.reserve(fs.size());
    for (const auto& f : fs) out.push_back({expect(x, f), expect(y, f)});
    return out;
}

std::vector<std::pair<double, double>> stop_loss_curve(const DiscreteDistribution& d) {
    std::vector<double> grid;
    grid.push_back(d.support().front() - 1.0);
    grid.insert(grid.end(), d.support().begin(), d.support().end());
    grid.push_back(d.support().back() + 1.0);
    std::vector<std::pair<double, double>> curve;
    curve.reserve(grid.size());
    for (double t : grid) curve.push_back({t, d.stop_loss(t)});
    return curve;
}

std::vector<std::pair<double, double>> tvar_curve(const DiscreteDistribution& d) {
    std::vector<std::pair<double, double>> curve;
    curve.push_back({0.0, tail_value_at_risk(d, 0.0)});
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < d.probs().size(); ++k) {
        acc += d.probs()[k];
        curve.push_back({acc, tail_value_at_risk(d, acc)});
    }
    return curve;
}

} // namespace frechet
