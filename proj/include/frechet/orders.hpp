#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "frechet/distribution.hpp"

namespace frechet {

/// Outcome of an order decision. When the order fails, `witness` records the
/// violated comparison (a retention d, a probability level p, or the mean
/// gap) so the failure can be reproduced by re-evaluating both sides.
struct OrderWitness {
    enum class Kind { retention, level, mean };
    Kind kind;
    double value; // the retention d, the level p, or the mean difference
    double lhs;
    double rhs;
};

struct OrderVerdict {
    bool holds = false;
    std::optional<OrderWitness> witness;
};

/// Stop-loss order X <=_sl Y: E(X-d)_+ <= E(Y-d)_+ for every retention d.
/// Both transforms are piecewise linear with kinks only at support points,
/// so checking the union of supports plus one retention below both minima
/// (which compares the means) decides the order exactly.
OrderVerdict sl_order(const DiscreteDistribution& x, const DiscreteDistribution& y);

/// Convex order X <=_cx Y: equal means and X <=_sl Y.
OrderVerdict cx_order(const DiscreteDistribution& x, const DiscreteDistribution& y);

/// Stop-loss order decided through the TVaR route: TVaR_p(X) <= TVaR_p(Y)
/// for all p. (1-p) TVaR_p is piecewise linear in p with kinks only at CDF
/// jump levels, so the union of jump levels plus p = 0 suffices.
OrderVerdict sl_order_via_tvar(const DiscreteDistribution& x, const DiscreteDistribution& y);

/// Minimal slack of the stop-loss comparison over the decision grid,
/// min_d [E(Y-d)_+ - E(X-d)_+]; negative when the order fails.
double sl_margin(const DiscreteDistribution& x, const DiscreteDistribution& y);

/// A convex test function: square, fourth power, or a hinge (x-d)_+.
struct TestFunction {
    enum class Kind { square, fourth_power, hinge };
    Kind kind = Kind::square;
    double d = 0.0;

    static TestFunction square() { return {Kind::square, 0.0}; }
    static TestFunction fourth_power() { return {Kind::fourth_power, 0.0}; }
    static TestFunction hinge(double d) { return {Kind::hinge, d}; }

    double operator()(double x) const;
    std::string name() const;
};

/// Exact expectations (E f(X), E f(Y)) for each test function.
std::vector<std::pair<double, double>> convex_test_expectations(
    const DiscreteDistribution& x, const DiscreteDistribution& y,
    const std::vector<TestFunction>& fs);

/// Kink list of the stop-loss transform: (d, E(X-d)_+) at every support
/// point plus one point below the minimum and one above the maximum; linear
/// interpolation between entries reconstructs the transform exactly.
std::vector<std::pair<double, double>> stop_loss_curve(const DiscreteDistribution& d);

/// (p, TVaR_p) at p = 0 and every CDF jump level below 1.
std::vector<std::pair<double, double>> tvar_curve(const DiscreteDistribution& d);

} // namespace frechet
