#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace frechet {

// Comparison tolerance for derived quantities (CDF/quantile round trips,
// curve identities). Support merging and probability-sum checks use the
// coarser kMergeTol.
inline constexpr double kCompareTol = 1e-12;
inline constexpr double kMergeTol = 1e-9;

/// A finite-support probability law on the reals.
///
/// Invariants: support strictly ascending with gaps above the merge
/// tolerance, all probabilities positive, probabilities summing to one.
/// Instances are immutable; every operation is a pure function, so values
/// can be shared freely across threads.
class DiscreteDistribution {
public:
    /// Builds a distribution from values and nonnegative weights.
    /// Near-duplicate values (within `merge_tol`) are merged with summed
    /// weights, zero-weight atoms dropped, weights normalized to sum 1.
    /// Throws std::invalid_argument on empty input, a negative weight, or
    /// an all-zero weight vector.
    static DiscreteDistribution make(std::vector<double> values, std::vector<double> weights,
                                     double merge_tol = kMergeTol);

    const std::vector<double>& support() const { return support_; }
    const std::vector<double>& probs() const { return probs_; }
    std::size_t size() const { return support_.size(); }

    /// P(X <= x); right-continuous step function.
    double cdf(double x) const;

    /// P(X > x), computed as a tail sum rather than 1 - cdf.
    double sf(double x) const;

    /// Generalized inverse inf{x : F(x) >= p} for p in (0,1]; p = 1 yields
    /// the essential supremum (finite here by construction).
    double quantile(double p) const;

    double mean() const;

    /// Stop-loss premium E(X - d)_+.
    double stop_loss(double d) const;

    /// (essential infimum, essential supremum) = (min, max) of the support.
    std::pair<double, double> essential_bounds() const;

    /// Translates every support point by c.
    DiscreteDistribution shift(double c) const;

    /// Law of -X.
    DiscreteDistribution negate() const;

    /// Law of lambda * X.
    DiscreteDistribution scale(double lambda) const;

private:
    DiscreteDistribution() = default;

    std::vector<double> support_;
    std::vector<double> probs_;
    std::vector<double> cum_;  // cum_[k] = P(X <= support_[k])
    std::vector<double> tail_; // tail_[k] = P(X >= support_[k])
};

/// True iff the two laws coincide up to `tol`: after re-merging each support
/// within tol, supports align pairwise within tol and probabilities differ
/// by at most tol.
bool equal_in_distribution(const DiscreteDistribution& a, const DiscreteDistribution& b,
                           double tol);

} // namespace frechet
