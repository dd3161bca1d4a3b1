#pragma once

#include <cstdint>
#include <vector>

#include "frechet/distribution.hpp"

namespace frechet {

enum class Side { below, above };

/// An ordered list of marginal laws defining the Frechet class R(F_1,...,F_n)
/// of all couplings with those marginals.
class FrechetClass {
public:
    explicit FrechetClass(std::vector<DiscreteDistribution> marginals);

    std::size_t dim() const { return marginals_.size(); }
    const DiscreteDistribution& marginal(std::size_t i) const { return marginals_[i]; }
    const std::vector<DiscreteDistribution>& marginals() const { return marginals_; }

private:
    std::vector<DiscreteDistribution> marginals_;
};

struct JointAtom {
    std::vector<double> point;
    double prob;
};

/// A coupling: a finite list of weighted atoms in n-space. Atoms are kept
/// lexicographically sorted; duplicate points (componentwise within the
/// merge tolerance) are merged and probabilities normalized to sum 1.
class JointDistribution {
public:
    static JointDistribution make(std::size_t dim, std::vector<JointAtom> atoms,
                                  double merge_tol = kMergeTol);

    std::size_t dim() const { return dim_; }
    const std::vector<JointAtom>& atoms() const { return atoms_; }

    /// Projection of the atoms onto coordinate i, merged and normalized.
    DiscreteDistribution marginal(std::size_t i) const;

    /// Coordinatewise negation of every atom (the law of -X).
    JointDistribution negate() const;

private:
    JointDistribution() = default;

    std::size_t dim_ = 0;
    std::vector<JointAtom> atoms_;
};

/// All coordinate projections, as a Frechet class.
FrechetClass marginals_of(const JointDistribution& j);

/// True iff every projected marginal equals the corresponding class marginal
/// within tol. Throws on dimension mismatch.
bool is_member(const JointDistribution& j, const FrechetClass& c, double tol);

/// Law of the coordinate sum X_1 + ... + X_n.
DiscreteDistribution sum_distribution(const JointDistribution& j);

/// The comonotonic coupling (F_1^{-1}(U), ..., F_n^{-1}(U)): partition (0,1]
/// at the union of all marginal CDF jump levels; segment (a,b] contributes
/// the atom (F_1^{-1}(b), ..., F_n^{-1}(b)) with mass b - a.
JointDistribution comonotonic(const FrechetClass& c);

/// The countermonotonic pair (F_1^{-1}(U), F_2^{-1}(1-U)): segments refine
/// F_1's jump levels together with the reflections 1 - (F_2's jump levels);
/// segment (a,b] carries (F_1^{-1}(b), F_2^{-1}(1-a)).
JointDistribution countermonotonic(const DiscreteDistribution& f1, const DiscreteDistribution& f2);

/// Feasibility of the mutually exclusive scenario:
///   below:  sum_i P(X_i > l_i) <= 1,   above:  sum_i P(X_i < u_i) <= 1,
/// with l_i/u_i the essential bounds of the marginals.
bool me_feasible(const FrechetClass& c, Side side);

/// The mutually exclusive coupling: at most one coordinate sits away from
/// its essential infimum (below) resp. supremum (above). From below, each
/// support point x > l_i of F_i yields the atom with coordinate i at x and
/// every other coordinate j at l_j, mass P(X_i = x); the remaining mass sits
/// at (l_1,...,l_n). From above, constructed by reflection. Throws
/// std::domain_error when the class is infeasible for the requested side.
JointDistribution mutually_exclusive(const FrechetClass& c, Side side);

/// True iff the atoms form a chain under the componentwise order (every two
/// atoms comparable within tol). For finite discrete laws this is equivalent
/// to the joint CDF being min_k F_k(x_k).
bool is_comonotonic(const JointDistribution& j, double tol);

/// Bivariate analogue of the chain test with the second coordinate reversed:
/// every two atoms satisfy (u1 <= v1 and u2 >= v2) or the mirror, within tol.
bool is_countermonotonic(const JointDistribution& j, double tol);

/// True iff, with l_i/u_i taken from the projected marginals, the total mass
/// of atoms with two coordinates strictly away from their bound (beyond tol)
/// is at most tol for every pair of coordinates.
bool is_mutually_exclusive(const JointDistribution& j, Side side, double tol);

/// A seeded random member of the class with exact marginals: randomized
/// greedy mass assignment over residual marginal masses. Each step picks one
/// support point per coordinate with probability proportional to residual
/// mass and assigns the minimum residual as an atom, so at least one
/// residual is zeroed per step. Deterministic given the seed.
JointDistribution sample_coupling(const FrechetClass& c, std::uint64_t seed);

/// All vertices of the bivariate transportation polytope with the given
/// margins, via enumeration of spanning-tree supports with deduplication.
/// Requires m1 * m2 <= 64 (throws std::invalid_argument beyond that).
std::vector<JointDistribution> enumerate_vertex_couplings(const DiscreteDistribution& f1,
                                                          const DiscreteDistribution& f2);

} // namespace frechet
