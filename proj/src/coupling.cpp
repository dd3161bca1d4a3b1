#include "frechet/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>

#include "frechet/rng.hpp"

namespace frechet {

FrechetClass::FrechetClass(std::vector<DiscreteDistribution> marginals)
    : marginals_(std::move(marginals)) {
    if (marginals_.size() < 2) {
        throw std::invalid_argument("FrechetClass: at least two marginals required");
    }
}

JointDistribution JointDistribution::make(std::size_t dim, std::vector<JointAtom> atoms,
                                          double merge_tol) {
    if (dim < 2) throw std::invalid_argument("JointDistribution: dimension must be >= 2");
    for (const auto& a : atoms) {
        if (a.point.size() != dim) {
            throw std::invalid_argument("JointDistribution: atom dimension mismatch");
        }
        if (!(a.prob >= 0.0) || !std::isfinite(a.prob)) {
            throw std::invalid_argument("JointDistribution: atom probabilities must be nonnegative");
        }
    }
    std::sort(atoms.begin(), atoms.end(), [](const JointAtom& a, const JointAtom& b) {
        return std::lexicographical_compare(a.point.begin(), a.point.end(), b.point.begin(),
                                            b.point.end());
    });

    JointDistribution j;
    j.dim_ = dim;
    auto near = [&](const std::vector<double>& u, const std::vector<double>& v) {
        for (std::size_t c = 0; c < u.size(); ++c) {
            if (std::abs(u[c] - v[c]) > merge_tol) return false;
        }
        return true;
    };
    for (auto& a : atoms) {
        if (a.prob == 0.0) continue;
        for (double& x : a.point) {
            if (x == 0.0) x = 0.0; // canonicalize -0
        }
        if (!j.atoms_.empty() && near(j.atoms_.back().point, a.point)) {
            j.atoms_.back().prob += a.prob;
        } else {
            j.atoms_.push_back(std::move(a));
        }
    }
    if (j.atoms_.empty()) {
        throw std::invalid_argument("JointDistribution: total mass must be positive");
    }
    double total = 0.0;
    for (const auto& a : j.atoms_) total += a.prob;
    if (total != 1.0) {
        for (auto& a : j.atoms_) a.prob /= total;
    }
    return j;
}

DiscreteDistribution JointDistribution::marginal(std::size_t i) const {
    if (i >= dim_) throw std::invalid_argument("marginal: coordinate out of range");
    std::vector<double> values, weights;
    values.reserve(atoms_.size());
    weights.reserve(atoms_.size());
    for (const auto& a : atoms_) {
        values.push_back(a.point[i]);
        weights.push_back(a.prob);
    }
    return DiscreteDistribution::make(std::move(values), std::move(weights));
}

JointDistribution JointDistribution::negate() const {
    std::vector<JointAtom> flipped(atoms_);
    for (auto& a : flipped) {
        for (double& x : a.point) x = -x;
    }
    return make(dim_, std::move(flipped));
}

FrechetClass marginals_of(const JointDistribution& j) {
    std::vector<DiscreteDistribution> ms;
    ms.reserve(j.dim());
    for (std::size_t i = 0; i < j.dim(); ++i) ms.push_back(j.marginal(i));
    return FrechetClass(std::move(ms));
}

bool is_member(const JointDistribution& j, const FrechetClass& c, double tol) {
    if (j.dim() != c.dim()) throw std::invalid_argument("is_member: dimension mismatch");
    for (std::size_t i = 0; i < c.dim(); ++i) {
        if (!equal_in_distribution(j.marginal(i), c.marginal(i), tol)) return false;
    }
    return true;
}

DiscreteDistribution sum_distribution(const JointDistribution& j) {
    std::vector<double> values, weights;
    values.reserve(j.atoms().size());
    weights.reserve(j.atoms().size());
    for (const auto& a : j.atoms()) {
        values.push_back(std::accumulate(a.point.begin(), a.point.end(), 0.0));
        weights.push_back(a.prob);
    }
    return DiscreteDistribution::make(std::move(values), std::move(weights));
}

namespace {

// Union of the CDF jump levels of the given marginals, ascending, ending at 1.
std::vector<double> merged_levels(const std::vector<std::vector<double>>& level_sets) {
    std::vector<double> levels;
    for (const auto& ls : level_sets) levels.insert(levels.end(), ls.begin(), ls.end());
    std::sort(levels.begin(), levels.end());
    std::vector<double> out;
    for (double v : levels) {
        if (v <= kCompareTol) continue;
        if (!out.empty() && v - out.back() <= kCompareTol) continue;
        out.push_back(v);
    }
    if (out.empty() || out.back() < 1.0 - kCompareTol) out.push_back(1.0);
    else out.back() = 1.0;
    return out;
}

std::vector<double> jump_levels(const DiscreteDistribution& d) {
    std::vector<double> ls;
    double acc = 0.0;
    for (double p : d.probs()) {
        acc += p;
        ls.push_back(acc);
    }
    return ls;
}

} // namespace

JointDistribution comonotonic(const FrechetClass& c) {
    std::vector<std::vector<double>> sets;
    sets.reserve(c.dim());
    for (std::size_t i = 0; i < c.dim(); ++i) sets.push_back(jump_levels(c.marginal(i)));
    const std::vector<double> cuts = merged_levels(sets);

    std::vector<JointAtom> atoms;
    double a = 0.0;
    for (double b : cuts) {
        JointAtom atom;
        atom.prob = b - a;
        atom.point.reserve(c.dim());
        for (std::size_t i = 0; i < c.dim(); ++i) atom.point.push_back(c.marginal(i).quantile(b));
        atoms.push_back(std::move(atom));
        a = b;
    }
    return JointDistribution::make(c.dim(), std::move(atoms));
}

JointDistribution countermonotonic(const DiscreteDistribution& f1,
                                   const DiscreteDistribution& f2) {
    std::vector<double> reflected;
    for (double v : jump_levels(f2)) reflected.push_back(1.0 - v);
    const std::vector<double> cuts = merged_levels({jump_levels(f1), reflected});

    std::vector<JointAtom> atoms;
    double a = 0.0;
    for (double b : cuts) {
        // On (a,b] the pair (F1^{-1}(U), F2^{-1}(1-U)) is a.s. constant:
        // the first coordinate is F1^{-1}(b), the second F2^{-1}(1-a).
        atoms.push_back({{f1.quantile(b), f2.quantile(1.0 - a)}, b - a});
        a = b;
    }
    return JointDistribution::make(2, std::move(atoms));
}

bool me_feasible(const FrechetClass& c, Side side) {
    double total = 0.0;
    for (std::size_t i = 0; i < c.dim(); ++i) {
        const auto& m = c.marginal(i);
        if (side == Side::below) {
            total += m.sf(m.essential_bounds().first); // P(X > l)
        } else if (m.size() >= 2) {
            total += m.cdf(m.support()[m.size() - 2]); // P(X < u)
        }
    }
    return total <= 1.0 + kCompareTol;
}

JointDistribution mutually_exclusive(const FrechetClass& c, Side side) {
    if (!me_feasible(c, side)) {
        throw std::domain_error(
            "mutually_exclusive: infeasible class; the scenario requires the total mass away "
            "from the essential bounds to be at most 1 "
            "(sum_i P(X_i > l_i) <= 1 from below, sum_i P(X_i < u_i) <= 1 from above)");
    }
    if (side == Side::above) {
        std::vector<DiscreteDistribution> flipped;
        flipped.reserve(c.dim());
        for (std::size_t i = 0; i < c.dim(); ++i) flipped.push_back(c.marginal(i).negate());
        return mutually_exclusive(FrechetClass(std::move(flipped)), Side::below).negate();
    }

    const std::size_t n = c.dim();
    std::vector<double> base(n);
    for (std::size_t i = 0; i < n; ++i) base[i] = c.marginal(i).essential_bounds().first;

    std::vector<JointAtom> atoms;
    double tail_total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = c.marginal(i);
        for (std::size_t k = 1; k < m.size(); ++k) {
            JointAtom atom{base, m.probs()[k]};
            atom.point[i] = m.support()[k];
            atoms.push_back(std::move(atom));
            tail_total += m.probs()[k];
        }
    }
    if (1.0 - tail_total > 0.0) {
        atoms.push_back({base, 1.0 - tail_total});
    }
    return JointDistribution::make(n, std::move(atoms));
}

bool is_comonotonic(const JointDistribution& j, double tol) {
    const auto& atoms = j.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        for (std::size_t b = a + 1; b < atoms.size(); ++b) {
            bool le = true, ge = true;
            for (std::size_t c = 0; c < j.dim(); ++c) {
                const double u = atoms[a].point[c], v = atoms[b].point[c];
                if (u > v + tol) le = false;
                if (v > u + tol) ge = false;
            }
            if (!le && !ge) return false;
        }
    }
    return true;
}

bool is_countermonotonic(const JointDistribution& j, double tol) {
    if (j.dim() != 2) {
        throw std::invalid_argument("is_countermonotonic: defined for bivariate couplings only");
    }
    const auto& atoms = j.atoms();
    for (std::size_t a = 0; a < atoms.size(); ++a) {
        for (std::size_t b = a + 1; b < atoms.size(); ++b) {
            const double u1 = atoms[a].point[0], u2 = atoms[a].point[1];
            const double v1 = atoms[b].point[0], v2 = atoms[b].point[1];
            const bool fwd = u1 <= v1 + tol && v2 <= u2 + tol;
            const bool bwd = v1 <= u1 + tol && u2 <= v2 + tol;
            if (!fwd && !bwd) return false;
        }
    }
    return true;
}

bool is_mutually_exclusive(const JointDistribution& j, Side side, double tol) {
    const std::size_t n = j.dim();
    std::vector<double> bound(n);
    for (std::size_t i = 0; i < n; ++i) {
        const auto [lo, hi] = j.marginal(i).essential_bounds();
        bound[i] = side == Side::below ? lo : hi;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = i + 1; k < n; ++k) {
            double violating = 0.0;
            for (const auto& a : j.atoms()) {
                const bool away_i = side == Side::below ? a.point[i] > bound[i] + tol
                                                        : a.point[i] < bound[i] - tol;
                const bool away_k = side == Side::below ? a.point[k] > bound[k] + tol
                                                        : a.point[k] < bound[k] - tol;
                if (away_i && away_k) violating += a.prob;
            }
            if (violating > tol) return false;
        }
    }
    return true;
}

JointDistribution sample_coupling(const FrechetClass& c, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const std::size_t n = c.dim();

    std::vector<std::vector<double>> residual(n);
    for (std::size_t i = 0; i < n; ++i) residual[i] = c.marginal(i).probs();

    // When all marginal probabilities are dyadic (the harness keeps them on
    // a 1/64 lattice) every subtraction below is exact and the residuals hit
    // zero with no dust; for general inputs the leftover is O(1e-16).
    constexpr double kActive = 1e-15;
    std::size_t budget = 8;
    for (const auto& r : residual) budget += r.size();

    std::vector<JointAtom> atoms;
    for (std::size_t step = 0; step < budget; ++step) {
        std::vector<std::size_t> pick(n);
        bool ok = true;
        for (std::size_t i = 0; i < n && ok; ++i) {
            double total = 0.0;
            for (double r : residual[i]) {
                if (r > kActive) total += r;
            }
            if (total <= kActive) {
                ok = false;
                break;
            }
            const double u = draw_unit(rng) * total;
            double acc = 0.0;
            std::size_t chosen = residual[i].size();
            for (std::size_t k = 0; k < residual[i].size(); ++k) {
                if (residual[i][k] <= kActive) continue;
                acc += residual[i][k];
                if (u < acc) {
                    chosen = k;
                    break;
                }
            }
            if (chosen == residual[i].size()) { // u landed on the rounding edge
                for (std::size_t k = residual[i].size(); k-- > 0;) {
                    if (residual[i][k] > kActive) {
                        chosen = k;
                        break;
                    }
                }
            }
            pick[i] = chosen;
        }
        if (!ok) break;

        double m = residual[0][pick[0]];
        for (std::size_t i = 1; i < n; ++i) m = std::min(m, residual[i][pick[i]]);

        JointAtom atom;
        atom.prob = m;
        atom.point.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            atom.point[i] = c.marginal(i).support()[pick[i]];
            double& r = residual[i][pick[i]];
            r = (r <= m) ? 0.0 : r - m;
        }
        atoms.push_back(std::move(atom));
    }
    return JointDistribution::make(n, std::move(atoms));
}

namespace {

struct Dsu {
    std::vector<int> parent;
    explicit Dsu(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

// Enumerates every spanning tree of the complete bipartite graph on
// m1 row-nodes and m2 column-nodes by include/exclude recursion over the
// row-major edge list, pruning branches that can no longer span.
class TreeEnumerator {
public:
    TreeEnumerator(std::size_t m1, std::size_t m2,
                   const std::vector<double>& row_margin, const std::vector<double>& col_margin)
        : m1_(m1), m2_(m2), rows_(row_margin), cols_(col_margin) {}

    std::vector<JointDistribution> run(const DiscreteDistribution& f1,
                                       const DiscreteDistribution& f2) {
        const std::size_t nodes = m1_ + m2_;
        std::vector<char> excluded(m1_ * m2_, 0);
        std::vector<std::size_t> chosen;
        chosen.reserve(nodes - 1);
        recurse(0, Dsu(static_cast<int>(nodes)), chosen, excluded);

        std::vector<JointDistribution> out;
        out.reserve(vertices_.size());
        for (const auto& cells : vertices_) {
            std::vector<JointAtom> atoms;
            atoms.reserve(cells.size());
            for (const auto& [cell, mass] : cells) {
                atoms.push_back(
                    {{f1.support()[cell / m2_], f2.support()[cell % m2_]}, mass});
            }
            out.push_back(JointDistribution::make(2, std::move(atoms)));
        }
        return out;
    }

private:
    void recurse(std::size_t e, Dsu dsu, std::vector<std::size_t>& chosen,
                 std::vector<char>& excluded) {
        if (chosen.size() == m1_ + m2_ - 1) {
            emit(chosen);
            return;
        }
        if (e == m1_ * m2_) return;

        const int u = static_cast<int>(e / m2_);
        const int v = static_cast<int>(m1_ + e % m2_);

        Dsu with = dsu;
        if (with.unite(u, v)) {
            chosen.push_back(e);
            recurse(e + 1, std::move(with), chosen, excluded);
            chosen.pop_back();
        }

        excluded[e] = 1;
        if (still_spannable(dsu, e + 1, excluded)) {
            recurse(e + 1, std::move(dsu), chosen, excluded);
        }
        excluded[e] = 0;
    }

    bool still_spannable(Dsu dsu, std::size_t from, const std::vector<char>& excluded) const {
        int components = 0;
        for (std::size_t k = 0; k < m1_ + m2_; ++k) {
            if (dsu.find(static_cast<int>(k)) == static_cast<int>(k)) ++components;
        }
        for (std::size_t e = from; e < m1_ * m2_ && components > 1; ++e) {
            if (excluded[e]) continue;
            if (dsu.unite(static_cast<int>(e / m2_), static_cast<int>(m1_ + e % m2_))) {
                --components;
            }
        }
        return components == 1;
    }

    // Solves the tree system by leaf elimination; keeps the solution only
    // when every flow is nonnegative (a vertex of the polytope).
    void emit(const std::vector<std::size_t>& tree) {
        const std::size_t nodes = m1_ + m2_;
        std::vector<std::vector<std::pair<int, std::size_t>>> adj(nodes);
        for (std::size_t idx = 0; idx < tree.size(); ++idx) {
            const std::size_t e = tree[idx];
            const int u = static_cast<int>(e / m2_);
            const int v = static_cast<int>(m1_ + e % m2_);
            adj[u].push_back({v, idx});
            adj[v].push_back({u, idx});
        }
        std::vector<double> need(nodes);
        for (std::size_t i = 0; i < m1_; ++i) need[i] = rows_[i];
        for (std::size_t jx = 0; jx < m2_; ++jx) need[m1_ + jx] = cols_[jx];

        std::vector<int> degree(nodes);
        for (std::size_t k = 0; k < nodes; ++k) degree[k] = static_cast<int>(adj[k].size());
        std::vector<char> edge_done(tree.size(), 0), node_done(nodes, 0);
        std::vector<double> flow(tree.size(), 0.0);

        std::vector<int> queue;
        for (std::size_t k = 0; k < nodes; ++k) {
            if (degree[k] == 1) queue.push_back(static_cast<int>(k));
        }
        while (!queue.empty()) {
            const int leaf = queue.back();
            queue.pop_back();
            if (node_done[leaf]) continue;
            node_done[leaf] = 1;
            for (const auto& [other, idx] : adj[leaf]) {
                if (edge_done[idx]) continue;
                edge_done[idx] = 1;
                flow[idx] = need[leaf];
                need[other] -= need[leaf];
                need[leaf] = 0.0;
                if (--degree[other] == 1) queue.push_back(other);
                break;
            }
        }

        std::ostringstream key;
        std::vector<std::pair<std::size_t, double>> cells;
        for (std::size_t idx = 0; idx < tree.size(); ++idx) {
            if (flow[idx] < -kCompareTol) return; // infeasible basis
            if (flow[idx] <= kCompareTol) continue;
            cells.push_back({tree[idx], flow[idx]});
            key << tree[idx] << ':';
            key.precision(12);
            key << flow[idx] << ';';
        }
        if (seen_.insert(key.str()).second) vertices_.push_back(std::move(cells));
    }

    std::size_t m1_, m2_;
    std::vector<double> rows_, cols_;
    std::set<std::string> seen_;
    std::vector<std::vector<std::pair<std::size_t, double>>> vertices_;
};

} // namespace

std::vector<JointDistribution> enumerate_vertex_couplings(const DiscreteDistribution& f1,
                                                          const DiscreteDistribution& f2) {
    if (f1.size() * f2.size() > 64) {
        throw std::invalid_argument("enumerate_vertex_couplings: support product exceeds 64 cells");
    }
    TreeEnumerator en(f1.size(), f2.size(), f1.probs(), f2.probs());
    return en.run(f1, f2);
}

} // namespace frechet
