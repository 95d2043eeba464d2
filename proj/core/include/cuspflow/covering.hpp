#pragma once

#include "cuspflow/bigint.hpp"
#include "cuspflow/counting.hpp"
#include "cuspflow/lattice.hpp"
#include "cuspflow/product.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace cuspflow::covering {

struct NodeRejected : std::runtime_error {
    std::string condition;
    NodeRejected(const std::string& w, std::string cond)
        : std::runtime_error(w), condition(std::move(cond)) {}
};

/// Index node of the self-similar covering: one cusp per component, the
/// active pair (i, j), and the ball/inner-box geometry derived from the
/// heights (sup-norm ball radius c / sqrt(h_i h_j)).
struct CoverNode {
    std::vector<lattice::Cusp> cusps;
    int i = 0, j = 1;  // 0-based
    BigRat c{2};

    const lattice::Cusp& ai() const { return cusps[static_cast<size_t>(i)]; }
    const lattice::Cusp& aj() const { return cusps[static_cast<size_t>(j)]; }
    BigRat ball_radius_sq() const;  // (c / sqrt(h_i h_j))^2
    double log_diam() const;        // log(2 c / sqrt(h_i h_j))
    /// Inner-box radius of component l: c/h_i on component i (exact), else
    /// c/sqrt(h_i h_j) (returned squared with `sqrt` = true).
    void box_radius(int l, bool& is_sqrt, BigRat& value_or_sq) const;
    std::string str() const;
    bool operator==(const CoverNode& o) const;
};

/// Lookup for net membership on components other than i and j (k >= 3).
using NetProvider = std::function<const counting::NetE&(int component, const BigInt& N)>;

/// Validates the two index-set conditions (height ordering and net
/// membership) and returns the node; throws NodeRejected with the violated
/// condition otherwise.
CoverNode make_node(std::vector<lattice::Cusp> cusps, int i, int j, const BigRat& delta,
                    const BigRat& c = BigRat(2), const NetProvider* nets = nullptr);

struct Truncation {
    BigInt height_cap{100000};
    size_t max_nodes = 200000;
    BigInt min_quotient{2};  // the "large enough" successor-step quotient
};

struct SuccessorSet {
    std::vector<CoverNode> nodes;
    bool truncated = false;
};

/// All successor nodes within the truncation: a Farey-step move on component
/// j, height growth and locality on the returning component, box
/// intersection, and the height-product inequality (checked exactly).
/// Results are sorted deterministically.
SuccessorSet successors(const CoverNode& node, const BigRat& delta, const Truncation& trunc,
                        const NetProvider* nets = nullptr);

/// Independent brute-force filter over enumerated cusp pairs (k = 2 only);
/// must agree with successors() under the same truncation.
SuccessorSet successors_brute(const CoverNode& node, const BigRat& delta,
                              const Truncation& trunc);

struct CoveringSum {
    double sum = 0;
    size_t terms = 0;
    bool truncated = false;
};

/// Sum of (diam B(succ)/diam B(node))^s over the truncated successor set;
/// descending-magnitude compensated summation, deterministic.
CoveringSum covering_sum(const CoverNode& node, double s, const BigRat& delta,
                         const Truncation& trunc);

/// Bisection for the s where the truncated sum crosses 1, inside
/// ((k-1)(n-1), k(n-1)).  Returns the boundary when no crossing exists.
double covering_crossing(const CoverNode& node, const BigRat& delta, const Truncation& trunc,
                         double tol = 1e-6);

struct ChainReport {
    std::vector<CoverNode> chain;
    std::vector<double> contraction;  // diam(l+1)/diam(l)
    std::vector<std::string> violations;
    bool ok() const { return violations.empty() && chain.size() >= 2; }
};

/// Extracts the covering chain of an escaping tuple from its joint-minima
/// subsequence and verifies the three covering clauses (membership of xs in
/// every ball and box, successor membership, geometric contraction <=
/// sqrt(delta)).  Violations are reported, not silently dropped.
ChainReport chain_extract(const product::DirectionTuple& xs, const product::TupleSpectra& ts,
                          const BigRat& delta, double horizon, const BigRat& c = BigRat(2),
                          const Truncation& trunc = Truncation{});

}  // namespace cuspflow::covering
