#pragma once

#include "cuspflow/bigint.hpp"
#include "cuspflow/lattice.hpp"
#include "cuspflow/product.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cuspflow::cantor {

struct BuildError : std::runtime_error {
    std::string node;
    BuildError(const std::string& w, std::string node_label)
        : std::runtime_error(w), node(std::move(node_label)) {}
};

/// Measure of the full one-step child family of a node under the
/// construction rule (not just the materialized subset).
struct FamilyStats {
    double count = 0;          // number of children in the full family
    double log_measure = 0;    // log of the summed child-interval lengths
    bool exact = false;        // measured by exact rational summation
    BigRat measure;            // valid when exact
};

/// A ball of a Cantor-like collection.  Built trees carry cusp labels and
/// full-family stats; synthetic trees carry geometry only.
struct CantorNode {
    BigRat center, radius;
    int level = 0;
    BigInt height{1};
    std::optional<lattice::Cusp> cusp, prev, intermediate;
    std::optional<FamilyStats> family;
    std::vector<CantorNode> children;

    BigRat lo() const { return center - radius; }
    BigRat hi() const { return center + radius; }
};

// -- steep tree (child heights follow the h^{1+delta} law) --------------------

struct SteepParams {
    BigRat delta{1};        // rational with a small denominator
    BigRat eps{1, 4};
    int depth = 4;
    int branch_cap = 8;     // materialized children per node
    int recurse_cap = 3;    // children recursed into (height extremes first)
    BigInt height_cap{0};   // nonzero: error when a band outruns this budget
    int64_t exact_family_limit = 4096;  // exact rational family sums up to this window
};

/// Nested balls B(a, eps/h(a)) whose children are the Farey-step successors
/// of a with heights in [h^{1+delta}, 2 h^{1+delta}], each child ball inside
/// the parent and pairwise disjoint (all checked exactly).  Per-node family
/// stats cover the full successor window even where materialization is
/// capped.
CantorNode build_steep_tree(const lattice::Cusp& root, const lattice::Cusp& root_prev,
                            const SteepParams& params);

// -- slice tree (second-model tree driven by a steep base sequence) -----------

struct SliceParams {
    BigRat delta{1};
    BigRat eps{1, 4};
    int depth = 4;
    int branch_cap = 8;
    int recurse_cap = 2;
    BigRat center{1, 2};               // where to place the root cusp
    int64_t exact_band_limit = 100000; // exact full-band counts up to this q-range
};

/// Base-height law validation plus the two-stage construction: from each node
/// a the intermediate a' (one Farey step of size ~ log h-tilde) and children
/// in B(a', eps) with heights in the next h-tilde band.  Node heights track
/// h-tilde(p) = h(p)/round(log h(p)) of the base sequence.
CantorNode build_slice_tree(const std::vector<BigInt>& base_heights, const SliceParams& params);

/// Synthetic constant-branching tree: K children per node, diameters scaled
/// by lambda each level, exact rational placement.  K * lambda must be <= 1.
CantorNode build_synthetic_tree(const BigRat& center, const BigRat& d0, const BigRat& lambda,
                                int K, int depth);

// -- lower-bound evaluation ----------------------------------------------------

struct BoundRow {
    int j = 0;
    double log_inv_d = 0;      // log(1/d_j)
    double log_inv_delta = 0;  // log(1/Delta_j); NaN on the deepest level
    double s = 0;              // defined for j >= 1
    bool delta_exact = false;
};

struct BoundReport {
    int n = 2;
    std::vector<BoundRow> rows;

    double s_at(int j) const;
    std::vector<std::vector<std::string>> csv_rows() const;  // (j, d_j, Delta_j, s_j)
};

/// d_j, Delta_j measured per level (family stats when present, else the exact
/// sum over materialized children) and the lower-bound sequence
/// s_j = (n-1) - sum_{i<j} log(1/Delta_i) / log(1/d_j).
BoundReport evaluate_bound(const CantorNode& root, int n = 2);

/// The ideal finite-depth value (n-1)(1 - ((1+d)^j - 1) / (2 (1+d)^j)).
double ideal_steep_s(int j, double delta, int n = 2);

/// Structural conditions of a Cantor-like collection: nesting, sibling
/// disjointness, strictly shrinking diameters.  Returns problems found.
std::vector<std::string> validate_tree(const CantorNode& root);

/// Location of the deepest minimal-height leaf.
BigRat deepest_location(const CantorNode& root);

/// Heights along the minimal-height path from the root.
std::vector<BigInt> path_heights(const CantorNode& root);

// -- separated-spectrum pair pipeline ------------------------------------------

struct SeparatedPairParams {
    BigRat delta{1, 4};
    int depth = 8;
    double base_log_height = 40.0;  // target log-height of the base root
    BigRat eps{1, 4};
};

struct SeparatedPair {
    product::DirectionTuple tuple;  // (x1, x2)
    double horizon = 0;             // suggested classification window
    std::vector<BigInt> base_heights;
    CantorNode base_path;
    CantorNode slice_path;
};

/// Builds a base steep path, runs the slice construction against it, and
/// returns the deepest locations of both as a direction pair whose joint
/// excursion heights stay separated by ~log h at matching levels.
SeparatedPair build_separated_pair(const SeparatedPairParams& params);

}  // namespace cuspflow::cantor
