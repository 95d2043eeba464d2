#pragma once

#include "cuspflow/bigint.hpp"
#include "cuspflow/excursion.hpp"
#include "cuspflow/lattice.hpp"

#include <stdexcept>
#include <string>
#include <vector>

namespace cuspflow::counting {

struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& w) : std::runtime_error(w) {}
};

/// Exact number of cusps a' with |a' - a| <= A3/h(a) (closed ball) and
/// h(a') in [A1 e^t h(a), A2 e^t h(a)].  Throws BudgetExceeded when the top
/// of the height band exceeds `budget`; no partial counts.
BigInt count_annulus(const lattice::ModularModel& model, const lattice::Cusp& a, double A1,
                     double A2, double A3, double t, const BigInt& budget = BigInt(1) << 48);

/// Same count for the Gaussian model (brute-force enumeration).
BigInt count_annulus_gauss(const lattice::GaussianModel& model, const lattice::GaussCusp& a,
                           double A1, double A2, double A3, double t,
                           const BigInt& budget = BigInt(1) << 28);

struct GrowthFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    std::vector<double> t_used;
    std::vector<BigInt> counts;
    std::vector<std::string> warnings;
    double min_count_over_rate = 0;  // recorded lower constant: min count / e^{(n-1)t}
};

/// Least-squares slope of log count against t.  Zero counts are dropped with
/// a warning; counts below 5 are excluded from the fit (shot noise).
GrowthFit growth_exponent(const lattice::ModularModel& model, const lattice::Cusp& a, double A1,
                          double A2, double A3, const std::vector<double>& t_grid);

GrowthFit growth_exponent_gauss(const lattice::GaussianModel& model, const lattice::GaussCusp& a,
                                double A1, double A2, double A3,
                                const std::vector<double>& t_grid);

/// A cusp w with h(w) <= X and |x - w| <= 1/sqrt(X); existence on the modular
/// model is the Dirichlet convergent with q_k <= sqrt(X) < q_{k+1}.  The
/// witness is re-verified exactly before returning.
lattice::Cusp dirichlet_witness(const excursion::Direction& x, const BigInt& X);

struct WeightedSum {
    BigRat sum;         // exact sum of h^{-1/2} = 1/q over the region
    double ratio;       // sum / (sqrt(X) * |B|)
    BigInt cusp_count;
};

/// Exact sum of h(a)^{-(n-1)/2} over cusps in B with h <= X (modular: 1/q).
WeightedSum weighted_height_sum(const lattice::ModularModel& model,
                                const lattice::Interval& region, const BigInt& X);

struct CoveringError : std::runtime_error {
    BigRat uncovered_point;
    CoveringError(const std::string& w, BigRat pt)
        : std::runtime_error(w), uncovered_point(std::move(pt)) {}
};

/// The net E(N): greedily packed cusps of height <= N, covering radius
/// c/sqrt(N), packing radius c'/sqrt(N).
struct NetE {
    BigInt N;
    lattice::Interval region;
    std::vector<lattice::Cusp> members;
    BigRat c{3, 2};       // covering constant
    BigRat c_prime{1, 4}; // packing constant
    bool covering_verified = false;

    bool contains(const lattice::Cusp& a) const;
};

/// Greedy selection in increasing-height order, rejecting candidates strictly
/// within c'/sqrt(N) of an accepted member; the covering property is then
/// verified on a grid of resolution c/(4 sqrt(N)).  Throws CoveringError with
/// the first uncovered grid point when c is too small.
NetE build_net(const lattice::ModularModel& model, const lattice::Interval& region,
               const BigInt& N, const BigRat& c = BigRat(3, 2),
               const BigRat& c_prime = BigRat(1, 4));

}  // namespace cuspflow::counting
