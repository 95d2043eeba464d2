#pragma once

#include "cuspflow/bigint.hpp"
#include "cuspflow/lattice.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cuspflow::excursion {

/// A geodesic direction: an exact rational, or a certified rational interval
/// enclosing an irrational (256-bit default for the built-in constants).
struct Direction {
    BigRat lo, hi;
    bool exact = true;

    static Direction rational(const BigRat& r) { return {r, r, true}; }
    static Direction interval(BigRat l, BigRat h);
    /// sqrt(n) certified to prec_bits fractional bits.
    static Direction sqrt_of(const BigInt& n, unsigned prec_bits = 256);
    /// (sqrt(5) - 1) / 2.
    static Direction golden(unsigned prec_bits = 256);
    /// 60-decimal truncation intervals of the constants.
    static Direction pi();
    static Direction euler();

    BigRat mid() const { return (lo + hi) / 2; }
    double to_double() const { return mid().convert_to<double>(); }
    Direction affine(const BigRat& mul, const BigRat& add) const;  // mul > 0
};

/// Parses "p/q", decimals, or the names golden | sqrt2m1 | pi3 | e2
/// (the latter two reduced mod 1: pi - 3, e - 2).
std::optional<Direction> parse_direction(const std::string& s);

struct CfExpansion {
    std::vector<BigInt> quotients;                     // a_0, a_1, ...
    std::vector<std::pair<BigInt, BigInt>> convergents;  // (p_k, q_k)
    bool exact_termination = false;  // rational fully expanded
    bool truncated = false;          // interval precision exhausted
};

/// Continued-fraction expansion; stops at depth terms, when q_k^2 > h_limit
/// (if h_limit > 0), at exact termination, or when the interval can no longer
/// certify a partial quotient (truncated flag).
CfExpansion cf_expand(const Direction& x, int depth, const BigInt& h_limit = 0);

/// Closed-form excursion profile of one cusp: t -> e^{-t} / (h (d^2 + e^{-2t})).
struct ExcursionProfile {
    lattice::Cusp cusp;
    BigRat dist;  // |x - cusp|, exact
    BigInt h;

    double value_at(double t) const;
    double log_value_at(double t) const;
};

/// Stable log-space evaluation used everywhere internally.
double profile_log_value(double log_dist, double log_h, double t);

double profile_value(const BigRat& x, const lattice::Cusp& a, double t);

/// (t_peak, peak) = (log 1/d, 1/(2 h d)).  Throws CuspHit when d = 0.
struct CuspHit : std::domain_error {
    explicit CuspHit(const std::string& w) : std::domain_error(w) {}
};
std::pair<double, double> peak(const BigRat& x, const lattice::Cusp& a);

/// Threshold-crossing times of the profile at level theta, or nullopt when
/// the discriminant is negative (2 theta h d > 1).
std::optional<std::pair<double, double>> crossing_times(const BigRat& x, const lattice::Cusp& a,
                                                        const BigRat& theta);

struct ExcursionRecord {
    lattice::Cusp cusp;
    BigRat dist;       // exact for exact directions, else the certified midpoint
    double log_dist;   // -inf on terminal records
    double log_h;
    double t_enter = 0, t_peak = 0, t_exit = 0;  // +inf tail on terminal records
    double log_peak = 0;
    bool marginal = false;  // threshold met within certification slack only
    bool terminal = false;  // geodesic runs into the cusp (d = 0)

    double peak_value() const;
};

struct Spectrum {
    Direction x;
    BigRat theta;
    BigInt h_max;
    std::vector<ExcursionRecord> records;  // sorted by t_enter
    bool truncated = false;
};

/// Spectrum by the continued-fraction route (modular model).
Spectrum spectrum(const Direction& x, const BigRat& theta, const BigInt& h_max);

/// Spectrum by direct enumeration of candidate cusps up to h_max; must agree
/// with the CF route cusp-for-cusp on the modular model.
Spectrum spectrum_by_enumeration(const Direction& x, const BigRat& theta, const BigInt& h_max);

struct GapEntry {
    lattice::Cusp a, b;
    BigRat ratio_sq;   // dist(x, a)^2 * h(a) * h(b), exact
    double ratio;      // sqrt of the above
    double time_gap;   // t_enter(b) - t_exit(a)
};

struct GapReport {
    std::vector<GapEntry> entries;
    double min_ratio = 0, max_ratio = 0, max_time_gap = 0;
};

/// Consecutive-pair distance and timing laws of a spectrum.
GapReport consecutive_gap_check(const Spectrum& s);

/// CSV/JSON row schema: p, q, t_enter, t_peak, t_exit, peak.
std::vector<std::vector<std::string>> spectrum_rows(const Spectrum& s);

}  // namespace cuspflow::excursion
