#pragma once

#include "cuspflow/bigint.hpp"
#include "cuspflow/geometry.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace cuspflow::lattice {

/// A cusp of the modular lattice: a reduced rational p/q (q > 0) or infinity
/// encoded as 1/0.  The height is den^2 (1 for infinity).
struct Cusp {
    BigInt num = 1;
    BigInt den = 0;

    bool is_infinity() const { return den == 0; }
    BigInt height() const { return is_infinity() ? BigInt(1) : BigInt(den * den); }
    BigRat location() const;
    std::string str() const;

    bool operator==(const Cusp& o) const { return num == o.num && den == o.den; }
    bool operator<(const Cusp& o) const;  // by location, infinity last
};

/// Reduced, sign-normalized cusp from an arbitrary pair; rejects (0, 0).
Cusp canonical(const BigInt& p, const BigInt& q);

/// Exact unimodular integer matrix (columns).
struct IMat2 {
    BigInt a = 1, b = 0, c = 0, d = 1;
    BigInt det() const { return a * d - b * c; }
    geometry::MoebiusMap to_double() const;
};

/// Integer matrix (p p*; q q*) of determinant 1 with first column p, q and the
/// second column reduced so the Bruhat y-component satisfies |y| <= h/2.
IMat2 realize(const Cusp& c);

/// Exact Bruhat data of an integer matrix with c != 0: cusp a/c and e^r = c^2.
struct ExactBruhat {
    BigRat x;
    BigInt er;  // e^r
    BigRat y;
};
ExactBruhat bruhat_exact(const IMat2& g);

/// Half-open by default; set include_hi for a closed right end.
struct Interval {
    BigRat lo, hi;
    bool include_lo = true;
    bool include_hi = false;

    bool contains(const BigRat& x) const;
    BigRat length() const { return hi - lo; }
};

/// Largest fraction <= x (strict < if strictly) with denominator <= max_den.
BigRat farey_below(const BigRat& x, const BigInt& max_den, bool strictly);
/// Smallest fraction >= x (strict > if strictly) with denominator <= max_den.
BigRat farey_above(const BigRat& x, const BigInt& max_den, bool strictly);

/// All reduced fractions in the interval with den^2 <= h_max, sorted by
/// location.  Farey-neighbor iteration, exact arithmetic throughout.
std::vector<Cusp> enumerate_cusps(const Interval& region, const BigInt& h_max);

/// Same result, computed on `workers` disjoint sub-intervals and merged
/// order-stably; byte-identical output for every worker count.
std::vector<Cusp> enumerate_cusps_parallel(const Interval& region, const BigInt& h_max,
                                           int workers);

/// Exact |a - b| for finite cusps.
BigRat cusp_gap(const Cusp& a, const Cusp& b);

/// Continued-fraction successor (m*p + p_prev)/(m*q + q_prev); (a, prev) must
/// be a unimodular (consecutive-convergent) pair and m >= 1.
Cusp neighbor_step(const Cusp& a, const Cusp& prev, const BigInt& m);

/// Some Farey neighbor of a finite cusp (a unimodular partner), denominator
/// in [1, den(a)).
Cusp farey_partner(const Cusp& a);

/// h-tilde(p/q) = p^2 + q^2 exactly (Busemann height of the realized matrix).
BigInt busemann_height_exact(const Cusp& c);

// -- small number-theory helpers --------------------------------------------

/// phi(0..n) by sieve.
std::vector<int64_t> totient_sieve(int64_t n);

/// #{p in [lo, hi] : gcd(p, q) = 1} via Moebius over the radical of q.
BigInt coprime_count(const BigInt& q, const BigInt& lo, const BigInt& hi);

/// Distinct prime factors of n > 0 (trial division; intended for n <= ~10^12).
std::vector<int64_t> distinct_prime_factors(int64_t n);

// -- model descriptors -------------------------------------------------------

/// PSL(2,Z) on H^2.  Cusps are the rationals; heights q^2; the fixed ball B
/// defaults to [-2, 2).
struct ModularModel {
    int n = 2;
    Interval ball{BigRat(-2), BigRat(2)};
};

// -- Gaussian-integer (PSL(2,Z[i]), n = 3) model -----------------------------

struct GaussInt {
    BigInt re, im;

    GaussInt() : re(0), im(0) {}
    GaussInt(BigInt r, BigInt i) : re(std::move(r)), im(std::move(i)) {}
    bool is_zero() const { return re == 0 && im == 0; }
    BigInt norm() const { return re * re + im * im; }
    GaussInt operator+(const GaussInt& o) const { return {re + o.re, im + o.im}; }
    GaussInt operator-(const GaussInt& o) const { return {re - o.re, im - o.im}; }
    GaussInt operator*(const GaussInt& o) const {
        return {re * o.re - im * o.im, re * o.im + im * o.re};
    }
    GaussInt operator-() const { return {-re, -im}; }
    bool operator==(const GaussInt& o) const { return re == o.re && im == o.im; }
    std::string str() const;
};

/// Nearest-rounding quotient, |rem| < |b|.
GaussInt gauss_div_round(const GaussInt& a, const GaussInt& b);
GaussInt gauss_mod(const GaussInt& a, const GaussInt& b);
GaussInt gauss_gcd(GaussInt a, GaussInt b);
/// The associate u*z with Re > 0, Im >= 0 (first quadrant); unit for units.
GaussInt first_quadrant(const GaussInt& z, GaussInt* unit_out = nullptr);

struct GaussCusp {
    GaussInt num{BigInt(1), BigInt(0)};
    GaussInt den{BigInt(0), BigInt(0)};

    bool is_infinity() const { return den.is_zero(); }
    BigInt height() const { return is_infinity() ? BigInt(1) : den.norm(); }
    std::string str() const;  // "(a+bi)/(c+di)"
    bool operator==(const GaussCusp& o) const { return num == o.num && den == o.den; }
};

GaussCusp gauss_canonical(const GaussInt& p, const GaussInt& q);

/// Exact |a - b|^2 as a rational.
BigRat gauss_gap_sq(const GaussCusp& a, const GaussCusp& b);

struct Box {
    BigRat re_lo, re_hi, im_lo, im_hi;  // half-open in both coordinates
    bool contains(const BigRat& re, const BigRat& im) const;
};

/// All reduced Gaussian fractions p/q in the box with |q|^2 <= h_max.
std::vector<GaussCusp> gauss_enumerate(const Box& region, const BigInt& h_max);

/// Determinant-1 realization (p p*; q q*) over Z[i].
struct GMat2 {
    GaussInt a, b, c, d;
    GaussInt det() const { return a * d - b * c; }
    geometry::MoebiusMap3 to_double() const;
};
GMat2 gauss_realize(const GaussCusp& c);

struct GaussianModel {
    int n = 3;
    Box ball{BigRat(-2), BigRat(2), BigRat(-2), BigRat(2)};
};

}  // namespace cuspflow::lattice
