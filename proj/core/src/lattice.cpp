#include "cuspflow/lattice.hpp"

#include "cuspflow/parallel.hpp"

#include <algorithm>
#include <stdexcept>

namespace cuspflow::lattice {

BigRat Cusp::location() const {
    if (is_infinity()) throw std::domain_error("location of the infinite cusp");
    return BigRat(num, den);
}

std::string Cusp::str() const {
    if (is_infinity()) return "1/0";
    return num.str() + "/" + den.str();
}

bool Cusp::operator<(const Cusp& o) const {
    if (is_infinity()) return false;
    if (o.is_infinity()) return true;
    return num * o.den < o.num * den;  // both den > 0
}

Cusp canonical(const BigInt& p, const BigInt& q) {
    if (p == 0 && q == 0) throw std::invalid_argument("canonical: (0, 0) is not a cusp");
    if (q == 0) return Cusp{1, 0};
    BigInt g = gcd(p, q);
    BigInt np = p / g, nq = q / g;
    if (nq < 0) { np = -np; nq = -nq; }
    return Cusp{np, nq};
}

geometry::MoebiusMap IMat2::to_double() const {
    return {a.convert_to<double>(), b.convert_to<double>(), c.convert_to<double>(),
            d.convert_to<double>()};
}

// Extended gcd: returns g = gcd(a, b) and (s, t) with a s + b t = g.
static BigInt ext_gcd(const BigInt& a, const BigInt& b, BigInt& s, BigInt& t) {
    BigInt old_r = a, r = b, old_s = 1, s1 = 0, old_t = 0, t1 = 1;
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s1; old_s = s1; s1 = tmp;
        tmp = old_t - q * t1; old_t = t1; t1 = tmp;
    }
    s = old_s;
    t = old_t;
    return old_r;
}

IMat2 realize(const Cusp& c) {
    if (c.is_infinity()) throw std::invalid_argument("realize: cusp must be finite");
    BigInt s, t;
    BigInt g = ext_gcd(c.num, c.den, s, t);
    if (g < 0) { g = -g; s = -s; t = -t; }
    if (g != 1) throw std::logic_error("realize: cusp not reduced");
    // p s + q t = 1; matrix (p, -t; q, s) has det p s + q t = 1.
    IMat2 m{c.num, -t, c.den, s};
    // Second-column reduction: (b, d) -> (b + k a, d + k c) keeps det and the
    // cusp; pick k so the Bruhat y = c*d lands in [-h/2, h/2).
    if (c.den != 0) {
        BigInt h = c.den * c.den;
        BigInt y = m.c * m.d;
        BigInt k = -(2 * y + h) / (2 * h);
        BigInt best_y = y + k * h;
        while (2 * best_y >= h) { --k; best_y -= h; }
        while (2 * best_y < -h) { ++k; best_y += h; }
        m.b += k * m.a;
        m.d += k * m.c;
    }
    return m;
}

ExactBruhat bruhat_exact(const IMat2& g0) {
    IMat2 g = g0;
    if (g.det() != 1) throw std::invalid_argument("bruhat_exact: determinant must be 1");
    if (g.c == 0) throw std::invalid_argument("bruhat_exact: parabolic matrix");
    if (g.c < 0) { g.a = -g.a; g.b = -g.b; g.c = -g.c; g.d = -g.d; }
    return ExactBruhat{BigRat(g.a, g.c), g.c * g.c, BigRat(g.c * g.d)};
}

bool Interval::contains(const BigRat& x) const {
    if (x < lo || (x == lo && !include_lo)) return false;
    if (x > hi || (x == hi && !include_hi)) return false;
    return true;
}

namespace {

struct Frac {
    BigInt p, q;
    BigRat rat() const { return BigRat(p, q); }
};

// Stern-Brocot bracket of x in the Farey sequence of order Q.  On return
// either left == right == x (x itself has denominator <= Q) or left < x <
// right are the adjacent Farey-Q fractions.
void farey_bracket(const BigRat& x, const BigInt& Q, Frac& left, Frac& right) {
    BigInt a = floor_rat(x);
    left = {a, 1};
    right = {a + 1, 1};
    if (BigRat(a) == x) { right = left; return; }
    bool from_above = true;  // which endpoint absorbs mediants this run
    for (;;) {
        if (left.q + right.q > Q) return;
        BigRat t = from_above
                       ? BigRat(right.p - x * BigRat(right.q)) / BigRat(x * BigRat(left.q) - left.p)
                       : BigRat(x * BigRat(left.q) - left.p) / BigRat(right.p - x * BigRat(right.q));
        BigInt steps = floor_rat(t);
        bool exact = (BigRat(steps) == t);
        if (!exact && steps == 0) {  // x is on the other side of the mediant
            from_above = !from_above;
            continue;
        }
        BigInt cap = from_above ? (Q - right.q) / left.q : (Q - left.q) / right.q;
        bool capped = steps > cap;
        if (capped) steps = cap;
        if (from_above) {
            right.p += steps * left.p;
            right.q += steps * left.q;
            if (exact && !capped) { left = right; return; }  // x == right
        } else {
            left.p += steps * right.p;
            left.q += steps * right.q;
            if (exact && !capped) { right = left; return; }
        }
        if (capped) return;
        from_above = !from_above;
    }
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt s, t;
    BigInt g = ext_gcd(((a % m) + m) % m, m, s, t);
    if (g < 0) { g = -g; s = -s; }
    if (g != 1) throw std::logic_error("mod_inverse: not invertible");
    return ((s % m) + m) % m;
}

// Strict left/right Farey-Q neighbor of a member fraction p/q.
Frac farey_neighbor_of_member(const BigInt& p, const BigInt& q, const BigInt& Q, bool left) {
    if (q == 1) return left ? Frac{p - 1, 1} : Frac{p + 1, 1};
    // left neighbor: p*ql - pl*q = 1 with ql = max value <= Q, ql = p^{-1} mod q.
    BigInt inv = mod_inverse(p, q);
    BigInt target = left ? inv : ((q - inv) % q);
    if (target == 0) target = q;
    BigInt qn = Q - ((Q - target) % q);
    BigInt pn = left ? BigInt((p * qn - 1) / q) : BigInt((p * qn + 1) / q);
    return {pn, qn};
}

}  // namespace

BigRat farey_below(const BigRat& x, const BigInt& max_den, bool strictly) {
    if (max_den < 1) throw std::invalid_argument("farey_below: max_den >= 1");
    Frac l, r;
    farey_bracket(x, max_den, l, r);
    if (l.p == r.p && l.q == r.q) {  // x itself
        if (!strictly) return x;
        Frac n = farey_neighbor_of_member(l.p, l.q, max_den, true);
        return n.rat();
    }
    return l.rat();
}

BigRat farey_above(const BigRat& x, const BigInt& max_den, bool strictly) {
    if (max_den < 1) throw std::invalid_argument("farey_above: max_den >= 1");
    Frac l, r;
    farey_bracket(x, max_den, l, r);
    if (l.p == r.p && l.q == r.q) {
        if (!strictly) return x;
        Frac n = farey_neighbor_of_member(l.p, l.q, max_den, false);
        return n.rat();
    }
    return r.rat();
}

std::vector<Cusp> enumerate_cusps(const Interval& region, const BigInt& h_max) {
    if (h_max < 1) throw std::invalid_argument("enumerate_cusps: h_max >= 1");
    std::vector<Cusp> out;
    if (region.hi < region.lo || (region.hi == region.lo && !(region.include_lo && region.include_hi)))
        return out;
    BigInt Q = isqrt_floor(h_max);
    BigRat first = farey_above(region.lo, Q, !region.include_lo);
    if (!region.contains(first)) return out;
    BigRat second = farey_above(first, Q, true);
    BigInt p1 = numerator(first), q1 = denominator(first);
    BigInt p2 = numerator(second), q2 = denominator(second);
    out.push_back(Cusp{p1, q1});
    while (region.contains(BigRat(p2, q2))) {
        out.push_back(Cusp{p2, q2});
        BigInt k = (Q + q1) / q2;
        BigInt p3 = k * p2 - p1, q3 = k * q2 - q1;
        p1 = p2; q1 = q2; p2 = p3; q2 = q3;
    }
    return out;
}

std::vector<Cusp> enumerate_cusps_parallel(const Interval& region, const BigInt& h_max,
                                           int workers) {
    if (workers <= 1) return enumerate_cusps(region, h_max);
    std::vector<Interval> parts;
    BigRat span = region.hi - region.lo;
    for (int w = 0; w < workers; ++w) {
        Interval part;
        part.lo = region.lo + span * BigRat(w, workers);
        part.hi = region.lo + span * BigRat(w + 1, workers);
        part.include_lo = (w == 0) ? region.include_lo : true;
        part.include_hi = (w == workers - 1) ? region.include_hi : false;
        parts.push_back(part);
    }
    std::vector<std::vector<Cusp>> results(parts.size());
    parallel::for_each_index(parts.size(), workers, [&](size_t i) {
        results[i] = enumerate_cusps(parts[i], h_max);
    });
    std::vector<Cusp> merged;
    for (auto& r : results)
        merged.insert(merged.end(), r.begin(), r.end());
    return merged;
}

BigRat cusp_gap(const Cusp& a, const Cusp& b) {
    if (a.is_infinity() || b.is_infinity())
        throw std::invalid_argument("cusp_gap: both cusps must be finite");
    if (a == b) throw std::invalid_argument("cusp_gap: cusps must differ");
    return abs_rat(a.location() - b.location());
}

Cusp neighbor_step(const Cusp& a, const Cusp& prev, const BigInt& m) {
    if (m < 1) throw std::invalid_argument("neighbor_step: m >= 1");
    BigInt cross = a.num * prev.den - prev.num * a.den;
    if (cross != 1 && cross != -1)
        throw std::invalid_argument("neighbor_step: (a, prev) must be a unimodular pair");
    return canonical(m * a.num + prev.num, m * a.den + prev.den);
}

Cusp farey_partner(const Cusp& a) {
    if (a.is_infinity()) return Cusp{0, 1};
    if (a.den == 1) return Cusp{a.num - 1, 1};
    BigInt inv = mod_inverse(a.num, a.den);  // q_f = p^{-1} mod q in (0, q)
    BigInt qf = inv == 0 ? a.den : inv;
    BigInt pf = (a.num * qf - 1) / a.den;
    return Cusp{pf, qf};
}

BigInt busemann_height_exact(const Cusp& c) {
    if (c.is_infinity()) return 1;
    return c.num * c.num + c.den * c.den;
}

std::vector<int64_t> totient_sieve(int64_t n) {
    std::vector<int64_t> phi(static_cast<size_t>(n) + 1);
    for (int64_t i = 0; i <= n; ++i) phi[static_cast<size_t>(i)] = i;
    for (int64_t i = 2; i <= n; ++i) {
        if (phi[static_cast<size_t>(i)] == i) {  // prime
            for (int64_t j = i; j <= n; j += i)
                phi[static_cast<size_t>(j)] -= phi[static_cast<size_t>(j)] / i;
        }
    }
    return phi;
}

std::vector<int64_t> distinct_prime_factors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            out.push_back(p);
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

static BigInt floor_div(const BigInt& a, const BigInt& b) {
    BigInt q = a / b;
    if ((a % b) != 0 && ((a < 0) != (b < 0))) --q;
    return q;
}

BigInt coprime_count(const BigInt& q, const BigInt& lo, const BigInt& hi) {
    if (hi < lo) return 0;
    if (q == 1) return hi - lo + 1;
    auto primes = distinct_prime_factors(q.convert_to<int64_t>());
    size_t np = primes.size();
    BigInt total = 0;
    for (uint32_t mask = 0; mask < (1u << np); ++mask) {
        BigInt d = 1;
        int bits = 0;
        for (size_t i = 0; i < np; ++i)
            if (mask & (1u << i)) { d *= primes[i]; ++bits; }
        BigInt cnt = floor_div(hi, d) - floor_div(lo - 1, d);
        total += (bits % 2 == 0) ? cnt : -cnt;
    }
    return total;
}

// -- Gaussian model -----------------------------------------------------------

std::string GaussInt::str() const {
    if (im == 0) return re.str();
    std::string s = re.str();
    s += (im >= 0 ? "+" : "-");
    BigInt ai = abs(im);
    if (ai != 1) s += ai.str();
    s += "i";
    return s;
}

GaussInt gauss_div_round(const GaussInt& a, const GaussInt& b) {
    if (b.is_zero()) throw std::domain_error("gauss_div_round: division by zero");
    BigInt n = b.norm();
    // a * conj(b) / |b|^2, rounded to the nearest integer componentwise.
    BigInt xr = a.re * b.re + a.im * b.im;
    BigInt xi = a.im * b.re - a.re * b.im;
    auto round_div = [&](const BigInt& num) {
        return floor_div(2 * num + n, 2 * n);
    };
    return {round_div(xr), round_div(xi)};
}

GaussInt gauss_mod(const GaussInt& a, const GaussInt& b) {
    GaussInt q = gauss_div_round(a, b);
    return a - q * b;
}

GaussInt gauss_gcd(GaussInt a, GaussInt b) {
    while (!b.is_zero()) {
        GaussInt r = gauss_mod(a, b);
        a = b;
        b = r;
    }
    return a;
}

GaussInt first_quadrant(const GaussInt& z, GaussInt* unit_out) {
    if (z.is_zero()) {
        if (unit_out) *unit_out = {1, 0};
        return z;
    }
    GaussInt u{1, 0}, w = z;
    const GaussInt i{0, 1};
    for (int k = 0; k < 4; ++k) {
        if (w.re > 0 && w.im >= 0) {
            if (unit_out) *unit_out = u;
            return w;
        }
        w = w * i;
        u = u * i;
    }
    throw std::logic_error("first_quadrant: unreachable");
}

GaussCusp gauss_canonical(const GaussInt& p, const GaussInt& q) {
    if (p.is_zero() && q.is_zero())
        throw std::invalid_argument("gauss_canonical: (0, 0) is not a cusp");
    if (q.is_zero()) return GaussCusp{{1, 0}, {0, 0}};
    GaussInt g = gauss_gcd(p, q);
    auto exact_div = [](const GaussInt& a, const GaussInt& b) {
        GaussInt q0 = gauss_div_round(a, b);
        if (!(a - q0 * b).is_zero()) throw std::logic_error("gauss_canonical: inexact division");
        return q0;
    };
    GaussInt rp = exact_div(p, g), rq = exact_div(q, g);
    GaussInt unit;
    GaussInt nden = first_quadrant(rq, &unit);
    GaussInt nnum = rp * unit;
    return GaussCusp{nnum, nden};
}

std::string GaussCusp::str() const {
    return "(" + num.str() + ")/(" + den.str() + ")";
}

BigRat gauss_gap_sq(const GaussCusp& a, const GaussCusp& b) {
    if (a.is_infinity() || b.is_infinity())
        throw std::invalid_argument("gauss_gap_sq: both cusps must be finite");
    // (a - b) = (num_a den_b - num_b den_a) / (den_a den_b)
    GaussInt dn = a.num * b.den - b.num * a.den;
    GaussInt dd = a.den * b.den;
    return BigRat(dn.norm(), dd.norm());
}

bool Box::contains(const BigRat& re, const BigRat& im) const {
    return re >= re_lo && re < re_hi && im >= im_lo && im < im_hi;
}

std::vector<GaussCusp> gauss_enumerate(const Box& region, const BigInt& h_max) {
    std::vector<GaussCusp> out;
    BigInt qmax = isqrt_floor(h_max);
    for (BigInt qr = 1; qr <= qmax; ++qr) {
        BigInt rem = h_max - qr * qr;
        BigInt imax = isqrt_floor(rem);
        for (BigInt qi = 0; qi <= imax; ++qi) {
            GaussInt q{qr, qi};
            BigInt n = q.norm();
            // p ranges over the integer bounding box of q * region corners.
            BigRat c1r = region.re_lo * qr - region.im_lo * qi;
            BigRat c2r = region.re_lo * qr - region.im_hi * qi;
            BigRat c3r = region.re_hi * qr - region.im_lo * qi;
            BigRat c4r = region.re_hi * qr - region.im_hi * qi;
            BigRat c1i = region.re_lo * qi + region.im_lo * qr;
            BigRat c2i = region.re_lo * qi + region.im_hi * qr;
            BigRat c3i = region.re_hi * qi + region.im_lo * qr;
            BigRat c4i = region.re_hi * qi + region.im_hi * qr;
            BigInt rlo = floor_rat(std::min({c1r, c2r, c3r, c4r})) - 1;
            BigInt rhi = ceil_rat(std::max({c1r, c2r, c3r, c4r})) + 1;
            BigInt ilo = floor_rat(std::min({c1i, c2i, c3i, c4i})) - 1;
            BigInt ihi = ceil_rat(std::max({c1i, c2i, c3i, c4i})) + 1;
            for (BigInt pr = rlo; pr <= rhi; ++pr) {
                for (BigInt pi = ilo; pi <= ihi; ++pi) {
                    GaussInt p{pr, pi};
                    // location p/q = p conj(q) / |q|^2
                    BigRat locr(p.re * q.re + p.im * q.im, n);
                    BigRat loci(p.im * q.re - p.re * q.im, n);
                    if (!region.contains(locr, loci)) continue;
                    GaussInt g = gauss_gcd(p, q);
                    if (g.norm() != 1) continue;
                    out.push_back(GaussCusp{p, q});
                }
            }
        }
    }
    std::sort(out.begin(), out.end(), [&](const GaussCusp& a, const GaussCusp& b) {
        BigRat ar(a.num.re * a.den.re + a.num.im * a.den.im, a.den.norm());
        BigRat br(b.num.re * b.den.re + b.num.im * b.den.im, b.den.norm());
        if (ar != br) return ar < br;
        BigRat ai(a.num.im * a.den.re - a.num.re * a.den.im, a.den.norm());
        BigRat bi(b.num.im * b.den.re - b.num.re * b.den.im, b.den.norm());
        return ai < bi;
    });
    return out;
}

geometry::MoebiusMap3 GMat2::to_double() const {
    auto cv = [](const GaussInt& z) {
        return std::complex<double>(z.re.convert_to<double>(), z.im.convert_to<double>());
    };
    return {cv(a), cv(b), cv(c), cv(d)};
}

GMat2 gauss_realize(const GaussCusp& c) {
    if (c.is_infinity()) throw std::invalid_argument("gauss_realize: cusp must be finite");
    // Extended Euclid over Z[i].
    GaussInt old_r = c.num, r = c.den;
    GaussInt old_s{1, 0}, s{0, 0}, old_t{0, 0}, t{1, 0};
    while (!r.is_zero()) {
        GaussInt q = gauss_div_round(old_r, r);
        GaussInt tmp = old_r - q * r; old_r = r; r = tmp;
        tmp = old_s - q * s; old_s = s; s = tmp;
        tmp = old_t - q * t; old_t = t; t = tmp;
    }
    // old_r is a unit u: num*old_s + den*old_t = u; divide the Bezout pair by u.
    GaussInt u = old_r;
    if (u.norm() != 1) throw std::logic_error("gauss_realize: cusp not reduced");
    GaussInt uinv{u.re, -u.im};  // conj(u) = u^{-1} for units
    GaussInt bs = old_s * uinv, bt = old_t * uinv;
    GMat2 m{c.num, -bt, c.den, bs};
    if (!(m.det() == GaussInt{1, 0})) throw std::logic_error("gauss_realize: determinant != 1");
    // Reduce the second column modulo the first.
    if (!c.den.is_zero()) {
        GaussInt k = gauss_div_round(GaussInt{-m.d.re, -m.d.im}, m.c);
        m.b = m.b + k * m.a;
        m.d = m.d + k * m.c;
    }
    return m;
}

}  // namespace cuspflow::lattice
