#include "cuspflow/excursion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cuspflow::excursion {

using lattice::Cusp;

static const double kInf = std::numeric_limits<double>::infinity();

Direction Direction::interval(BigRat l, BigRat h) {
    if (h < l) throw std::invalid_argument("Direction: empty interval");
    Direction d;
    d.lo = std::move(l);
    d.hi = std::move(h);
    d.exact = (d.lo == d.hi);
    return d;
}

Direction Direction::sqrt_of(const BigInt& n, unsigned prec_bits) {
    if (n < 0) throw std::domain_error("Direction::sqrt_of: negative");
    BigInt scaled = n << (2 * prec_bits);
    BigInt s = isqrt_floor(scaled);
    BigInt den = BigInt(1) << prec_bits;
    return interval(BigRat(s, den), BigRat(s + 1, den));
}

Direction Direction::golden(unsigned prec_bits) {
    return sqrt_of(5, prec_bits).affine(BigRat(1, 2), BigRat(-1, 2));
}

Direction Direction::affine(const BigRat& mul, const BigRat& add) const {
    if (mul <= 0) throw std::invalid_argument("Direction::affine: mul must be positive");
    return interval(lo * mul + add, hi * mul + add);
}

static Direction decimal_truncation(const std::string& digits) {
    auto v = parse_rational(digits);
    BigRat ulp(BigInt(1), pow(BigInt(10), 60));
    return Direction::interval(*v, *v + ulp);
}

Direction Direction::pi() {
    return decimal_truncation(
        "3.141592653589793238462643383279502884197169399375105820974944");
}

Direction Direction::euler() {
    return decimal_truncation(
        "2.718281828459045235360287471352662497757247093699959574966967");
}

std::optional<Direction> parse_direction(const std::string& s) {
    if (s == "golden") return Direction::golden();
    if (s == "sqrt2m1") return Direction::sqrt_of(2).affine(BigRat(1), BigRat(-1));
    if (s == "pi3") return Direction::pi().affine(BigRat(1), BigRat(-3));
    if (s == "e2") return Direction::euler().affine(BigRat(1), BigRat(-2));
    auto r = parse_rational(s);
    if (!r) return std::nullopt;
    return Direction::rational(*r);
}

// -- continued fractions ------------------------------------------------------

static CfExpansion cf_expand_exact(const BigRat& x, int depth, const BigInt& h_limit) {
    CfExpansion out;
    BigInt num = numerator(x), den = denominator(x);
    BigInt pm1 = 1, qm1 = 0, pm2 = 0, qm2 = 1;  // (p_{-1}, q_{-1}), (p_{-2}, q_{-2})
    for (int k = 0; k < depth; ++k) {
        BigInt a = num / den;
        if (num < 0 && a * den != num) --a;  // floor for negatives
        BigInt p = a * pm1 + pm2, q = a * qm1 + qm2;
        if (h_limit > 0 && q * q > h_limit && k > 0) break;
        out.quotients.push_back(a);
        out.convergents.emplace_back(p, q);
        BigInt rem = num - a * den;
        if (rem == 0) { out.exact_termination = true; break; }
        num = den;
        den = rem;
        pm2 = pm1; qm2 = qm1; pm1 = p; qm1 = q;
    }
    return out;
}

static CfExpansion cf_expand_interval(BigRat lo, BigRat hi, int depth, const BigInt& h_limit) {
    CfExpansion out;
    BigInt pm1 = 1, qm1 = 0, pm2 = 0, qm2 = 1;
    for (int k = 0; k < depth; ++k) {
        BigInt alo = floor_rat(lo), ahi = floor_rat(hi);
        if (alo != ahi) { out.truncated = true; break; }
        BigInt a = alo;
        BigInt p = a * pm1 + pm2, q = a * qm1 + qm2;
        if (h_limit > 0 && q * q > h_limit && k > 0) break;
        out.quotients.push_back(a);
        out.convergents.emplace_back(p, q);
        BigRat flo = lo - BigRat(a), fhi = hi - BigRat(a);
        if (flo <= 0) { out.truncated = true; break; }  // could be an exact integer
        // next = 1/frac, orientation flips
        BigRat nlo = BigRat(1) / fhi, nhi = BigRat(1) / flo;
        lo = nlo;
        hi = nhi;
        pm2 = pm1; qm2 = qm1; pm1 = p; qm1 = q;
    }
    return out;
}

CfExpansion cf_expand(const Direction& x, int depth, const BigInt& h_limit) {
    if (depth < 1) throw std::invalid_argument("cf_expand: depth >= 1");
    return x.exact ? cf_expand_exact(x.lo, depth, h_limit)
                   : cf_expand_interval(x.lo, x.hi, depth, h_limit);
}

// -- profiles -----------------------------------------------------------------

double profile_log_value(double log_dist, double log_h, double t) {
    // log W = -t - log h - log(d^2 + e^{-2t})
    double a = 2 * log_dist, b = -2 * t;
    double m = std::max(a, b);
    double lse = std::isinf(m) && m < 0 ? b : m + std::log(std::exp(a - m) + std::exp(b - m));
    return -t - log_h - lse;
}

double ExcursionProfile::log_value_at(double t) const {
    double ld = dist == 0 ? -kInf : log_rat(dist);
    return profile_log_value(ld, log_big(h), t);
}

double ExcursionProfile::value_at(double t) const { return std::exp(log_value_at(t)); }

double profile_value(const BigRat& x, const Cusp& a, double t) {
    if (a.is_infinity()) throw std::invalid_argument("profile_value: finite cusps only");
    ExcursionProfile p{a, abs_rat(x - a.location()), a.height()};
    return p.value_at(t);
}

std::pair<double, double> peak(const BigRat& x, const Cusp& a) {
    BigRat d = abs_rat(x - a.location());
    if (d == 0) throw CuspHit("peak: direction runs into the cusp " + a.str());
    double ld = log_rat(d), lh = log_big(a.height());
    return {-ld, std::exp(-std::log(2.0) - lh - ld)};
}

// Crossing times from logs; s = 2 theta h d must satisfy s <= 1.
static std::optional<std::pair<double, double>> crossing_from_logs(double log_dist, double log_h,
                                                                   double log_theta) {
    double log_s = std::log(2.0) + log_theta + log_h + log_dist;
    if (log_s > 0) return std::nullopt;
    double s2 = std::exp(2 * log_s);
    double root = std::sqrt(std::max(0.0, 1 - s2));
    double t_enter = std::log(2.0) + log_theta + log_h - std::log1p(root);
    double t_exit = -(std::log(2.0) + log_theta + log_h + 2 * log_dist) + std::log1p(root);
    return std::make_pair(t_enter, t_exit);
}

std::optional<std::pair<double, double>> crossing_times(const BigRat& x, const Cusp& a,
                                                        const BigRat& theta) {
    if (theta <= 0) throw std::invalid_argument("crossing_times: theta > 0");
    BigRat d = abs_rat(x - a.location());
    if (d == 0) {
        // theta h e^{-2t} = e^{-t}: single entry, never exits
        double t = log_rat(theta) + log_big(a.height());
        return std::make_pair(t, kInf);
    }
    // exact discriminant test: s = 2 theta h d
    BigRat s = 2 * theta * BigRat(a.height()) * d;
    if (s > 1) return std::nullopt;
    return crossing_from_logs(log_rat(d), log_big(a.height()), log_rat(theta));
}

double ExcursionRecord::peak_value() const { return std::exp(log_peak); }

// -- spectra ------------------------------------------------------------------

namespace {

// Qualification of cusp a for direction interval [xlo, xhi] at threshold
// theta: s = 2 theta h d <= 1.  Returns +1 certified-in, -1 certified-out,
// 0 uncertifiable.  For exact directions always certified.
int qualify(const BigRat& xlo, const BigRat& xhi, const Cusp& a, const BigRat& theta,
            BigRat& dist_out, bool& boundary) {
    BigRat loc = a.location();
    BigRat dlo, dhi;
    if (loc < xlo) { dlo = xlo - loc; dhi = xhi - loc; }
    else if (loc > xhi) { dlo = loc - xhi; dhi = loc - xlo; }
    else { dlo = 0; dhi = std::max(BigRat(xhi - loc), BigRat(loc - xlo)); }
    BigRat two_th = 2 * theta * BigRat(a.height());
    boundary = false;
    if (two_th * dhi <= 1) {
        dist_out = (dlo + dhi) / 2;
        boundary = (two_th * dhi == 1 || two_th * dlo == 1);
        return 1;
    }
    if (two_th * dlo > 1) return -1;
    return 0;
}

ExcursionRecord make_record(const Cusp& a, const BigRat& dist, const BigRat& theta,
                            bool boundary) {
    ExcursionRecord r;
    r.cusp = a;
    r.dist = dist;
    r.log_h = log_big(a.height());
    if (dist == 0) {
        r.terminal = true;
        r.log_dist = -kInf;
        r.t_enter = log_rat(theta) + r.log_h;
        r.t_peak = kInf;
        r.t_exit = kInf;
        r.log_peak = kInf;
        return r;
    }
    r.log_dist = log_rat(dist);
    auto ts = crossing_from_logs(r.log_dist, r.log_h, log_rat(theta));
    if (!ts) throw std::logic_error("make_record: no crossing for a qualified cusp");
    r.t_enter = ts->first;
    r.t_exit = ts->second;
    r.t_peak = -r.log_dist;
    r.log_peak = -std::log(2.0) - r.log_h - r.log_dist;
    r.marginal = boundary;
    return r;
}

}  // namespace

static void sort_dedupe(std::vector<ExcursionRecord>& recs) {
    std::sort(recs.begin(), recs.end(), [](const ExcursionRecord& a, const ExcursionRecord& b) {
        if (a.cusp.den != b.cusp.den) return a.cusp.den < b.cusp.den;
        return a.cusp.num < b.cusp.num;
    });
    recs.erase(std::unique(recs.begin(), recs.end(),
                           [](const ExcursionRecord& a, const ExcursionRecord& b) {
                               return a.cusp == b.cusp;
                           }),
               recs.end());
    std::sort(recs.begin(), recs.end(), [](const ExcursionRecord& a, const ExcursionRecord& b) {
        return a.t_enter < b.t_enter;
    });
}

Spectrum spectrum(const Direction& x, const BigRat& theta, const BigInt& h_max) {
    if (theta < 1)
        throw std::invalid_argument(
            "spectrum: the continued-fraction route needs theta >= 1 "
            "(use spectrum_by_enumeration below that)");
    if (h_max < 1) throw std::invalid_argument("spectrum: h_max >= 1");
    Spectrum out;
    out.x = x;
    out.theta = theta;
    out.h_max = h_max;

    const BigRat xlo = x.lo, xhi = x.hi;
    auto consider = [&](const BigInt& p, const BigInt& q) {
        if (q * q > h_max) return;
        Cusp a{p, q};
        BigRat dist;
        bool boundary = false;
        int v = qualify(xlo, xhi, a, theta, dist, boundary);
        if (v == 0) { out.truncated = true; return; }
        if (v < 0) return;
        out.records.push_back(make_record(a, dist, theta, boundary));
    };

    // Integer cusps within reach of the threshold.
    BigInt f = floor_rat(xlo);
    for (BigInt j = f - 2; j <= f + 2; ++j) consider(j, 1);

    // Walk the continued fraction.  A cusp at threshold distance d <= 1/(2 h)
    // is a Stern-Brocot ancestor of x, and among the ancestors
    // (m q_k + q_{k-1}) of one level only m in {1, a-1, a} can qualify; the
    // exact qualify() test is the final filter.
    CfExpansion cf = cf_expand(x, 20000, 4 * h_max);
    out.truncated = out.truncated || cf.truncated;
    const bool stopped_early = !cf.exact_termination && !cf.truncated;
    BigInt pm2 = 1, qm2 = 0;  // (p_{-1}, q_{-1})
    for (size_t k = 0; k < cf.convergents.size(); ++k) {
        const auto& [pk, qk] = cf.convergents[k];
        const bool last = (k + 1 == cf.convergents.size());
        if (!last) {
            BigInt a_next = cf.quotients[k + 1];
            for (BigInt m : {BigInt(1), BigInt(a_next - 1), a_next})
                if (m >= 1) consider(m * pk + pm2, m * qk + qm2);
        } else if (stopped_early) {
            consider(pk + pm2, qk + qm2);  // m = 1 of the unexpanded level
        }
        pm2 = pk;
        qm2 = qk;
    }

    sort_dedupe(out.records);
    return out;
}

Spectrum spectrum_by_enumeration(const Direction& x, const BigRat& theta, const BigInt& h_max) {
    if (theta <= 0) throw std::invalid_argument("spectrum: theta > 0");
    Spectrum out;
    out.x = x;
    out.theta = theta;
    out.h_max = h_max;
    BigInt Q = isqrt_floor(h_max);
    const BigRat xmid = x.mid();
    BigInt reach = ceil_rat(BigRat(1) / (2 * theta)) + 1;
    for (BigInt q = 1; q <= Q; ++q) {
        BigInt pc = floor_rat(xmid * BigRat(q));
        for (BigInt p = pc - reach; p <= pc + reach; ++p) {
            if (gcd(p, q) != 1 && q != 1) continue;
            Cusp a{p, q};
            BigRat dist;
            bool boundary = false;
            int v = qualify(x.lo, x.hi, a, theta, dist, boundary);
            if (v == 0) { out.truncated = true; continue; }
            if (v < 0) continue;
            out.records.push_back(make_record(a, dist, theta, boundary));
        }
    }
    sort_dedupe(out.records);
    return out;
}

GapReport consecutive_gap_check(const Spectrum& s) {
    if (s.records.size() < 2)
        throw std::invalid_argument("consecutive_gap_check: spectrum length >= 2");
    GapReport rep;
    rep.min_ratio = kInf;
    rep.max_ratio = 0;
    rep.max_time_gap = -kInf;
    for (size_t i = 0; i + 1 < s.records.size(); ++i) {
        const auto& a = s.records[i];
        const auto& b = s.records[i + 1];
        GapEntry e;
        e.a = a.cusp;
        e.b = b.cusp;
        e.ratio_sq = a.dist * a.dist * BigRat(a.cusp.height()) * BigRat(b.cusp.height());
        e.ratio = std::exp(0.5 * log_rat(e.ratio_sq == 0 ? BigRat(1) : e.ratio_sq));
        if (e.ratio_sq == 0) e.ratio = 0;
        e.time_gap = b.t_enter - a.t_exit;
        rep.min_ratio = std::min(rep.min_ratio, e.ratio);
        rep.max_ratio = std::max(rep.max_ratio, e.ratio);
        rep.max_time_gap = std::max(rep.max_time_gap, e.time_gap);
        rep.entries.push_back(std::move(e));
    }
    return rep;
}

std::vector<std::vector<std::string>> spectrum_rows(const Spectrum& s) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : s.records) {
        rows.push_back({r.cusp.num.str(), r.cusp.den.str(), fmt_double(r.t_enter),
                        fmt_double(r.t_peak), fmt_double(r.t_exit),
                        fmt_double(r.peak_value())});
    }
    return rows;
}

}  // namespace cuspflow::excursion
