#include "cuspflow/counting.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace cuspflow::counting {

using lattice::Cusp;
using lattice::GaussCusp;
using lattice::Interval;

namespace {

// Smallest integer q with q^2 >= bound.
BigInt sqrt_band_lo(const BigRat& bound) {
    if (bound <= 0) return 0;
    BigInt s = isqrt_floor(ceil_rat(bound));
    while (BigRat(s * s) < bound) ++s;
    while (s > 0 && BigRat((s - 1) * (s - 1)) >= bound) --s;
    return s;
}

// Largest integer q with q^2 <= bound.
BigInt sqrt_band_hi(const BigRat& bound) {
    if (bound < 0) return -1;
    BigInt s = isqrt_floor(floor_rat(bound));
    while (BigRat((s + 1) * (s + 1)) <= bound) ++s;
    while (s >= 0 && BigRat(s * s) > bound) --s;
    return s;
}

}  // namespace

BigInt count_annulus(const lattice::ModularModel&, const Cusp& a, double A1, double A2, double A3,
                     double t, const BigInt& budget) {
    if (a.is_infinity()) throw std::invalid_argument("count_annulus: finite center");
    if (!(A1 >= 0 && A2 >= A1 && A3 > 0)) throw std::invalid_argument("count_annulus: bad band");
    const BigRat h(a.height());
    const BigRat et(std::exp(t));
    const BigRat band_lo = BigRat(A1) * et * h;
    const BigRat band_hi = BigRat(A2) * et * h;
    if (band_hi > BigRat(budget))
        throw BudgetExceeded("count_annulus: height band exceeds enumeration budget");
    const BigRat center = a.location();
    const BigRat radius = BigRat(A3) / h;

    BigInt q_lo = sqrt_band_lo(band_lo);
    BigInt q_hi = sqrt_band_hi(band_hi);
    if (q_lo < 1) q_lo = 1;
    BigInt total = 0;
    for (BigInt q = q_lo; q <= q_hi; ++q) {
        BigInt p_lo = ceil_rat(BigRat(q) * (center - radius));
        BigInt p_hi = floor_rat(BigRat(q) * (center + radius));
        if (p_hi < p_lo) continue;
        total += lattice::coprime_count(q, p_lo, p_hi);
    }
    return total;
}

BigInt count_annulus_gauss(const lattice::GaussianModel&, const GaussCusp& a, double A1, double A2,
                           double A3, double t, const BigInt& budget) {
    if (a.is_infinity()) throw std::invalid_argument("count_annulus_gauss: finite center");
    const BigRat h(a.height());
    const BigRat et(std::exp(t));
    const BigRat band_lo = BigRat(A1) * et * h;
    const BigRat band_hi = BigRat(A2) * et * h;
    if (band_hi > BigRat(budget))
        throw BudgetExceeded("count_annulus_gauss: height band exceeds enumeration budget");
    const BigRat rad_sq = BigRat(A3) * BigRat(A3) / (h * h);
    const BigInt n_ctr = a.den.norm();
    // center = num * conj(den) / |den|^2
    const BigRat cr(a.num.re * a.den.re + a.num.im * a.den.im, n_ctr);
    const BigRat ci(a.num.im * a.den.re - a.num.re * a.den.im, n_ctr);

    BigInt total = 0;
    BigInt qmax = sqrt_band_hi(band_hi);
    for (BigInt qr = 0; qr <= qmax; ++qr) {
        for (BigInt qi = 0; qr * qr + qi * qi <= floor_rat(band_hi); ++qi) {
            if (qr == 0 && qi == 0) continue;
            lattice::GaussInt q{qr, qi};
            BigInt nq = q.norm();
            if (BigRat(nq) < band_lo || BigRat(nq) > band_hi) continue;
            if (!(qr > 0 && qi >= 0)) continue;  // canonical first-quadrant dens
            // p within |p/q - c| <= rad: p in q*c + q*disk(rad)
            BigRat pr_c = cr * qr - ci * qi;
            BigRat pi_c = cr * qi + ci * qr;
            BigRat span_sq = rad_sq * BigRat(nq);
            BigInt span = isqrt_floor(ceil_rat(span_sq)) + 1;
            for (BigInt pr = ceil_rat(pr_c) - span; pr <= floor_rat(pr_c) + span; ++pr) {
                for (BigInt pi = ceil_rat(pi_c) - span; pi <= floor_rat(pi_c) + span; ++pi) {
                    lattice::GaussInt p{pr, pi};
                    if (lattice::gauss_gcd(p, q).norm() != 1) continue;
                    BigRat dr = BigRat(pr) - pr_c, di = BigRat(pi) - pi_c;
                    if ((dr * dr + di * di) > span_sq) continue;
                    ++total;
                }
            }
        }
    }
    return total;
}

namespace {

GrowthFit fit_counts(const std::vector<double>& t_grid, const std::vector<BigInt>& counts,
                     int rank) {
    GrowthFit fit;
    fit.counts = counts;
    fit.min_count_over_rate = std::numeric_limits<double>::infinity();
    std::vector<double> xs, ys;
    for (size_t i = 0; i < t_grid.size(); ++i) {
        double t = t_grid[i];
        if (counts[i] == 0) {
            fit.warnings.push_back("zero count at t=" + fmt_double(t) + ", point dropped");
            continue;
        }
        double logc = log_big(counts[i]);
        fit.min_count_over_rate =
            std::min(fit.min_count_over_rate, std::exp(logc - rank * t));
        if (counts[i] < 5) {
            fit.warnings.push_back("count below 5 at t=" + fmt_double(t) +
                                   ", excluded from the fit");
            continue;
        }
        xs.push_back(t);
        ys.push_back(logc);
        fit.t_used.push_back(t);
    }
    if (xs.size() < 2) {
        fit.warnings.push_back("fewer than 2 usable points, slope set to 0");
        return fit;
    }
    double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    double denom = n * sxx - sx * sx;
    if (denom == 0) {
        fit.warnings.push_back("degenerate grid, slope set to 0");
        return fit;
    }
    fit.slope = (n * sxy - sx * sy) / denom;
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < xs.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ys[i] - fit.slope * xs[i] - fit.intercept));
    return fit;
}

}  // namespace

GrowthFit growth_exponent(const lattice::ModularModel& model, const Cusp& a, double A1, double A2,
                          double A3, const std::vector<double>& t_grid) {
    if (t_grid.size() < 5) throw std::invalid_argument("growth_exponent: need >= 5 grid points");
    std::vector<BigInt> counts;
    for (double t : t_grid) counts.push_back(count_annulus(model, a, A1, A2, A3, t));
    return fit_counts(t_grid, counts, model.n - 1);
}

GrowthFit growth_exponent_gauss(const lattice::GaussianModel& model, const GaussCusp& a, double A1,
                                double A2, double A3, const std::vector<double>& t_grid) {
    if (t_grid.size() < 5) throw std::invalid_argument("growth_exponent: need >= 5 grid points");
    std::vector<BigInt> counts;
    for (double t : t_grid) counts.push_back(count_annulus_gauss(model, a, A1, A2, A3, t));
    return fit_counts(t_grid, counts, model.n - 1);
}

Cusp dirichlet_witness(const excursion::Direction& x, const BigInt& X) {
    if (X < 4) throw std::invalid_argument("dirichlet_witness: X >= 4");
    auto cf = excursion::cf_expand(x, 20000, 4 * X);
    Cusp w;
    bool found = false;
    for (const auto& [p, q] : cf.convergents) {
        if (q * q > X) break;
        w = Cusp{p, q};
        found = true;
    }
    if (!found) throw std::logic_error("dirichlet_witness: no convergent below sqrt(X)");
    // Verify |x - w|^2 * X <= 1 exactly on the certified interval.
    BigRat loc = w.location();
    BigRat d = std::max(abs_rat(x.lo - loc), abs_rat(x.hi - loc));
    if (d * d * BigRat(X) > 1)
        throw std::logic_error("dirichlet_witness: verification failed for " + w.str());
    return w;
}

namespace {

// Coprime p with p/q inside the interval, endpoint strictness respected.
BigInt coprime_in_interval(const BigInt& q, const Interval& r) {
    BigRat lo = r.lo * BigRat(q), hi = r.hi * BigRat(q);
    BigInt p_lo = ceil_rat(lo);
    if (BigRat(p_lo) == lo && !r.include_lo) ++p_lo;
    BigInt p_hi = floor_rat(hi);
    if (BigRat(p_hi) == hi && !r.include_hi) --p_hi;
    if (p_hi < p_lo) return 0;
    return lattice::coprime_count(q, p_lo, p_hi);
}

}  // namespace

WeightedSum weighted_height_sum(const lattice::ModularModel&, const Interval& region,
                                const BigInt& X) {
    if (X < 1) throw std::invalid_argument("weighted_height_sum: X >= 1");
    if (X > (BigInt(1) << 48)) throw BudgetExceeded("weighted_height_sum: X exceeds budget");
    WeightedSum out{BigRat(0), 0.0, BigInt(0)};
    BigInt Q = isqrt_floor(X);
    for (BigInt q = 1; q <= Q; ++q) {
        BigInt cnt = coprime_in_interval(q, region);
        if (cnt == 0) continue;
        out.cusp_count += cnt;
        out.sum += BigRat(cnt, q);
    }
    double len = region.length().convert_to<double>();
    out.ratio = out.sum.convert_to<double>() / (std::sqrt(X.convert_to<double>()) * len);
    return out;
}

bool NetE::contains(const Cusp& a) const {
    auto it = std::lower_bound(members.begin(), members.end(), a);
    return it != members.end() && *it == a;
}

NetE build_net(const lattice::ModularModel&, const Interval& region, const BigInt& N,
               const BigRat& c, const BigRat& c_prime) {
    if (N < 4) throw std::invalid_argument("build_net: N >= 4");
    NetE net;
    net.N = N;
    net.region = region;
    net.c = c;
    net.c_prime = c_prime;

    std::vector<Cusp> all = lattice::enumerate_cusps(region, N);
    std::stable_sort(all.begin(), all.end(), [](const Cusp& a, const Cusp& b) {
        if (a.height() != b.height()) return a.height() < b.height();
        return a < b;
    });
    // Reject candidates strictly inside the packing radius of an accepted
    // member: dist < c'/sqrt(N)  <=>  dist^2 N < c'^2.
    const BigRat pack_sq = c_prime * c_prime / BigRat(N);
    std::map<BigRat, Cusp> accepted;
    for (const Cusp& cand : all) {
        BigRat loc = cand.location();
        bool ok = true;
        auto it = accepted.lower_bound(loc);
        if (it != accepted.end()) {
            BigRat d = it->first - loc;
            if (d * d < pack_sq) ok = false;
        }
        if (ok && it != accepted.begin()) {
            auto prev = std::prev(it);
            BigRat d = loc - prev->first;
            if (d * d < pack_sq) ok = false;
        }
        if (ok) accepted.emplace(loc, cand);
    }
    for (auto& [loc, cusp] : accepted) net.members.push_back(cusp);

    // Covering check on a grid strictly finer than c/(4 sqrt(N)).
    const BigInt s_hi = isqrt_floor(N) + 1;  // sqrt(N) <= s_hi
    const BigRat step = c / (4 * BigRat(s_hi));
    const BigRat cover_sq = c * c / BigRat(N);
    std::vector<BigRat> locs;
    locs.reserve(net.members.size());
    for (const auto& m : net.members) locs.push_back(m.location());
    for (BigRat x = region.lo; x < region.hi; x += step) {
        auto it = std::lower_bound(locs.begin(), locs.end(), x);
        bool covered = false;
        if (it != locs.end()) {
            BigRat d = *it - x;
            covered = d * d <= cover_sq;
        }
        if (!covered && it != locs.begin()) {
            BigRat d = x - *std::prev(it);
            covered = d * d <= cover_sq;
        }
        if (!covered)
            throw CoveringError("build_net: covering radius too small at " + rat_string(x), x);
    }
    net.covering_verified = true;
    return net;
}

}  // namespace cuspflow::counting
