#include "cuspflow/verify.hpp"

#include "cuspflow/cantor.hpp"
#include "cuspflow/counting.hpp"
#include "cuspflow/covering.hpp"
#include "cuspflow/excursion.hpp"
#include "cuspflow/geometry.hpp"
#include "cuspflow/lattice.hpp"
#include "cuspflow/product.hpp"

#include <cmath>
#include <random>
#include <cstdio>
#include <cstdlib>
#include <sstream>

namespace cuspflow::verify {

namespace geo = cuspflow::geometry;
namespace lat = cuspflow::lattice;
namespace exc = cuspflow::excursion;
namespace prd = cuspflow::product;
namespace cnt = cuspflow::counting;
namespace can = cuspflow::cantor;
namespace cov = cuspflow::covering;

namespace {

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(uint64_t seed) : gen(seed) {}
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(gen);
    }
    int64_t integer(int64_t lo, int64_t hi) {
        return std::uniform_int_distribution<int64_t>(lo, hi)(gen);
    }
    BigRat rational(double lo, double hi, int64_t den = (1LL << 30)) {
        int64_t lo_n = static_cast<int64_t>(lo * static_cast<double>(den));
        int64_t hi_n = static_cast<int64_t>(hi * static_cast<double>(den));
        return BigRat(integer(lo_n, hi_n), den);
    }
    geo::FramePoint point() {
        return geo::FramePoint(std::exp(uniform(-2, 2)), {uniform(-3, 3)});
    }
    // Random modular matrix as an alternating word in u(n) and the Weyl flip.
    lat::IMat2 modular(int len = 6, int64_t max_q = 9) {
        lat::IMat2 g;
        for (int i = 0; i < len; ++i) {
            int64_t a = integer(-max_q, max_q);
            lat::IMat2 u{1, a, 0, 1};
            lat::IMat2 s{0, -1, 1, 0};
            auto mul = [](const lat::IMat2& x, const lat::IMat2& y) {
                return lat::IMat2{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d,
                                  x.c * y.a + x.d * y.c, x.c * y.b + x.d * y.d};
            };
            g = mul(g, u);
            g = mul(g, s);
        }
        return g;
    }
};

struct Suite {
    std::vector<CheckResult>& out;
    bool trace = std::getenv("CUSPFLOW_VERIFY_TRACE") != nullptr;
    template <typename F>
    void check(const std::string& name, F&& fn) {
        if (trace) std::fprintf(stderr, "running %s\n", name.c_str());
        CheckResult r;
        r.name = name;
        try {
            std::ostringstream detail;
            r.passed = fn(detail);
            r.detail = detail.str();
        } catch (const std::exception& e) {
            r.passed = false;
            r.detail = std::string("exception: ") + e.what();
        }
        out.push_back(std::move(r));
    }
};

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

std::vector<CheckResult> run_all(const Options& opt) {
    std::vector<CheckResult> results;
    Suite suite{results};
    Rng rng(opt.seed);
    const int sc = opt.full ? 1 : 4;  // budget divider for quick runs

    // ---- geometry -----------------------------------------------------------

    suite.check("geometry/weyl-involution", [&](std::ostream&) {
        for (int i = 0; i < 1000; ++i) {
            geo::FramePoint p = rng.point();
            geo::FramePoint q = geo::weyl_apply(geo::weyl_apply(p));
            if (!close(q.height, p.height, 1e-12) || !close(q.base[0], p.base[0], 1e-12))
                return false;
        }
        return true;
    });

    suite.check("geometry/generator-isometries", [&](std::ostream&) {
        geo::MoebiusMap gens[] = {geo::MoebiusMap::translation(1), geo::MoebiusMap::weyl()};
        for (int i = 0; i < 1000 / sc; ++i) {
            geo::FramePoint p = rng.point(), q = rng.point();
            double d = geo::hyperbolic_distance(p, q);
            for (const auto& g : gens) {
                double dg = geo::hyperbolic_distance(geo::moebius_apply(g, p),
                                                     geo::moebius_apply(g, q));
                if (!close(d, dg, 1e-10)) return false;
            }
        }
        return true;
    });

    suite.check("geometry/busemann-cocycle", [&](std::ostream&) {
        for (int i = 0; i < 500; ++i) {
            geo::FramePoint x = rng.point(), y = rng.point(), z = rng.point();
            geo::BoundaryPoint xi = (i % 3 == 0) ? geo::BoundaryPoint::inf()
                                                 : geo::BoundaryPoint::finite1(rng.uniform(-3, 3));
            double bxy = geo::busemann(xi, x, y), byz = geo::busemann(xi, y, z);
            double bxz = geo::busemann(xi, x, z);
            if (!close(bxy + byz, bxz, 1e-12)) return false;
            if (!close(geo::busemann(xi, y, x), -bxy, 1e-12)) return false;
        }
        return true;
    });

    suite.check("geometry/busemann-equivariance", [&](std::ostream& detail) {
        double worst = 0;
        for (int i = 0; i < 400 / sc; ++i) {
            geo::MoebiusMap g = rng.modular(4, 4).to_double();
            geo::FramePoint x = rng.point(), y = rng.point();
            geo::BoundaryPoint xi = geo::BoundaryPoint::finite1(rng.uniform(-2, 2));
            geo::BoundaryPoint gxi = geo::moebius_boundary(g, xi);
            if (gxi.infinite) continue;
            if (std::abs(g.c * xi.point[0] + g.d) < 0.05) continue;  // near the pole
            double lhs = geo::busemann(gxi, geo::moebius_apply(g, x), geo::moebius_apply(g, y));
            double rhs = geo::busemann(xi, x, y);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(rhs)));
        }
        detail << "worst relative error " << fmt_double(worst);
        return worst <= 1e-9;
    });

    suite.check("geometry/gromov-symmetry-and-rays", [&](std::ostream&) {
        geo::FramePoint o = geo::basepoint();
        for (int i = 0; i < 300; ++i) {
            geo::BoundaryPoint a = geo::BoundaryPoint::finite1(rng.uniform(-2, 2));
            geo::BoundaryPoint b = geo::BoundaryPoint::finite1(rng.uniform(-2, 2));
            if (std::abs(a.point[0] - b.point[0]) < 1e-9) continue;
            double d1 = geo::gromov_dist(a, b, o);
            double d2 = geo::gromov_dist(b, a, o);  // ray to the other endpoint
            if (!close(d1, d2, 1e-9)) return false;
        }
        return true;
    });

    suite.check("geometry/metric-comparison-recorded", [&](std::ostream& detail) {
        geo::FramePoint o = geo::basepoint();
        double cmin = 1e300, cmax = 0;
        int n = 10000 / sc;
        for (int i = 0; i < n; ++i) {
            double a = rng.uniform(-2, 2), b = rng.uniform(-2, 2);
            if (std::abs(a - b) < 1e-6) continue;
            double ratio = geo::gromov_dist(geo::BoundaryPoint::finite1(a),
                                            geo::BoundaryPoint::finite1(b), o) /
                           std::abs(a - b);
            cmin = std::min(cmin, ratio);
            cmax = std::max(cmax, ratio);
        }
        double C = std::max(cmax, 1.0 / cmin);
        detail << "ratio in [" << fmt_double(cmin) << ", " << fmt_double(cmax)
               << "], C = " << fmt_double(C);
        return C <= 10.0;
    });

    suite.check("geometry/height-metric-invariance", [&](std::ostream&) {
        for (int i = 0; i < 1000 / sc; ++i) {
            BigRat pa = rng.rational(-2, 2, 97), pb = rng.rational(-2, 2, 101);
            if (pa == pb) continue;
            lat::Cusp a = lat::canonical(numerator(pa), denominator(pa));
            lat::Cusp b = lat::canonical(numerator(pb), denominator(pb));
            lat::IMat2 g = rng.modular(4, 5);
            auto img = [&](const lat::Cusp& c) {
                return lat::canonical(g.a * c.num + g.b * c.den, g.c * c.num + g.d * c.den);
            };
            lat::Cusp ga = img(a), gb = img(b);
            if (ga.is_infinity() || gb.is_infinity()) continue;
            geo::FramePoint o = geo::basepoint();
            auto side = [&](const lat::Cusp& u, const lat::Cusp& v) {
                double d = geo::gromov_dist(
                    geo::BoundaryPoint::finite1(u.location().convert_to<double>()),
                    geo::BoundaryPoint::finite1(v.location().convert_to<double>()), o);
                return d * d * lat::busemann_height_exact(u).convert_to<double>() *
                       lat::busemann_height_exact(v).convert_to<double>();
            };
            double lhs = side(ga, gb), rhs = side(a, b);
            if (std::abs(lhs - rhs) > 1e-8 * std::max(std::abs(lhs), std::abs(rhs)))
                return false;
        }
        return true;
    });

    suite.check("geometry/busemann-height-ratio-exact", [&](std::ostream&) {
        // h-tilde / h = (p^2 + q^2)/q^2 in [1, 5] on [-2, 2], exhaustive.
        int64_t qmax = opt.full ? 100 : 40;
        for (int64_t q = 1; q <= qmax; ++q) {
            for (int64_t p = -2 * q; p <= 2 * q; ++p) {
                if (std::gcd(static_cast<long long>(std::abs(p)),
                             static_cast<long long>(q)) != 1)
                    continue;
                BigInt ht = BigInt(p) * p + BigInt(q) * q;
                BigInt h = BigInt(q) * q;
                if (ht < h || ht > 5 * h) return false;
            }
        }
        return true;
    });

    suite.check("geometry/bruhat-roundtrip", [&](std::ostream&) {
        for (int i = 0; i < 500; ++i) {
            geo::MoebiusMap g = rng.modular(5, 7).to_double().normalized();
            geo::BruhatForm f = geo::bruhat_decompose(g);
            geo::MoebiusMap back = geo::bruhat_compose(f);
            double s = (back.a * g.a + back.c * g.c > 0) ? 1.0 : -1.0;
            double err = std::max({std::abs(back.a - s * g.a), std::abs(back.b - s * g.b),
                                   std::abs(back.c - s * g.c), std::abs(back.d - s * g.d)});
            if (err > 1e-9 * std::max(1.0, std::abs(g.b))) return false;
        }
        return true;
    });

    // ---- lattice ------------------------------------------------------------

    suite.check("lattice/canonical-and-heights", [&](std::ostream&) {
        if (!(lat::canonical(2, 4) == lat::Cusp{1, 2})) return false;
        if (!(lat::canonical(-1, -2) == lat::Cusp{1, 2})) return false;
        if (!(lat::canonical(3, 0) == lat::Cusp{1, 0})) return false;
        if (lat::canonical(3, 0).height() != 1) return false;
        for (int i = 0; i < 500; ++i) {
            lat::Cusp c = lat::canonical(rng.integer(-999, 999), rng.integer(1, 999));
            if (c.height() < 1) return false;
            lat::Cusp cc = lat::canonical(c.num, c.den);
            if (!(cc == c)) return false;
        }
        return true;
    });

    suite.check("lattice/separation-sharp", [&](std::ostream&) {
        // |a - b| sqrt(h(a) h(b)) >= 1, exhaustively for h <= 400 on [0, 1].
        auto cusps =
            lat::enumerate_cusps({BigRat(0), BigRat(1), true, true}, BigInt(opt.full ? 400 : 100));
        for (size_t i = 0; i < cusps.size(); ++i)
            for (size_t j = i + 1; j < cusps.size(); ++j) {
                BigRat g = lat::cusp_gap(cusps[i], cusps[j]);
                if (g * g * BigRat(cusps[i].height() * cusps[j].height()) < 1) return false;
            }
        return true;
    });

    suite.check("lattice/enumeration-vs-bruteforce", [&](std::ostream&) {
        BigInt h_max(opt.full ? 10000 : 2000);
        auto fast = lat::enumerate_cusps({BigRat(0), BigRat(1)}, h_max);
        std::vector<lat::Cusp> brute;
        BigInt Q = isqrt_floor(h_max);
        for (BigInt q = 1; q <= Q; ++q)
            for (BigInt p = 0; p < q; ++p)
                if (gcd(p, q) == 1) brute.push_back(lat::Cusp{p, q});
        std::sort(brute.begin(), brute.end());
        if (fast.size() != brute.size()) return false;
        for (size_t i = 0; i < fast.size(); ++i)
            if (!(fast[i] == brute[i])) return false;
        return true;
    });

    suite.check("lattice/realize-height-consistency", [&](std::ostream&) {
        auto cusps = lat::enumerate_cusps({BigRat(0), BigRat(1)}, BigInt(opt.full ? 10000 : 2000));
        for (const auto& c : cusps) {
            lat::IMat2 g = lat::realize(c);
            if (g.det() != 1) return false;
            auto eb = lat::bruhat_exact(g);
            if (eb.er != c.height()) return false;
            if (eb.x != c.location()) return false;
            if (abs_rat(eb.y) * 2 > BigRat(c.height())) return false;
        }
        return true;
    });

    suite.check("lattice/parallel-enumeration-deterministic", [&](std::ostream&) {
        lat::Interval I{BigRat(-1, 3), BigRat(5, 7)};
        auto one = lat::enumerate_cusps_parallel(I, 5000, 1);
        for (int w : {2, 3, 7}) {
            auto many = lat::enumerate_cusps_parallel(I, 5000, w);
            if (many.size() != one.size()) return false;
            for (size_t i = 0; i < one.size(); ++i)
                if (!(one[i] == many[i])) return false;
        }
        return true;
    });

    // ---- excursion ----------------------------------------------------------

    suite.check("excursion/vieta-and-peak-identities", [&](std::ostream&) {
        for (int i = 0; i < 300; ++i) {
            exc::Direction x = exc::Direction::rational(rng.rational(0, 1));
            auto spec = exc::spectrum(x, BigRat(1), BigInt(1) << 24);
            for (const auto& r : spec.records) {
                if (r.terminal) continue;
                double lhs = std::exp(-r.t_enter) * std::exp(-r.t_exit);
                double rhs = std::exp(2 * r.log_dist);
                if (std::abs(lhs - rhs) > 1e-10 * rhs) return false;
                // peak * 2 h d = 1
                double p = r.log_peak + std::log(2.0) + r.log_h + r.log_dist;
                if (std::abs(p) > 1e-12) return false;
                // Prop 3.2 direction: d <= 1/(2 theta h)
                if (r.dist * BigRat(2) * BigRat(r.cusp.height()) > 1) return false;
            }
        }
        return true;
    });

    suite.check("excursion/cf-equals-enumeration", [&](std::ostream&) {
        int n = opt.full ? 100 : 25;
        BigInt h_max(opt.full ? 1000000 : 100000);
        for (int i = 0; i < n; ++i) {
            exc::Direction x = exc::Direction::rational(rng.rational(0, 1));
            for (int th : {1, 2}) {
                auto a = exc::spectrum(x, BigRat(th), h_max);
                auto b = exc::spectrum_by_enumeration(x, BigRat(th), h_max);
                if (a.records.size() != b.records.size()) return false;
                for (size_t r = 0; r < a.records.size(); ++r)
                    if (!(a.records[r].cusp == b.records[r].cusp)) return false;
            }
        }
        return true;
    });

    suite.check("excursion/consecutive-gap-law", [&](std::ostream& detail) {
        double lo = 10, hi = 0;
        for (int i = 0; i < (opt.full ? 100 : 30); ++i) {
            exc::Direction x = exc::Direction::rational(rng.rational(0, 1, (1LL << 40)));
            auto spec = exc::spectrum(x, BigRat(1), BigInt(1) << 40);
            if (spec.records.size() < 2) continue;
            auto rep = exc::consecutive_gap_check(spec);
            for (const auto& e : rep.entries) {
                if (e.ratio_sq == 0) continue;  // terminal pair
                if (e.ratio_sq < BigRat(1, 4) || e.ratio_sq > 4) return false;
                lo = std::min(lo, e.ratio);
                hi = std::max(hi, e.ratio);
            }
        }
        detail << "ratios in [" << fmt_double(lo) << ", " << fmt_double(hi) << "]";
        return true;
    });

    suite.check("excursion/entry-time-law", [&](std::ostream&) {
        for (int i = 0; i < 100; ++i) {
            exc::Direction x = exc::Direction::rational(rng.rational(0, 1));
            auto spec = exc::spectrum(x, BigRat(1), BigInt(1) << 20);
            for (const auto& r : spec.records) {
                if (r.terminal) continue;
                BigRat s = 2 * BigRat(r.cusp.height()) * r.dist;
                if (s > BigRat(1, 2)) continue;
                double ratio = std::exp(r.t_enter - r.log_h);  // e^{t_enter} / (theta h)
                if (ratio < 1 - 1e-9 || ratio > 1.072) return false;
            }
        }
        return true;
    });

    suite.check("excursion/quotient-height-law", [&](std::ostream&) {
        for (int i = 0; i < 100; ++i) {
            exc::Direction x = exc::Direction::rational(rng.rational(0, 1, (1LL << 40)));
            auto spec = exc::spectrum(x, BigRat(1), BigInt(1) << 40);
            for (size_t r = 0; r + 1 < spec.records.size(); ++r) {
                const auto& a = spec.records[r];
                const auto& b = spec.records[r + 1];
                BigInt cross = a.cusp.num * b.cusp.den - b.cusp.num * a.cusp.den;
                if (cross != 1 && cross != -1) continue;  // skipped pair
                BigInt m = b.cusp.den / a.cusp.den;
                if (m < 2) continue;
                BigRat law = BigRat(b.cusp.height()) / BigRat(a.cusp.height() * m * m);
                if (law < BigRat(1, 4) || law > 4) return false;
            }
        }
        return true;
    });

    // ---- counting -----------------------------------------------------------

    suite.check("counting/annulus-bruteforce-and-monotone", [&](std::ostream&) {
        lat::ModularModel model;
        lat::Cusp zero{0, 1};
        double t = std::log(4.0);
        BigInt fast = cnt::count_annulus(model, zero, 1, 4, 1, t);
        BigInt brute = 0;
        for (int64_t q = 2; q <= 4; ++q)
            for (int64_t p = -q; p <= q; ++p)
                if (std::gcd(std::abs(p), q) == 1) ++brute;
        if (fast != brute) return false;
        if (cnt::count_annulus(model, zero, 1, 8, 1, t) < fast) return false;
        return true;
    });

    suite.check("counting/growth-exponent", [&](std::ostream& detail) {
        lat::ModularModel model;
        std::vector<double> grid;
        for (int t = 4; t <= (opt.full ? 14 : 10); ++t) grid.push_back(t);
        auto fit = cnt::growth_exponent(model, lat::Cusp{0, 1}, 1, 4, 1, grid);
        detail << "slope = " << fmt_double(fit.slope)
               << ", min count/e^t = " << fmt_double(fit.min_count_over_rate);
        return fit.slope > 0.9 && fit.slope < 1.1 && fit.min_count_over_rate > 0;
    });

    suite.check("counting/dirichlet-witness-grid", [&](std::ostream&) {
        int64_t grid = opt.full ? 10000 : 500;
        for (BigInt X : {BigInt(100), BigInt(10000), BigInt(1000000)}) {
            for (int64_t i = 0; i < grid; ++i) {
                exc::Direction x = exc::Direction::rational(BigRat(i, grid));
                lat::Cusp w = cnt::dirichlet_witness(x, X);
                if (w.height() > X) return false;
            }
        }
        return true;
    });

    suite.check("counting/weighted-sum-law", [&](std::ostream& detail) {
        lat::ModularModel model;
        lat::Interval I{BigRat(0), BigRat(1)};
        double worst = 0;
        for (BigInt X : {BigInt(100), BigInt(10000), BigInt(1000000)}) {
            auto ws = cnt::weighted_height_sum(model, I, X);
            worst = std::max(worst, ws.ratio);
            if (ws.ratio > 1.0) return false;
        }
        detail << "max ratio = " << fmt_double(worst) << " (limit constant ~0.608)";
        return true;
    });

    suite.check("counting/net-invariants", [&](std::ostream& detail) {
        lat::ModularModel model;
        auto net = cnt::build_net(model, {BigRat(0), BigRat(1)}, 25, BigRat(1), BigRat(1, 4));
        if (!net.covering_verified) return false;
        // all height <= 2 cusps of [0,1) must be members
        for (const auto& c : {lat::Cusp{0, 1}, lat::Cusp{1, 2}})
            if (!net.contains(c)) return false;
        BigInt N(opt.full ? 40000 : 10000);
        auto big = cnt::build_net(model, {BigRat(0), BigRat(1)}, N);
        double expect = std::sqrt(N.convert_to<double>()) / (1.0 / 4.0);
        double got = static_cast<double>(big.members.size());
        detail << "members = " << big.members.size() << ", sqrt(N)/c' = " << fmt_double(expect);
        return got > expect / 4 && got < expect * 4;
    });

    // ---- product --------------------------------------------------------------

    suite.check("product/joint-profile-permutation", [&](std::ostream&) {
        prd::DirectionTuple xs;
        xs.components = {exc::Direction::rational(BigRat(3, 7)),
                         exc::Direction::rational(BigRat(5, 9))};
        xs.h_max = BigInt(1) << 20;
        auto ts = prd::compute_spectra(xs);
        prd::DirectionTuple sx = xs;
        std::swap(sx.components[0], sx.components[1]);
        auto st = prd::compute_spectra(sx);
        for (double t : {0.5, 1.0, 2.0, 3.5, 5.0}) {
            auto a = prd::joint_profile(ts, t);
            auto b = prd::joint_profile(st, t);
            if (!close(a.log_value, b.log_value, 1e-10)) return false;
            if (a.argmax != (1 - b.argmax) && a.argmax != b.argmax) return false;
        }
        return true;
    });

    suite.check("product/switch-laws", [&](std::ostream& detail) {
        double worst = 1;
        int tuples = opt.full ? 100 : 20;
        for (int i = 0; i < tuples; ++i) {
            prd::DirectionTuple xs;
            xs.components = {exc::Direction::rational(rng.rational(0, 1, (1LL << 34))),
                             exc::Direction::rational(rng.rational(0, 1, (1LL << 34)))};
            xs.h_max = BigInt(1) << 44;
            auto ts = prd::compute_spectra(xs);
            auto trace = prd::minima_trace(ts, 14.0);
            for (const auto& e : trace.events) {
                if (!e.cusp_from || !e.cusp_to) continue;
                double hb = log_big(e.cusp_from->height());
                double ha = log_big(e.cusp_to->height());
                double law1 = 2 * e.log_value + ha - hb;          // value^2 h(a')/h(b)
                double law2 = 2 * e.t - hb - ha;                  // e^{2t}/(h(b) h(a'))
                worst = std::max({worst, std::exp(std::abs(law1)), std::exp(std::abs(law2))});
            }
        }
        detail << "worst constant = " << fmt_double(worst);
        return worst <= 16.0;
    });

    suite.check("product/classify-monotone-and-recurrent", [&](std::ostream&) {
        prd::DirectionTuple xs;
        xs.components = {exc::Direction::golden(), exc::Direction::golden()};
        xs.h_max = BigInt(1) << 40;
        auto ts = prd::compute_spectra(xs);
        if (prd::classify(ts, BigRat(1, 4), 20.0) != prd::Classification::Recurrent) return false;
        prd::DirectionTuple bad;
        bad.components = {exc::Direction::golden(),
                          exc::Direction::sqrt_of(2).affine(BigRat(1), BigRat(-1))};
        bad.h_max = BigInt(1) << 40;
        auto bts = prd::compute_spectra(bad);
        if (prd::classify(bts, BigRat(1, 4), 20.0) != prd::Classification::Recurrent) return false;
        return true;
    });

    suite.check("product/box-count-sanity", [&](std::ostream& detail) {
        std::vector<std::vector<double>> seg;
        for (int i = 0; i < 4000; ++i) seg.push_back({i / 4000.0, 0.25});
        std::vector<double> scales{1.0 / 16, 1.0 / 32, 1.0 / 64, 1.0 / 128, 1.0 / 256};
        auto f1 = prd::box_count_dimension(seg, scales);
        std::vector<std::vector<double>> cantor3;
        for (int i = 0; i < (1 << 12); ++i) {
            double x = 0, p = 1;
            for (int b = 0; b < 12; ++b) {
                p /= 3;
                if (i & (1 << b)) x += 2 * p;
            }
            cantor3.push_back({x});
        }
        std::vector<double> sc3;
        for (int k = 2; k <= 7; ++k) sc3.push_back(std::pow(3.0, -k));
        auto f2 = prd::box_count_dimension(cantor3, sc3);
        detail << "segment slope = " << fmt_double(f1.slope)
               << ", cantor slope = " << fmt_double(f2.slope);
        return close(f1.slope, 1.0, 0.05) && close(f2.slope, std::log(2) / std::log(3), 0.05);
    });

    // ---- cantor ----------------------------------------------------------------

    suite.check("cantor/synthetic-closed-form", [&](std::ostream&) {
        auto tree = can::build_synthetic_tree(BigRat(1, 2), BigRat(1), BigRat(1, 4), 2, 7);
        auto rep = can::evaluate_bound(tree);
        double l_delta = std::log(2.0);  // Delta = K lambda = 1/2
        double l_lam = std::log(4.0);
        for (int j = 1; j <= 7; ++j) {
            double expect = 1 - (j * l_delta) / (0.0 + j * l_lam);
            if (!close(rep.s_at(j), expect, 1e-12)) return false;
        }
        return true;
    });

    suite.check("cantor/steep-tree-structure-and-branching", [&](std::ostream& detail) {
        can::SteepParams P;
        P.delta = BigRat(1);
        P.depth = opt.full ? 6 : 4;
        P.branch_cap = 6;
        P.recurse_cap = 2;
        auto tree = can::build_steep_tree(lat::Cusp{2, 5}, lat::Cusp{1, 2}, P);
        auto issues = can::validate_tree(tree);
        if (!issues.empty()) { detail << issues.front(); return false; }
        // Delta_i h^{delta/2} within [1/64, 64] on every stats-bearing node
        std::vector<const can::CantorNode*> stack{&tree};
        double worst = 1;
        while (!stack.empty()) {
            const can::CantorNode* nd = stack.back();
            stack.pop_back();
            for (auto& ch : nd->children) stack.push_back(&ch);
            if (!nd->family) continue;
            double log_delta = nd->family->log_measure - log_rat(2 * nd->radius);
            double law = log_delta + 0.5 * log_big(nd->height);
            worst = std::max(worst, std::exp(std::abs(law)));
        }
        detail << "worst branching constant " << fmt_double(worst);
        if (worst > 64) return false;
        auto rep = can::evaluate_bound(tree);
        for (int j = 1; j <= P.depth; ++j)
            if (std::abs(rep.s_at(j) - can::ideal_steep_s(j, 1.0)) > 0.15) {
                detail << "; s_" << j << " = " << fmt_double(rep.s_at(j));
                return false;
            }
        detail << "; s_depth = " << fmt_double(rep.s_at(P.depth));
        return true;
    });

    suite.check("cantor/slice-tree-trend", [&](std::ostream& detail) {
        can::SeparatedPairParams pp;
        pp.delta = BigRat(1);
        pp.depth = opt.full ? 6 : 5;
        pp.base_log_height = opt.full ? 15.0 : 12.0;
        auto pair = can::build_separated_pair(pp);
        auto rep = can::evaluate_bound(pair.slice_path);
        int deepest = static_cast<int>(rep.rows.size()) - 1;
        double ratio = 1.0 - rep.s_at(deepest);
        detail << "deepest ratio = " << fmt_double(ratio);
        return ratio <= (opt.full ? 0.1 : 0.2);
    });

    // ---- covering ----------------------------------------------------------------

    suite.check("covering/successors-vs-bruteforce", [&](std::ostream& detail) {
        auto node = cov::make_node({lat::Cusp{1, 3}, lat::Cusp{0, 1}}, 0, 1, BigRat(1, 2));
        cov::Truncation tr;
        tr.height_cap = 400;
        auto fast = cov::successors(node, BigRat(1, 2), tr);
        auto brute = cov::successors_brute(node, BigRat(1, 2), tr);
        detail << fast.nodes.size() << " successors";
        if (fast.nodes.size() != brute.nodes.size()) return false;
        for (size_t i = 0; i < fast.nodes.size(); ++i)
            if (!(fast.nodes[i] == brute.nodes[i])) return false;
        return true;
    });

    suite.check("covering/sum-monotonicity", [&](std::ostream&) {
        auto node = cov::make_node({lat::Cusp{1, 3}, lat::Cusp{0, 1}}, 0, 1, BigRat(1, 2));
        cov::Truncation tr;
        tr.height_cap = 2000;
        double prev = 1e300;
        for (double s : {1.1, 1.3, 1.5, 1.7, 1.9}) {
            double cur = cov::covering_sum(node, s, BigRat(1, 2), tr).sum;
            if (cur > prev) return false;
            prev = cur;
        }
        cov::Truncation small = tr;
        small.height_cap = 500;
        if (cov::covering_sum(node, 1.5, BigRat(1, 2), small).sum >
            cov::covering_sum(node, 1.5, BigRat(1, 2), tr).sum)
            return false;
        return true;
    });

    suite.check("covering/chain-extraction", [&](std::ostream& detail) {
        can::SeparatedPairParams pp;
        pp.delta = BigRat(1, 4);
        pp.depth = opt.full ? 8 : 7;
        pp.base_log_height = opt.full ? 60.0 : 48.0;
        auto pair = can::build_separated_pair(pp);
        auto ts = prd::compute_spectra(pair.tuple);
        if (prd::classify(ts, BigRat(1, 4), pair.horizon) != prd::Classification::Escaping) {
            detail << "pipeline tuple did not classify escaping";
            return false;
        }
        auto rep = cov::chain_extract(pair.tuple, ts, BigRat(1, 4), pair.horizon);
        detail << "chain length " << rep.chain.size();
        for (const auto& v : rep.violations) detail << "; " << v;
        if (!rep.ok()) return false;
        for (double r : rep.contraction)
            if (r > 0.5) return false;
        return true;
    });

    return results;
}

}  // namespace cuspflow::verify
