#include "cuspflow/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace cuspflow::geometry {

double norm_sq(const Vec& v) {
    double s = 0;
    for (double x : v) s += x * x;
    return s;
}

double norm(const Vec& v) { return std::sqrt(norm_sq(v)); }

Vec add(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dims differ");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

Vec sub(const Vec& a, const Vec& b) {
    if (a.size() != b.size()) throw std::invalid_argument("vector dims differ");
    Vec r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Vec scale(double s, const Vec& v) {
    Vec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) r[i] = s * v[i];
    return r;
}

FramePoint::FramePoint(double h, Vec b) : height(h), base(std::move(b)) {
    if (!(height > 0)) throw std::invalid_argument("FramePoint: height must be positive");
}

FramePoint basepoint(int dim) { return FramePoint(1.0, Vec(static_cast<size_t>(dim - 1), 0.0)); }

MoebiusMap MoebiusMap::dilation(double t) {
    double e = std::exp(t / 2);
    return {e, 0, 0, 1 / e};
}

MoebiusMap MoebiusMap::normalized() const {
    double dt = det();
    if (!(dt > 0)) throw std::invalid_argument("MoebiusMap: determinant must be positive");
    double s = 1.0 / std::sqrt(dt);
    return {a * s, b * s, c * s, d * s};
}

MoebiusMap MoebiusMap::operator*(const MoebiusMap& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

MoebiusMap MoebiusMap::inverse() const { return MoebiusMap{d, -b, -c, a}.normalized(); }

MoebiusMap3 MoebiusMap3::operator*(const MoebiusMap3& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

FramePoint weyl_apply(const FramePoint& p) {
    double den = p.height * p.height + norm_sq(p.base);
    return FramePoint(p.height / den, scale(-1.0 / den, p.base));
}

FramePoint left_translate(const Vec& v, const FramePoint& p) {
    return FramePoint(p.height, add(p.base, v));
}

FramePoint left_dilate(double t, const FramePoint& p) {
    double e = std::exp(t);
    return FramePoint(e * p.height, scale(e, p.base));
}

FramePoint moebius_apply(const MoebiusMap& g0, const FramePoint& p) {
    if (p.dim() != 2) throw std::invalid_argument("moebius_apply: n = 2 points only");
    MoebiusMap g = g0.normalized();
    std::complex<double> z(p.base[0], p.height);
    std::complex<double> w = (g.a * z + g.b) / (g.c * z + g.d);
    if (!(w.imag() > 1e-300))
        throw std::runtime_error("moebius_apply: degenerate image height");
    return FramePoint(w.imag(), Vec{w.real()});
}

FramePoint moebius_apply3(const MoebiusMap3& g, const FramePoint& p) {
    if (p.dim() != 3) throw std::invalid_argument("moebius_apply3: n = 3 points only");
    std::complex<double> z(p.base[0], p.base[1]);
    double h = p.height;
    std::complex<double> czd = g.c * z + g.d;
    double den = std::norm(czd) + std::norm(g.c) * h * h;
    if (!(den > 0)) throw std::runtime_error("moebius_apply3: degenerate image");
    std::complex<double> w = ((g.a * z + g.b) * std::conj(czd) + g.a * std::conj(g.c) * h * h) / den;
    double hh = h / den;
    if (!(hh > 0)) throw std::runtime_error("moebius_apply3: degenerate image height");
    return FramePoint(hh, Vec{w.real(), w.imag()});
}

BoundaryPoint moebius_boundary(const MoebiusMap& g0, const BoundaryPoint& xi) {
    MoebiusMap g = g0.normalized();
    if (xi.infinite) {
        if (std::abs(g.c) < 1e-300) return BoundaryPoint::inf();
        return BoundaryPoint::finite1(g.a / g.c);
    }
    double x = xi.point.at(0);
    double den = g.c * x + g.d;
    if (std::abs(den) < 1e-300) return BoundaryPoint::inf();
    return BoundaryPoint::finite1((g.a * x + g.b) / den);
}

MoebiusMap bruhat_compose(const BruhatForm& f) {
    double e = std::exp(f.r / 2);
    MoebiusMap g;
    if (f.generic) {
        // u(x) sigma u(y) a(r) = (x e^{r/2}, (x y - 1) e^{-r/2}; e^{r/2}, y e^{-r/2})
        g = {f.x * e, (f.x * f.y - 1) / e, e, f.y / e};
    } else {
        g = {e, f.y / e, 0, 1 / e};
    }
    if (f.m < 0) g = {-g.a, -g.b, -g.c, -g.d};
    return g;
}

BruhatForm bruhat_decompose(const MoebiusMap& g0) {
    MoebiusMap g = g0.normalized();
    BruhatForm f;
    if (std::abs(g.c) > 1e-300) {
        if (g.c < 0) g = {-g.a, -g.b, -g.c, -g.d};
        f.generic = true;
        f.x = g.a / g.c;
        f.r = 2 * std::log(g.c);
        f.y = g.c * g.d;
    } else {
        if (g.a < 0) g = {-g.a, -g.b, -g.c, -g.d};
        f.generic = false;
        f.r = 2 * std::log(g.a);
        f.y = g.a * g.b;
    }
    f.m = 1;
    return f;
}

double hyperbolic_distance(const FramePoint& p, const FramePoint& q) {
    double dh = p.height - q.height;
    double arg = 1 + (norm_sq(sub(p.base, q.base)) + dh * dh) / (2 * p.height * q.height);
    return std::acosh(std::max(1.0, arg));
}

// log of the inverse Poisson kernel (|x - xi|^2 + h^2) / h; the Busemann
// function is its difference between the two points.
static double log_inv_kernel(const BoundaryPoint& xi, const FramePoint& p) {
    if (xi.infinite) return -std::log(p.height);
    return std::log(norm_sq(sub(p.base, xi.point)) + p.height * p.height) - std::log(p.height);
}

double busemann(const BoundaryPoint& xi, const FramePoint& p, const FramePoint& q) {
    return log_inv_kernel(xi, p) - log_inv_kernel(xi, q);
}

FramePoint geodesic_ray(const BoundaryPoint& xi, double t, int dim) {
    FramePoint o = basepoint(dim);
    if (xi.infinite) return FramePoint(std::exp(t), o.base);
    // Conjugate xi to infinity by p -> sigma(p - xi); the ray is vertical there.
    FramePoint q = weyl_apply(left_translate(scale(-1.0, xi.point), o));
    FramePoint up(q.height * std::exp(t), q.base);
    return left_translate(xi.point, weyl_apply(up));
}

double gromov_dist(const BoundaryPoint& xi1, const BoundaryPoint& xi2, const FramePoint& o) {
    if (xi1.infinite && xi2.infinite)
        throw std::invalid_argument("gromov_dist: both points at infinity");
    const BoundaryPoint& ray_target = xi1.infinite ? xi2 : xi1;
    const double t = 40.0;
    FramePoint xt = geodesic_ray(ray_target, t, o.dim());
    double s = busemann(xi1, o, xt) + busemann(xi2, o, xt);
    return std::exp(-0.5 * s);
}

double busemann_height(const MoebiusMap& g0) {
    MoebiusMap g = g0.normalized();
    return g.a * g.a + g.c * g.c;
}

}  // namespace cuspflow::geometry
