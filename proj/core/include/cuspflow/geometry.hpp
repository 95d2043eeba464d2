#pragma once

#include <complex>
#include <vector>

namespace cuspflow::geometry {

using Vec = std::vector<double>;

double norm_sq(const Vec& v);
double norm(const Vec& v);
Vec add(const Vec& a, const Vec& b);
Vec sub(const Vec& a, const Vec& b);
Vec scale(double s, const Vec& v);

/// A point of hyperbolic n-space in horospherical coordinates (height, base),
/// height the A-coordinate e^t and base a vector in R^{n-1}.
struct FramePoint {
    double height = 1.0;
    Vec base;

    FramePoint() = default;
    FramePoint(double h, Vec b);
    int dim() const { return static_cast<int>(base.size()) + 1; }
};

/// Ideal boundary point: a vector in R^{n-1} or the point at infinity.
struct BoundaryPoint {
    bool infinite = false;
    Vec point;

    static BoundaryPoint inf() { return BoundaryPoint{true, {}}; }
    static BoundaryPoint finite(Vec v) { return BoundaryPoint{false, std::move(v)}; }
    static BoundaryPoint finite1(double x) { return finite(Vec{x}); }
};

/// Unimodular 2x2 real matrix acting on the upper half-plane (n = 2).
struct MoebiusMap {
    double a = 1, b = 0, c = 0, d = 1;

    static MoebiusMap identity() { return {}; }
    static MoebiusMap weyl() { return {0, -1, 1, 0}; }
    static MoebiusMap translation(double x) { return {1, x, 0, 1}; }
    static MoebiusMap dilation(double t);  // a(t) = diag(e^{t/2}, e^{-t/2})

    double det() const { return a * d - b * c; }
    MoebiusMap normalized() const;  // scale so det = 1
    MoebiusMap operator*(const MoebiusMap& o) const;
    MoebiusMap inverse() const;
};

/// Complex counterpart for the upper half-space H^3.
struct MoebiusMap3 {
    std::complex<double> a{1, 0}, b{0, 0}, c{0, 0}, d{1, 0};
    MoebiusMap3 operator*(const MoebiusMap3& o) const;
};

/// Bruhat normal form of g: u(x) sigma u(y) a(r) m on the generic cell,
/// u(y) a(r) m on the parabolic cell (c = 0).  n = 2 realization, m = +-1.
struct BruhatForm {
    bool generic = true;
    double x = 0;  // only on the generic cell
    double y = 0;
    double r = 0;  // log-height, e^r = c^2 on the generic cell
    double m = 1;
};

// -- group actions in coordinates ------------------------------------------

/// Weyl reflection: (h, x) -> (h, -x) / (h^2 + |x|^2).
FramePoint weyl_apply(const FramePoint& p);

/// u(v): (h, x) -> (h, x + v).
FramePoint left_translate(const Vec& v, const FramePoint& p);

/// a(t): (h, x) -> (e^t h, e^t x).
FramePoint left_dilate(double t, const FramePoint& p);

/// Fractional-linear action on the upper half-plane. Throws on numerically
/// degenerate images (height <= 0), which a unimodular map cannot produce.
FramePoint moebius_apply(const MoebiusMap& g, const FramePoint& p);

/// Poincare extension of a complex Moebius map to H^3; p.base is (Re, Im).
FramePoint moebius_apply3(const MoebiusMap3& g, const FramePoint& p);

/// Induced action on the ideal boundary R union {inf}.
BoundaryPoint moebius_boundary(const MoebiusMap& g, const BoundaryPoint& xi);

MoebiusMap bruhat_compose(const BruhatForm& f);
BruhatForm bruhat_decompose(const MoebiusMap& g);

// -- metric-level functions -------------------------------------------------

/// cosh d = 1 + (|x_p - x_q|^2 + (h_p - h_q)^2) / (2 h_p h_q).
double hyperbolic_distance(const FramePoint& p, const FramePoint& q);

/// Busemann function B_xi(p, q), closed form (Poisson kernel ratio).
double busemann(const BoundaryPoint& xi, const FramePoint& p, const FramePoint& q);

/// Unit-speed geodesic ray from o = (1, 0) toward xi, evaluated at time t.
FramePoint geodesic_ray(const BoundaryPoint& xi, double t, int dim = 2);

/// Gromov metric d_o(xi1, xi2) at the basepoint o, evaluated along the ray to
/// the first finite argument at t = 40.  Both arguments infinite is rejected.
double gromov_dist(const BoundaryPoint& xi1, const BoundaryPoint& xi2, const FramePoint& o);

/// exp(B_inf(g^{-1} o, o)) = a^2 + c^2 for g = (a b; c d).
double busemann_height(const MoebiusMap& g);

FramePoint basepoint(int dim = 2);

}  // namespace cuspflow::geometry
