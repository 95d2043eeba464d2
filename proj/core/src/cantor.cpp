#include "cuspflow/cantor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cuspflow::cantor {

using lattice::Cusp;

static const double kNan = std::numeric_limits<double>::quiet_NaN();

namespace {

// Small-denominator rational delta as a pair of integer exponents.
std::pair<unsigned, unsigned> delta_uv(const BigRat& delta) {
    BigInt u = numerator(delta), v = denominator(delta);
    if (u <= 0 || v <= 0 || u > 16 || v > 16)
        throw std::invalid_argument("delta must be a small positive rational (<= 16/16)");
    return {u.convert_to<unsigned>(), v.convert_to<unsigned>()};
}

// Smallest q' with eps (q'^2 - q^2) >= q q'  (child ball inside parent ball).
// Exact root: q' >= q (ed + sqrt(ed^2 + 4 en^2)) / (2 en).
BigInt containment_threshold(const BigInt& q, const BigRat& eps) {
    BigInt en = numerator(eps), ed = denominator(eps);
    BigInt num = ed * q + isqrt_floor((ed * ed + 4 * en * en) * q * q);
    BigInt s = num / (2 * en);
    auto ok = [&](const BigInt& qp) { return en * (qp * qp - q * q) >= ed * q * qp; };
    while (!ok(s)) ++s;
    while (s > q + 1 && ok(s - 1)) --s;
    return s;
}

bool ball_inside(const BigRat& c_in, const BigRat& r_in, const BigRat& c_out,
                 const BigRat& r_out) {
    return c_in - r_in >= c_out - r_out && c_in + r_in <= c_out + r_out;
}

bool balls_disjoint(const BigRat& c1, const BigRat& r1, const BigRat& c2, const BigRat& r2) {
    return abs_rat(c1 - c2) > r1 + r2;
}

// sum_{m=a}^{b} 1/(m + c)^2 for 0 <= c < 1, a >= 1; exact head plus an
// Euler-Maclaurin tail.  The integral term uses the product form
// (y - x)/(x y) so huge nearly-equal endpoints do not cancel.
double sum_inv_sq(double c, double a, double b) {
    if (b < a) return 0.0;
    double s = 0;
    double m = a;
    for (int i = 0; i < 64 && m <= b; ++i, ++m) s += 1.0 / ((m + c) * (m + c));
    if (m > b) return s;
    double x = m + c, y = b + c;
    double integral = (y - x) / (x * y);
    double ends = 0.5 * (1.0 / (x * x) + 1.0 / (y * y));
    double corr = (2.0 / (x * x * x) - 2.0 / (y * y * y)) / 12.0;
    return s + integral + ends + corr;
}

double logsumexp(double a, double b) {
    if (std::isinf(a) && a < 0) return b;
    if (std::isinf(b) && b < 0) return a;
    double m = std::max(a, b);
    return m + std::log(std::exp(a - m) + std::exp(b - m));
}

struct Window {
    BigInt m_lo, m_hi;  // empty when m_hi < m_lo
    BigInt r;           // partner denominator: child den = m q + r
    Cusp partner;
    bool empty() const { return m_hi < m_lo; }
    BigInt size() const { return empty() ? BigInt(0) : BigInt(m_hi - m_lo + 1); }
};

// Successor window of (a, partner) with child den in [q_lo, q_hi].
Window step_window(const Cusp& a, const Cusp& partner, const BigInt& q_lo, const BigInt& q_hi) {
    Window w;
    w.partner = partner;
    w.r = partner.den;
    const BigInt q = a.den;
    w.m_lo = ceil_rat(BigRat(q_lo - w.r, q));
    if (w.m_lo < 1) w.m_lo = 1;
    w.m_hi = floor_rat(BigRat(q_hi - w.r, q));
    return w;
}

FamilyStats family_from_windows(const Cusp& a, const std::vector<Window>& windows,
                                const BigRat& eps, int64_t exact_limit) {
    FamilyStats fs;
    BigInt total = 0;
    for (const auto& w : windows) total += w.size();
    fs.count = total.convert_to<double>();
    if (total <= exact_limit) {
        BigRat measure(0);
        for (const auto& w : windows) {
            for (BigInt m = w.m_lo; m <= w.m_hi; ++m) {
                BigInt qc = m * a.den + w.r;
                measure += 2 * eps / BigRat(qc * qc);
            }
        }
        fs.exact = true;
        fs.measure = measure;
        fs.log_measure = measure > 0 ? log_rat(measure) : -std::numeric_limits<double>::infinity();
        return fs;
    }
    double acc = -std::numeric_limits<double>::infinity();
    double logq = log_big(a.den);
    for (const auto& w : windows) {
        if (w.empty()) continue;
        double c = BigRat(w.r, a.den).convert_to<double>();
        double s = sum_inv_sq(c, w.m_lo.convert_to<double>(), w.m_hi.convert_to<double>());
        if (s <= 0) continue;
        acc = logsumexp(acc, std::log(s) - 2 * logq);
    }
    fs.exact = false;
    fs.log_measure = std::log(2.0) + log_rat(eps) + acc;
    return fs;
}

// Deterministic pick of up to cap window members, both ends first.
std::vector<BigInt> pick_members(const Window& w, int cap) {
    std::vector<BigInt> ms;
    if (w.empty() || cap <= 0) return ms;
    BigInt n = w.size();
    if (n <= cap) {
        for (BigInt m = w.m_lo; m <= w.m_hi; ++m) ms.push_back(m);
        return ms;
    }
    int front = (cap + 1) / 2, back = cap - front;
    for (int i = 0; i < front; ++i) ms.push_back(w.m_lo + i);
    for (int i = back - 1; i >= 0; --i) ms.push_back(w.m_hi - i);
    return ms;
}

std::vector<size_t> pick_recursion(size_t n, int cap) {
    std::vector<size_t> idx;
    if (n == 0 || cap <= 0) return idx;
    idx.push_back(0);
    if (n > 1 && cap > 1) idx.push_back(n - 1);
    if (n > 2 && cap > 2) idx.push_back(n / 2);
    size_t lo = 1, hi = n - 2;
    while (static_cast<int>(idx.size()) < cap && lo <= hi && hi < n) {
        if (std::find(idx.begin(), idx.end(), lo) == idx.end()) idx.push_back(lo);
        if (static_cast<int>(idx.size()) < cap &&
            std::find(idx.begin(), idx.end(), hi) == idx.end())
            idx.push_back(hi);
        ++lo;
        if (hi == 0) break;
        --hi;
    }
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());
    return idx;
}

}  // namespace

// -- steep tree ----------------------------------------------------------------

static CantorNode build_steep_node(const Cusp& a, const Cusp& prev, int level,
                                   const SteepParams& P, unsigned u, unsigned v) {
    CantorNode node;
    node.cusp = a;
    node.prev = prev;
    node.level = level;
    node.height = a.height();
    node.center = a.location();
    node.radius = P.eps / BigRat(node.height);
    if (level >= P.depth) return node;

    const BigInt q = a.den;
    const BigInt h_pow = pow(node.height, v + u);  // h^{v+u}
    if (P.height_cap > 0) {
        BigInt cap_pow = pow(P.height_cap, v);
        if (h_pow > cap_pow)
            throw BuildError("child band outruns the height budget at node " + a.str(), a.str());
    }
    BigInt q_band_lo = iroot_ceil(h_pow, 2 * v);
    BigInt q_band_hi = iroot_floor(pow(BigInt(2), v) * h_pow, 2 * v);
    BigInt q_lo = std::max(q_band_lo, containment_threshold(q, P.eps));

    // Both Farey sides of a.
    Cusp side1 = prev;
    Cusp side2 = lattice::canonical(a.num - prev.num, a.den - prev.den);
    std::vector<Window> windows;
    for (const Cusp& s : {side1, side2}) {
        if (s.den <= 0 || s.den >= a.den) continue;
        windows.push_back(step_window(a, s, q_lo, q_band_hi));
    }
    BigInt total = 0;
    for (const auto& w : windows) total += w.size();
    if (total == 0)
        throw BuildError("empty child band at node " + a.str() + " (root height too small for delta)",
                         a.str());

    node.family = family_from_windows(a, windows, P.eps, P.exact_family_limit);

    // Materialize up to branch_cap children, window ends first.
    int per_side = std::max(1, P.branch_cap / std::max<int>(1, static_cast<int>(windows.size())));
    for (const auto& w : windows) {
        for (const BigInt& m : pick_members(w, per_side)) {
            Cusp child = lattice::neighbor_step(a, w.partner, m);
            BigInt hc = child.height();
            // exact band and containment verification
            BigInt hc_pow = pow(hc, v);
            if (hc_pow < h_pow || hc_pow > pow(BigInt(2), v) * h_pow)
                throw BuildError("child " + child.str() + " left the height band", a.str());
            CantorNode cn;
            cn.center = child.location();
            cn.radius = P.eps / BigRat(hc);
            cn.height = hc;
            if (!ball_inside(cn.center, cn.radius, node.center, node.radius))
                throw BuildError("child ball " + child.str() + " not inside parent", a.str());
            cn.cusp = child;
            node.children.push_back(std::move(cn));
        }
    }
    std::sort(node.children.begin(), node.children.end(),
              [](const CantorNode& x, const CantorNode& y) { return x.height < y.height; });
    for (size_t i = 0; i < node.children.size(); ++i)
        for (size_t j = i + 1; j < node.children.size(); ++j)
            if (!balls_disjoint(node.children[i].center, node.children[i].radius,
                                node.children[j].center, node.children[j].radius))
                throw BuildError("sibling balls intersect under node " + a.str(), a.str());

    auto rec = pick_recursion(node.children.size(), P.recurse_cap);
    for (size_t idx : rec) {
        CantorNode& ch = node.children[idx];
        CantorNode built = build_steep_node(*ch.cusp, a, level + 1, P, u, v);
        built.center = ch.center;  // identical; keep the verified geometry
        built.radius = ch.radius;
        ch = std::move(built);
    }
    for (auto& ch : node.children) ch.level = level + 1;
    return node;
}

CantorNode build_steep_tree(const Cusp& root, const Cusp& root_prev, const SteepParams& params) {
    if (root.is_infinity()) throw std::invalid_argument("build_steep_tree: finite root");
    auto [u, v] = delta_uv(params.delta);
    BigInt cross = root.num * root_prev.den - root_prev.num * root.den;
    if (cross != 1 && cross != -1)
        throw std::invalid_argument("build_steep_tree: root_prev must be a Farey partner");
    return build_steep_node(root, root_prev, 0, params, u, v);
}

// -- slice tree -----------------------------------------------------------------

namespace {

int64_t round_log(const BigInt& h) { return std::llround(log_big(h)); }

// Exact full-band family over the interval I (cusps q in [q_lo, q_hi]).
FamilyStats band_family_exact(const lattice::Interval& I, const BigInt& q_lo, const BigInt& q_hi,
                              const BigRat& eps) {
    FamilyStats fs;
    fs.exact = true;
    BigRat measure(0);
    BigInt count = 0;
    for (BigInt q = q_lo; q <= q_hi; ++q) {
        BigRat lo = I.lo * BigRat(q), hi = I.hi * BigRat(q);
        BigInt p_lo = ceil_rat(lo), p_hi = floor_rat(hi);
        if (BigRat(p_hi) == hi) --p_hi;  // half-open right end
        if (p_hi < p_lo) continue;
        BigInt cnt = lattice::coprime_count(q, p_lo, p_hi);
        count += cnt;
        measure += BigRat(cnt) * 2 * eps / BigRat(q * q);
    }
    fs.count = count.convert_to<double>();
    fs.measure = measure;
    fs.log_measure = measure > 0 ? log_rat(measure) : -std::numeric_limits<double>::infinity();
    return fs;
}

// Coprime-density estimate of the same family for astronomically large bands.
FamilyStats band_family_density(double log_len, const BigInt& q_lo, const BigInt& q_hi,
                                const BigRat& eps) {
    FamilyStats fs;
    fs.exact = false;
    double l1 = log_big(q_lo), l2 = log_big(q_hi);
    // count ~ len (3/pi^2)(q_hi^2 - q_lo^2); sum of 1/q^2 ~ (6/pi^2) log(q_hi/q_lo)
    double log_count = log_len + std::log(3.0 / (M_PI * M_PI)) + 2 * l2 +
                       std::log1p(-std::exp(2 * (l1 - l2)));
    fs.count = std::exp(log_count);
    fs.log_measure =
        std::log(2.0) + log_rat(eps) + log_len + std::log((6.0 / (M_PI * M_PI)) * (l2 - l1));
    return fs;
}

}  // namespace

static CantorNode build_slice_node(const Cusp& a, const Cusp& prev,
                                   const std::vector<BigInt>& h_tilde,
                                   const std::vector<int64_t>& L, int level,
                                   const SliceParams& P) {
    CantorNode node;
    node.cusp = a;
    node.prev = prev;
    node.level = level;
    node.height = a.height();
    node.center = a.location();
    node.radius = P.eps / BigRat(node.height);
    if (node.height < h_tilde[static_cast<size_t>(level)] ||
        node.height > 2 * h_tilde[static_cast<size_t>(level)])
        throw BuildError("slice node " + a.str() + " outside its h-tilde band", a.str());
    if (level >= P.depth) return node;

    // Intermediate cusp: one Farey step of size ~ log h-tilde.
    BigInt m_int = std::max<int64_t>(5, L[static_cast<size_t>(level)]);
    Cusp inter = lattice::neighbor_step(a, prev, m_int);
    node.intermediate = inter;
    BigRat inter_radius = P.eps / BigRat(inter.height());
    BigRat inter_center = inter.location();
    if (!ball_inside(inter_center, inter_radius, node.center, node.radius))
        throw BuildError("intermediate ball not inside node " + a.str(), a.str());

    // Child band in the next h-tilde window.
    const BigInt& band = h_tilde[static_cast<size_t>(level) + 1];
    BigInt qc_lo = isqrt_floor(band);
    while (qc_lo * qc_lo < band) ++qc_lo;
    BigInt qc_hi = isqrt_floor(2 * band);
    BigInt qc_min = std::max(qc_lo, containment_threshold(inter.den, P.eps));
    if (qc_hi < qc_min)
        throw BuildError("empty slice band under node " + a.str(), a.str());

    // Full-band family inside the intermediate ball.
    lattice::Interval I{inter_center - inter_radius, inter_center + inter_radius};
    if (qc_hi <= P.exact_band_limit) {
        node.family = band_family_exact(I, qc_min, qc_hi, P.eps);
    } else {
        node.family = band_family_density(log_rat(2 * inter_radius), qc_min, qc_hi, P.eps);
    }

    // Materialized children: one-step successors of the intermediate cusp.
    Cusp side1 = a;  // partner of inter by construction
    Cusp side2 = lattice::canonical(inter.num - a.num, inter.den - a.den);
    std::vector<Window> windows;
    for (const Cusp& s : {side1, side2}) {
        if (s.den <= 0 || s.den >= inter.den) continue;
        windows.push_back(step_window(inter, s, qc_min, qc_hi));
    }
    int per_side = std::max(1, P.branch_cap / std::max<int>(1, static_cast<int>(windows.size())));
    for (const auto& w : windows) {
        for (const BigInt& m : pick_members(w, per_side)) {
            Cusp child = lattice::neighbor_step(inter, w.partner, m);
            BigInt hc = child.height();
            if (hc < band || hc > 2 * band)
                throw BuildError("slice child " + child.str() + " left the band", a.str());
            CantorNode cn;
            cn.cusp = child;
            cn.center = child.location();
            cn.radius = P.eps / BigRat(hc);
            cn.height = hc;
            if (!ball_inside(cn.center, cn.radius, inter_center, inter_radius))
                throw BuildError("slice child ball " + child.str() + " not inside intermediate",
                                 a.str());
            node.children.push_back(std::move(cn));
        }
    }
    if (node.children.empty())
        throw BuildError("no materialized slice children under " + a.str(), a.str());
    std::sort(node.children.begin(), node.children.end(),
              [](const CantorNode& x, const CantorNode& y) { return x.height < y.height; });
    for (size_t i = 0; i < node.children.size(); ++i)
        for (size_t j = i + 1; j < node.children.size(); ++j)
            if (!balls_disjoint(node.children[i].center, node.children[i].radius,
                                node.children[j].center, node.children[j].radius))
                throw BuildError("slice siblings intersect under " + a.str(), a.str());

    auto rec = pick_recursion(node.children.size(), P.recurse_cap);
    for (size_t idx : rec) {
        CantorNode& ch = node.children[idx];
        CantorNode built = build_slice_node(*ch.cusp, inter, h_tilde, L, level + 1, P);
        ch = std::move(built);
    }
    for (auto& ch : node.children) ch.level = level + 1;
    return node;
}

CantorNode build_slice_tree(const std::vector<BigInt>& base_heights, const SliceParams& params) {
    if (static_cast<int>(base_heights.size()) < params.depth + 2)
        throw std::invalid_argument("build_slice_tree: need depth+2 base heights");
    auto [u, v] = delta_uv(params.delta);
    for (size_t p = 0; p + 1 < base_heights.size(); ++p) {
        BigInt lhs = pow(base_heights[p + 1], v);
        BigInt lo = pow(base_heights[p], v + u);
        if (lhs < lo || lhs > pow(BigInt(2), v) * lo)
            throw BuildError("base sequence violates the height law at index " + std::to_string(p),
                             std::to_string(p));
    }
    std::vector<int64_t> L;
    std::vector<BigInt> h_tilde;
    for (const auto& h : base_heights) {
        int64_t l = round_log(h);
        if (l < 5)
            throw BuildError("base height too small for the slice construction", "root");
        L.push_back(l);
        h_tilde.push_back(h / l);
    }
    // Root cusp: q with q^2 in [h~(0), 2 h~(0)], location near the center.
    BigInt q = isqrt_floor(h_tilde[0]);
    while (q * q < h_tilde[0]) ++q;
    if (q * q > 2 * h_tilde[0])
        throw BuildError("slice root band empty (base height too small)", "root");
    BigInt p0 = floor_rat(params.center * BigRat(q));
    Cusp root;
    bool found = false;
    for (BigInt off = 0; off <= 64 && !found; ++off) {
        for (BigInt s : {BigInt(p0 + off), BigInt(p0 - off)}) {
            if (gcd(s, q) == 1) {
                root = Cusp{s, q};
                found = true;
                break;
            }
        }
    }
    if (!found) throw BuildError("no coprime numerator near the slice center", "root");
    Cusp prev = lattice::farey_partner(root);
    return build_slice_node(root, prev, h_tilde, L, 0, params);
}

// -- synthetic tree ---------------------------------------------------------------

CantorNode build_synthetic_tree(const BigRat& center, const BigRat& d0, const BigRat& lambda,
                                int K, int depth) {
    if (K < 1 || lambda <= 0 || BigRat(K) * lambda > 1)
        throw std::invalid_argument("build_synthetic_tree: need K >= 1 and K * lambda <= 1");
    CantorNode node;
    node.center = center;
    node.radius = d0 / 2;
    node.level = 0;
    if (depth == 0) return node;
    BigRat child_d = d0 * lambda;
    BigRat gap = (d0 - BigRat(K) * child_d) / BigRat(K + 1);
    BigRat x = center - node.radius;
    for (int i = 0; i < K; ++i) {
        x += gap;
        CantorNode ch = build_synthetic_tree(x + child_d / 2, child_d, lambda, K, depth - 1);
        x += child_d;
        node.children.push_back(std::move(ch));
    }
    // fix levels of the subtree
    std::vector<CantorNode*> stack{&node};
    while (!stack.empty()) {
        CantorNode* n = stack.back();
        stack.pop_back();
        for (auto& ch : n->children) {
            ch.level = n->level + 1;
            stack.push_back(&ch);
        }
    }
    return node;
}

// -- evaluation -------------------------------------------------------------------

double BoundReport::s_at(int j) const {
    for (const auto& r : rows)
        if (r.j == j) return r.s;
    throw std::out_of_range("BoundReport::s_at");
}

static std::string format_from_log(double lg) {
    if (std::abs(lg) < 600) return fmt_double(std::exp(lg));
    double l10 = lg / std::log(10.0);
    double e = std::floor(l10);
    double m = std::pow(10.0, l10 - e);
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6fe%+d", m, static_cast<int>(e));
    return buf;
}

std::vector<std::vector<std::string>> BoundReport::csv_rows() const {
    std::vector<std::vector<std::string>> out;
    for (const auto& r : rows) {
        out.push_back({std::to_string(r.j), format_from_log(-r.log_inv_d),
                       std::isnan(r.log_inv_delta) ? "-" : format_from_log(-r.log_inv_delta),
                       r.j >= 1 ? fmt_double(r.s) : "-"});
    }
    return out;
}

BoundReport evaluate_bound(const CantorNode& root, int n) {
    BoundReport rep;
    rep.n = n;
    std::vector<std::vector<const CantorNode*>> levels;
    std::vector<const CantorNode*> cur{&root};
    while (!cur.empty()) {
        levels.push_back(cur);
        std::vector<const CantorNode*> next;
        for (const CantorNode* nd : cur)
            for (const auto& ch : nd->children) next.push_back(&ch);
        cur = std::move(next);
    }
    if (levels.size() < 2) throw std::invalid_argument("evaluate_bound: tree depth >= 2 required");

    std::vector<double> log_inv_delta(levels.size(), kNan);
    std::vector<bool> exact(levels.size(), true);
    std::vector<double> log_d(levels.size(), -std::numeric_limits<double>::infinity());
    for (size_t j = 0; j < levels.size(); ++j) {
        bool any = false;
        double worst = -std::numeric_limits<double>::infinity();
        for (const CantorNode* nd : levels[j]) {
            double ld = log_rat(2 * nd->radius);
            log_d[j] = std::max(log_d[j], ld);
            double lm;
            bool ex;
            if (nd->family) {
                lm = nd->family->log_measure;
                ex = nd->family->exact;
            } else if (!nd->children.empty()) {
                BigRat m(0);
                for (const auto& ch : nd->children) m += 2 * ch.radius;
                lm = log_rat(m);
                ex = true;
            } else {
                continue;
            }
            any = true;
            worst = std::max(worst, ld - lm);  // log(1/Delta) per node
            exact[j] = exact[j] && ex;
        }
        if (any) log_inv_delta[j] = worst;
    }

    double acc = 0;
    for (size_t j = 0; j < levels.size(); ++j) {
        BoundRow row;
        row.j = static_cast<int>(j);
        row.log_inv_d = -log_d[j];
        row.log_inv_delta = log_inv_delta[j];
        row.delta_exact = exact[j];
        if (j >= 1) row.s = (n - 1) - acc / row.log_inv_d;
        if (!std::isnan(log_inv_delta[j])) acc += log_inv_delta[j];
        rep.rows.push_back(row);
    }
    return rep;
}

double ideal_steep_s(int j, double delta, int n) {
    double g = std::pow(1 + delta, j);
    return (n - 1) * (1 - 0.5 * (g - 1) / g);
}

std::vector<std::string> validate_tree(const CantorNode& root) {
    std::vector<std::string> issues;
    std::vector<const CantorNode*> stack{&root};
    std::vector<double> level_max_diam;
    while (!stack.empty()) {
        const CantorNode* nd = stack.back();
        stack.pop_back();
        size_t lvl = static_cast<size_t>(nd->level);
        if (level_max_diam.size() <= lvl) level_max_diam.resize(lvl + 1, -1e300);
        level_max_diam[lvl] = std::max(level_max_diam[lvl], log_rat(2 * nd->radius));
        for (size_t i = 0; i < nd->children.size(); ++i) {
            const auto& ch = nd->children[i];
            if (!ball_inside(ch.center, ch.radius, nd->center, nd->radius))
                issues.push_back("child not nested at level " + std::to_string(ch.level));
            for (size_t k = i + 1; k < nd->children.size(); ++k)
                if (!balls_disjoint(ch.center, ch.radius, nd->children[k].center,
                                    nd->children[k].radius))
                    issues.push_back("siblings intersect at level " + std::to_string(ch.level));
            stack.push_back(&ch);
        }
    }
    for (size_t j = 1; j < level_max_diam.size(); ++j)
        if (!(level_max_diam[j] < level_max_diam[j - 1]))
            issues.push_back("diameters not strictly decreasing at level " + std::to_string(j));
    return issues;
}

// Min-height child, preferring children whose subtrees were built out.
static const CantorNode* descend_once(const CantorNode& nd) {
    const CantorNode* best = nullptr;
    for (const auto& ch : nd.children)
        if (!ch.children.empty() && (!best || ch.height < best->height)) best = &ch;
    if (!best)
        for (const auto& ch : nd.children)
            if (!best || ch.height < best->height) best = &ch;
    return best;
}

BigRat deepest_location(const CantorNode& root) {
    const CantorNode* nd = &root;
    while (!nd->children.empty()) nd = descend_once(*nd);
    return nd->center;
}

std::vector<BigInt> path_heights(const CantorNode& root) {
    std::vector<BigInt> hs;
    const CantorNode* nd = &root;
    hs.push_back(nd->height);
    while (!nd->children.empty()) {
        nd = descend_once(*nd);
        hs.push_back(nd->height);
    }
    return hs;
}

// -- separated pair ------------------------------------------------------------------

SeparatedPair build_separated_pair(const SeparatedPairParams& params) {
    // Base root with log-height ~ base_log_height, built by Farey steps.
    Cusp prev{0, 1}, cur{1, 1};
    while (2 * log_big(cur.den) < params.base_log_height) {
        Cusp next = lattice::neighbor_step(cur, prev, 8);
        prev = cur;
        cur = next;
    }
    SteepParams sp;
    sp.delta = params.delta;
    sp.eps = params.eps;
    sp.depth = params.depth;
    sp.branch_cap = 2;
    sp.recurse_cap = 1;
    SeparatedPair out;
    out.base_path = build_steep_tree(cur, prev, sp);
    out.base_heights = path_heights(out.base_path);

    SliceParams sl;
    sl.delta = params.delta;
    sl.eps = params.eps;
    sl.depth = params.depth - 1;
    sl.branch_cap = 2;
    sl.recurse_cap = 1;
    out.slice_path = build_slice_tree(out.base_heights, sl);

    out.tuple.components = {
        excursion::Direction::rational(deepest_location(out.base_path)),
        excursion::Direction::rational(deepest_location(out.slice_path)),
    };
    out.tuple.theta = BigRat(1);
    out.tuple.h_max = out.base_heights.back() * 1024;
    out.horizon = log_big(out.base_heights.back());
    return out;
}

}  // namespace cuspflow::cantor
