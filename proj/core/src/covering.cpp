#include "cuspflow/covering.hpp"

#include <algorithm>
#include <cmath>

namespace cuspflow::covering {

using lattice::Cusp;

BigRat CoverNode::ball_radius_sq() const {
    return c * c / BigRat(ai().height() * aj().height());
}

double CoverNode::log_diam() const {
    return std::log(2.0) + log_rat(c) -
           0.5 * (log_big(ai().height()) + log_big(aj().height()));
}

void CoverNode::box_radius(int l, bool& is_sqrt, BigRat& value_or_sq) const {
    if (l == i) {
        is_sqrt = false;
        value_or_sq = c / BigRat(ai().height());
    } else {
        is_sqrt = true;
        value_or_sq = ball_radius_sq();
    }
}

std::string CoverNode::str() const {
    std::string s = "(";
    for (size_t l = 0; l < cusps.size(); ++l) s += (l ? ", " : "") + cusps[l].str();
    s += "; i=" + std::to_string(i + 1) + ", j=" + std::to_string(j + 1) + ")";
    return s;
}

bool CoverNode::operator==(const CoverNode& o) const {
    return i == o.i && j == o.j && cusps == o.cusps;
}

namespace {

// |d| <= r1 + r2 where each r is either exact or sqrt(stored value), exact.
bool dist_leq_radii(const BigRat& dist, bool s1, const BigRat& v1, bool s2, const BigRat& v2) {
    BigRat d = abs_rat(dist);
    if (!s1 && !s2) return d <= v1 + v2;
    if (s1 && s2) {
        // d <= sqrt(v1) + sqrt(v2)  <=>  d^2 - v1 - v2 <= 2 sqrt(v1 v2)
        BigRat t = d * d - v1 - v2;
        if (t <= 0) return true;
        return t * t <= 4 * v1 * v2;
    }
    const BigRat& rat = s1 ? v2 : v1;
    const BigRat& sq = s1 ? v1 : v2;
    if (d <= rat) return true;
    BigRat rem = d - rat;
    return rem * rem <= sq;
}

// |x - center| <= radius with the same encoding.
bool inside_radius(const BigRat& x, const BigRat& center, bool is_sqrt, const BigRat& v) {
    BigRat d = abs_rat(x - center);
    if (!is_sqrt) return d <= v;
    return d * d <= v;
}

bool boxes_intersect(const CoverNode& a, const CoverNode& b) {
    for (size_t l = 0; l < a.cusps.size(); ++l) {
        bool s1, s2;
        BigRat v1, v2;
        a.box_radius(static_cast<int>(l), s1, v1);
        b.box_radius(static_cast<int>(l), s2, v2);
        BigRat d = a.cusps[l].location() - b.cusps[l].location();
        if (!dist_leq_radii(d, s1, v1, s2, v2)) return false;
    }
    return true;
}

// One Farey-step relation a -> a' with quotient >= C: unimodular cross and a
// denominator jump of at least C.
bool is_step(const Cusp& a, const Cusp& b, const BigInt& C) {
    if (a.is_infinity() || b.is_infinity()) return false;
    BigInt cross = a.num * b.den - b.num * a.den;
    if (cross != 1 && cross != -1) return false;
    return b.den >= C * a.den;
}

void sort_nodes(std::vector<CoverNode>& v) {
    std::sort(v.begin(), v.end(), [](const CoverNode& a, const CoverNode& b) {
        for (size_t l = 0; l < a.cusps.size(); ++l) {
            if (a.cusps[l].den != b.cusps[l].den) return a.cusps[l].den < b.cusps[l].den;
            if (a.cusps[l].num != b.cusps[l].num) return a.cusps[l].num < b.cusps[l].num;
        }
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });
}

}  // namespace

CoverNode make_node(std::vector<Cusp> cusps, int i, int j, const BigRat& delta, const BigRat& c,
                    const NetProvider* nets) {
    const int k = static_cast<int>(cusps.size());
    if (k < 2 || i == j || i < 0 || j < 0 || i >= k || j >= k)
        throw std::invalid_argument("make_node: need k >= 2 and distinct i, j");
    CoverNode node;
    node.cusps = std::move(cusps);
    node.i = i;
    node.j = j;
    node.c = c;
    if (!(BigRat(node.aj().height()) < delta * BigRat(node.ai().height())))
        throw NodeRejected("h(a_j) < delta h(a_i) fails for " + node.str(), "height-ordering");
    BigInt N = node.ai().height() * node.aj().height();
    for (int l = 0; l < k; ++l) {
        if (l == i || l == j) continue;
        if (!nets)
            throw NodeRejected("no net provided for component " + std::to_string(l + 1),
                               "net-membership");
        const counting::NetE& net = (*nets)(l, N);
        if (node.cusps[static_cast<size_t>(l)].height() > net.N ||
            !net.contains(node.cusps[static_cast<size_t>(l)]))
            throw NodeRejected("component " + std::to_string(l + 1) + " not in the net",
                               "net-membership");
    }
    return node;
}

SuccessorSet successors(const CoverNode& node, const BigRat& delta, const Truncation& trunc,
                        const NetProvider* nets) {
    if (node.cusps.size() != 2 && !nets)
        throw std::invalid_argument("successors: k > 2 requires a net provider");
    SuccessorSet out;
    const int k = static_cast<int>(node.cusps.size());
    const Cusp& aj = node.aj();
    const BigInt hi = node.ai().height(), hj = node.aj().height();

    // Moves of component j: a'_j = (m p + p*)/(m q + q*) over both signs of m,
    // with the realize() second column as the base partner.
    lattice::IMat2 g = lattice::realize(aj);
    std::vector<Cusp> j_moves;
    BigInt m_start = trunc.min_quotient > 1 ? BigInt(trunc.min_quotient - 1) : BigInt(1);
    for (int sign : {1, -1}) {
        for (BigInt m = m_start;; ++m) {
            BigInt den = sign * m * g.c + g.d;
            BigInt num = sign * m * g.a + g.b;
            if (den * den > trunc.height_cap) break;
            Cusp cand = lattice::canonical(num, den);
            if (cand.is_infinity()) continue;
            if (!is_step(aj, cand, trunc.min_quotient)) continue;
            // rho condition 3 (first half): h(a_i) < h(a'_j)
            if (!(cand.height() > hi)) continue;
            j_moves.push_back(cand);
        }
    }

    for (int jp = 0; jp < k; ++jp) {
        if (jp == node.j) continue;  // a successor pair (j, j') always has j' != j
        for (const Cusp& ajp_move : j_moves) {
            // candidates for component j' and the passive components
            std::vector<std::vector<Cusp>> comp_choices(static_cast<size_t>(k));
            comp_choices[static_cast<size_t>(node.j)] = {ajp_move};
            bool feasible = true;
            for (int l = 0; l < k && feasible; ++l) {
                if (l == node.j) continue;
                if (l == jp) {
                    std::vector<Cusp> cands;
                    if (jp == node.i) {
                        // rho condition 2: higher and within c/h_i of a_i
                        BigRat r = node.c / BigRat(hi);
                        BigRat ctr = node.ai().location();
                        lattice::Interval I{ctr - r, ctr + r, true, true};
                        for (Cusp& cc : lattice::enumerate_cusps(I, trunc.height_cap)) {
                            if (!(cc.height() > hi)) continue;
                            if (!(cc.height() > hj)) continue;  // rho condition 3
                            cands.push_back(cc);
                        }
                    } else {
                        // No locality on a fresh j' component beyond the box
                        // intersection; take net points near the old position.
                        const counting::NetE& net = (*nets)(l, hi * hj);
                        for (const Cusp& cc : net.members)
                            if (cc.height() > hj) cands.push_back(cc);
                    }
                    comp_choices[static_cast<size_t>(l)] = std::move(cands);
                } else {
                    // passive component: net member at the successor scale
                    if (!nets) { feasible = false; break; }
                    comp_choices[static_cast<size_t>(l)] = {};  // filled per successor below
                }
                if (comp_choices[static_cast<size_t>(l)].empty() && (l == jp)) feasible = false;
            }
            if (!feasible) continue;

            for (const Cusp& ajp : comp_choices[static_cast<size_t>(jp)]) {
                // rho condition 5: h(a_i)^2 <= h(a'_j) h(a'_{j'})
                if (hi * hi > ajp_move.height() * ajp.height()) continue;
                std::vector<Cusp> succ_cusps(static_cast<size_t>(k));
                succ_cusps[static_cast<size_t>(node.j)] = ajp_move;
                succ_cusps[static_cast<size_t>(jp)] = ajp;
                bool complete = true;
                for (int l = 0; l < k; ++l) {
                    if (l == node.j || l == jp) continue;
                    const counting::NetE& net = (*nets)(l, ajp_move.height() * ajp.height());
                    // nearest net member to the old component position
                    const Cusp& old = node.cusps[static_cast<size_t>(l)];
                    const Cusp* best = nullptr;
                    BigRat bestd(0);
                    for (const Cusp& cc : net.members) {
                        BigRat d = abs_rat(cc.location() - old.location());
                        if (!best || d < bestd) { best = &cc; bestd = d; }
                    }
                    if (!best) { complete = false; break; }
                    succ_cusps[static_cast<size_t>(l)] = *best;
                }
                if (!complete) continue;
                CoverNode cand;
                try {
                    cand = make_node(succ_cusps, node.j, jp, delta, node.c, nets);
                } catch (const NodeRejected&) {
                    continue;
                }
                if (!boxes_intersect(node, cand)) continue;  // rho condition 4
                out.nodes.push_back(std::move(cand));
                if (out.nodes.size() >= trunc.max_nodes) {
                    out.truncated = true;
                    sort_nodes(out.nodes);
                    return out;
                }
            }
        }
    }
    sort_nodes(out.nodes);
    return out;
}

SuccessorSet successors_brute(const CoverNode& node, const BigRat& delta,
                              const Truncation& trunc) {
    if (node.cusps.size() != 2)
        throw std::invalid_argument("successors_brute: k = 2 only");
    SuccessorSet out;
    const Cusp& aj = node.aj();
    const BigInt hi = node.ai().height(), hj = node.aj().height();
    const int jp = node.i;  // k = 2: the new pair is (j, i)

    // Component j candidates: every cusp in a window wide enough to hold all
    // unimodular steps of a_j, filtered by the exact step relation.
    BigRat w = BigRat(1) / BigRat(aj.height());
    lattice::Interval Ij{aj.location() - w, aj.location() + w, true, true};
    std::vector<Cusp> j_cands;
    for (Cusp& cc : lattice::enumerate_cusps(Ij, trunc.height_cap)) {
        if (!is_step(aj, cc, trunc.min_quotient)) continue;
        if (!(cc.height() > hi)) continue;
        j_cands.push_back(cc);
    }
    BigRat r = node.c / BigRat(hi);
    lattice::Interval Ii{node.ai().location() - r, node.ai().location() + r, true, true};
    std::vector<Cusp> i_cands;
    for (Cusp& cc : lattice::enumerate_cusps(Ii, trunc.height_cap)) {
        if (!(cc.height() > hi)) continue;
        if (!(cc.height() > hj)) continue;
        i_cands.push_back(cc);
    }
    for (const Cusp& cj : j_cands) {
        for (const Cusp& ci : i_cands) {
            if (hi * hi > cj.height() * ci.height()) continue;
            std::vector<Cusp> cusps(2);
            cusps[static_cast<size_t>(node.j)] = cj;
            cusps[static_cast<size_t>(jp)] = ci;
            CoverNode cand;
            try {
                cand = make_node(cusps, node.j, jp, delta, node.c, nullptr);
            } catch (const NodeRejected&) {
                continue;
            }
            if (!boxes_intersect(node, cand)) continue;
            out.nodes.push_back(std::move(cand));
            if (out.nodes.size() >= trunc.max_nodes) {
                out.truncated = true;
                sort_nodes(out.nodes);
                return out;
            }
        }
    }
    sort_nodes(out.nodes);
    return out;
}

CoveringSum covering_sum(const CoverNode& node, double s, const BigRat& delta,
                         const Truncation& trunc) {
    SuccessorSet succ = successors(node, delta, trunc);
    std::vector<double> terms;
    const double ld = node.log_diam();
    terms.reserve(succ.nodes.size());
    for (const auto& nd : succ.nodes) terms.push_back(std::exp(s * (nd.log_diam() - ld)));
    std::sort(terms.begin(), terms.end(), std::greater<double>());
    double sum = 0, comp = 0;
    for (double t : terms) {
        double y = t - comp;
        double next = sum + y;
        comp = (next - sum) - y;
        sum = next;
    }
    return CoveringSum{sum, terms.size(), succ.truncated};
}

double covering_crossing(const CoverNode& node, const BigRat& delta, const Truncation& trunc,
                         double tol) {
    const int k = static_cast<int>(node.cusps.size());
    const int n = 2;
    double lo = (k - 1) * (n - 1) + 1e-9, hi = k * (n - 1) - 1e-9;
    SuccessorSet succ = successors(node, delta, trunc);
    auto sum_at = [&](double s) {
        const double ld = node.log_diam();
        std::vector<double> terms;
        terms.reserve(succ.nodes.size());
        for (const auto& nd : succ.nodes) terms.push_back(std::exp(s * (nd.log_diam() - ld)));
        std::sort(terms.begin(), terms.end(), std::greater<double>());
        double sum = 0;
        for (double t : terms) sum += t;
        return sum;
    };
    if (sum_at(lo) <= 1) return lo;
    if (sum_at(hi) >= 1) return hi;
    while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        (sum_at(mid) > 1 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

ChainReport chain_extract(const product::DirectionTuple& xs, const product::TupleSpectra& ts,
                          const BigRat& delta, double horizon, const BigRat& c,
                          const Truncation& trunc) {
    if (xs.components.size() != 2)
        throw std::invalid_argument("chain_extract: implemented for k = 2");
    if (product::classify(ts, delta, horizon) != product::Classification::Escaping)
        throw std::invalid_argument("chain_extract: tuple must classify escaping at delta");

    ChainReport rep;
    auto trace = product::minima_trace(ts, horizon);
    struct Trip {
        int i;
        Cusp a, b;  // current and next cusp of the outgoing component
    };
    std::vector<Trip> trips;
    // The chain starts past the last minimum at or below 1/delta; from there
    // the escaping bound controls every height ratio.
    double bar = -log_rat(delta);
    size_t start = 0;
    for (size_t e = 0; e < trace.events.size(); ++e)
        if (trace.events[e].log_value <= bar) start = e + 1;
    for (size_t e = start; e < trace.events.size(); ++e) {
        const auto& ev = trace.events[e];
        if (!ev.cusp_from || !ev.cusp_from_active) continue;
        trips.push_back(Trip{ev.from, *ev.cusp_from_active, *ev.cusp_from});
    }
    if (trips.size() < 3) {
        rep.violations.push_back("horizon too short: fewer than 3 usable minima");
        return rep;
    }

    // Subsequence rule: smallest p with h(b(p_l))^2 <= h(b(p)) h(a(p+1)) that
    // also switches component and keeps the index-set height ordering.
    std::vector<size_t> picks{0};
    for (;;) {
        size_t last = picks.back();
        BigInt target = trips[last].b.height() * trips[last].b.height();
        std::optional<size_t> next;
        for (size_t p = last + 1; p + 1 < trips.size(); ++p) {
            if (trips[p].b.height() * trips[p + 1].a.height() < target) continue;
            if (trips[p].i == trips[last].i) continue;
            if (!(BigRat(trips[p].a.height()) < delta * BigRat(trips[last].b.height())))
                continue;
            next = p;
            break;
        }
        if (!next) break;
        picks.push_back(*next);
    }
    if (picks.size() < 2) {
        rep.violations.push_back("horizon too short: subsequence has fewer than 2 entries");
        return rep;
    }

    // u(l) = (c_1, c_2, i(l), i(l+1)) with c_{i(l)} = b(p_l), c_{i(l+1)} = a(p_{l+1}).
    for (size_t l = 0; l + 1 < picks.size(); ++l) {
        const Trip& cur = trips[picks[l]];
        const Trip& nxt = trips[picks[l + 1]];
        std::vector<Cusp> cusps(2);
        cusps[static_cast<size_t>(cur.i)] = cur.b;
        cusps[static_cast<size_t>(nxt.i)] = nxt.a;
        try {
            rep.chain.push_back(make_node(cusps, cur.i, nxt.i, delta, c, nullptr));
        } catch (const NodeRejected& e) {
            rep.violations.push_back(std::string("index-set rejection at link ") +
                                     std::to_string(l) + ": " + e.what());
            return rep;
        }
    }

    // Clause (i): xs inside every ball and inner box.
    for (size_t l = 0; l < rep.chain.size(); ++l) {
        const CoverNode& nd = rep.chain[l];
        BigRat rsq = nd.ball_radius_sq();
        for (size_t comp = 0; comp < 2; ++comp) {
            BigRat xc = xs.components[comp].mid();
            BigRat d = abs_rat(xc - nd.cusps[comp].location());
            if (d * d > rsq)
                rep.violations.push_back("ball membership fails at node " + std::to_string(l) +
                                         " component " + std::to_string(comp + 1));
            bool is_sqrt;
            BigRat v;
            nd.box_radius(static_cast<int>(comp), is_sqrt, v);
            if (!inside_radius(xc, nd.cusps[comp].location(), is_sqrt, v))
                rep.violations.push_back("box membership fails at node " + std::to_string(l) +
                                         " component " + std::to_string(comp + 1));
        }
    }

    // Clause (ii): successor membership, the five conditions exactly.
    for (size_t l = 0; l + 1 < rep.chain.size(); ++l) {
        const CoverNode& a = rep.chain[l];
        const CoverNode& b = rep.chain[l + 1];
        std::string at = " at link " + std::to_string(l);
        if (b.i != a.j) rep.violations.push_back("index chain broken" + at);
        const Cusp& old_j = a.cusps[static_cast<size_t>(a.j)];
        const Cusp& new_j = b.cusps[static_cast<size_t>(a.j)];
        if (!is_step(old_j, new_j, trunc.min_quotient))
            rep.violations.push_back("condition 1 (Farey step) fails" + at);
        if (b.j == a.i) {
            const Cusp& old_i = a.cusps[static_cast<size_t>(a.i)];
            const Cusp& new_i = b.cusps[static_cast<size_t>(a.i)];
            if (!(new_i.height() > old_i.height()))
                rep.violations.push_back("condition 2 (height growth) fails" + at);
            BigRat d = abs_rat(new_i.location() - old_i.location());
            if (d > a.c / BigRat(old_i.height()))
                rep.violations.push_back("condition 2 (locality) fails" + at);
        }
        if (!(a.ai().height() < b.cusps[static_cast<size_t>(a.j)].height()) ||
            !(a.aj().height() < b.cusps[static_cast<size_t>(b.j)].height()))
            rep.violations.push_back("condition 3 (height ordering) fails" + at);
        if (!boxes_intersect(a, b)) rep.violations.push_back("condition 4 (boxes) fails" + at);
        BigInt lhs = a.ai().height() * a.ai().height();
        if (lhs > b.ai().height() * b.aj().height())
            rep.violations.push_back("condition 5 (height product) fails" + at);
    }

    // Clause (iii): geometric contraction by at least sqrt(delta).
    for (size_t l = 0; l + 1 < rep.chain.size(); ++l) {
        double ratio = std::exp(rep.chain[l + 1].log_diam() - rep.chain[l].log_diam());
        rep.contraction.push_back(ratio);
        // ratio^2 <= delta exactly: (h_i h_j)(l) / (h_i h_j)(l+1) <= delta
        BigRat r2 = BigRat(rep.chain[l].ai().height() * rep.chain[l].aj().height()) /
                    BigRat(rep.chain[l + 1].ai().height() * rep.chain[l + 1].aj().height());
        if (r2 > delta)
            rep.violations.push_back("contraction fails at link " + std::to_string(l));
    }
    return rep;
}

}  // namespace cuspflow::covering
