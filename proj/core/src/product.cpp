#include "cuspflow/product.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace cuspflow::product {

using excursion::ExcursionRecord;
using excursion::Spectrum;
using lattice::Cusp;

static const double kInf = std::numeric_limits<double>::infinity();

TupleSpectra compute_spectra(const DirectionTuple& xs) {
    if (xs.components.empty()) throw std::invalid_argument("compute_spectra: k >= 1");
    TupleSpectra ts;
    for (const auto& x : xs.components)
        ts.spectra.push_back(excursion::spectrum(x, xs.theta, xs.h_max));
    return ts;
}

namespace {

double record_log_value(const ExcursionRecord& r, double t) {
    return excursion::profile_log_value(r.log_dist, r.log_h, t);
}

// Dip time between two consecutive records of one component: the crossing of
// the falling and rising profiles, bracketed by the two peaks.
double dip_time(const ExcursionRecord& a, const ExcursionRecord& b) {
    double lo = a.t_peak, hi = std::isinf(b.t_peak) ? b.t_enter + 60 : b.t_peak;
    auto g = [&](double t) { return record_log_value(a, t) - record_log_value(b, t); };
    if (!(g(lo) > 0) || !(g(hi) < 0)) {
        // Overlapping profiles; fall back to the midpoint of the peaks.
        return 0.5 * (lo + hi);
    }
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (g(mid) > 0 ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

// Per-component piecewise structure: record r is active on
// [dips[r-1], dips[r]].
struct ComponentTrack {
    const Spectrum* s = nullptr;
    std::vector<double> dips;  // size records-1

    size_t active_index(double t) const {
        auto it = std::upper_bound(dips.begin(), dips.end(), t);
        return static_cast<size_t>(it - dips.begin());
    }
    const ExcursionRecord& active(double t) const { return s->records[active_index(t)]; }
    double log_value(double t) const { return record_log_value(active(t), t); }
};

ComponentTrack make_track(const Spectrum& s) {
    ComponentTrack tr;
    tr.s = &s;
    for (size_t i = 0; i + 1 < s.records.size(); ++i)
        tr.dips.push_back(dip_time(s.records[i], s.records[i + 1]));
    return tr;
}

}  // namespace

double component_log_profile(const Spectrum& s, double t, const Cusp** active) {
    if (s.records.empty()) {
        if (active) *active = nullptr;
        return -kInf;
    }
    ComponentTrack tr = make_track(s);
    const ExcursionRecord& r = tr.active(t);
    if (active) *active = &r.cusp;
    return record_log_value(r, t);
}

JointValue joint_profile(const TupleSpectra& ts, double t) {
    JointValue jv{-kInf, 0, std::nullopt};
    for (size_t i = 0; i < ts.spectra.size(); ++i) {
        const Spectrum& s = ts.spectra[i];
        if (s.records.empty()) continue;
        ComponentTrack tr = make_track(s);
        const ExcursionRecord& r = tr.active(t);
        double v = record_log_value(r, t);
        if (v > jv.log_value) {
            jv.log_value = v;
            jv.argmax = static_cast<int>(i);
            jv.cusp = r.cusp;
        }
    }
    return jv;
}

namespace {

struct TraceBuilder {
    std::vector<ComponentTrack> tracks;
    double t_max;

    int leader_at(double t) const {
        int best = -1;
        double bestv = -kInf;
        for (size_t i = 0; i < tracks.size(); ++i) {
            if (tracks[i].s->records.empty()) continue;
            double v = tracks[i].log_value(t);
            if (v > bestv + 1e-15 || best < 0) {
                bestv = v;
                best = static_cast<int>(i);
            }
        }
        return best;
    }

    // All joint-profile minima (switches and leader dips) in (0, t_max].
    std::vector<MinimaEvent> run() {
        std::vector<MinimaEvent> events;
        if (tracks.empty()) return events;

        std::vector<double> cuts{0.0, t_max};
        for (const auto& tr : tracks) {
            for (double d : tr.dips)
                if (d > 0 && d <= t_max) cuts.push_back(d);
            for (const auto& r : tr.s->records) {
                for (double v : {r.t_enter, r.t_peak, r.t_exit})
                    if (std::isfinite(v) && v > 0 && v <= t_max) cuts.push_back(v);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        cuts.erase(std::unique(cuts.begin(), cuts.end(),
                               [](double a, double b) { return std::abs(a - b) < 1e-13; }),
                   cuts.end());

        int leader = leader_at(cuts.front() + 1e-12);
        if (leader < 0) return events;
        for (size_t ci = 0; ci + 1 < cuts.size(); ++ci) {
            double lo = cuts[ci], hi = cuts[ci + 1];
            double probe = hi - 1e-12 * std::max(1.0, std::abs(hi));
            if (probe <= lo) probe = 0.5 * (lo + hi);
            int next = leader_at(probe);
            if (next >= 0 && next != leader) {
                // bisect the leader crossing inside [lo, hi]
                auto g = [&](double t) {
                    return tracks[static_cast<size_t>(leader)].log_value(t) -
                           tracks[static_cast<size_t>(next)].log_value(t);
                };
                double a = lo, b = probe;
                for (int it = 0; it < 200; ++it) {
                    double mid = 0.5 * (a + b);
                    (g(mid) >= 0 ? a : b) = mid;
                }
                double tstar = 0.5 * (a + b);
                MinimaEvent e;
                e.t = tstar;
                e.log_value = tracks[static_cast<size_t>(next)].log_value(tstar);
                e.from = leader;
                e.to = next;
                const ComponentTrack& ftr = tracks[static_cast<size_t>(leader)];
                size_t fi = ftr.active_index(tstar);
                e.cusp_from_active = ftr.s->records[fi].cusp;
                if (fi + 1 < ftr.s->records.size())
                    e.cusp_from = ftr.s->records[fi + 1].cusp;
                e.cusp_to = tracks[static_cast<size_t>(next)].active(tstar).cusp;
                events.push_back(std::move(e));
                leader = next;
            }
        }

        // Leader dips: a component's own inter-excursion minimum while it
        // stays the joint leader.
        for (size_t i = 0; i < tracks.size(); ++i) {
            const ComponentTrack& tr = tracks[i];
            for (size_t d = 0; d < tr.dips.size(); ++d) {
                double td = tr.dips[d];
                if (td <= 0 || td > t_max) continue;
                int l = leader_at(td);
                if (l != static_cast<int>(i)) continue;
                MinimaEvent e;
                e.t = td;
                e.log_value = tr.log_value(td);
                e.from = static_cast<int>(i);
                e.to = static_cast<int>(i);
                e.cusp_from = tr.s->records[d + 1].cusp;
                e.cusp_to = tr.s->records[d + 1].cusp;
                events.push_back(std::move(e));
            }
        }
        std::sort(events.begin(), events.end(),
                  [](const MinimaEvent& a, const MinimaEvent& b) { return a.t < b.t; });
        return events;
    }
};

TraceBuilder make_builder(const TupleSpectra& ts, double t_max) {
    TraceBuilder tb;
    tb.t_max = t_max;
    for (const auto& s : ts.spectra)
        if (!s.records.empty()) tb.tracks.push_back(make_track(s));
    return tb;
}

}  // namespace

std::vector<MinimaEvent> joint_minima(const TupleSpectra& ts, double t_max) {
    if (!(t_max > 0)) throw std::invalid_argument("joint_minima: t_max > 0");
    return make_builder(ts, t_max).run();
}

MinimaTrace minima_trace(const TupleSpectra& ts, double t_max) {
    MinimaTrace tr;
    for (auto& e : joint_minima(ts, t_max))
        if (e.from != e.to) tr.events.push_back(e);
    return tr;
}

std::string to_string(Classification c) {
    switch (c) {
        case Classification::Escaping: return "escaping";
        case Classification::Recurrent: return "recurrent";
        default: return "undecided";
    }
}

Classification classify(const TupleSpectra& ts, const BigRat& delta, double t_window) {
    if (delta <= 0 || delta > 1) throw std::invalid_argument("classify: delta in (0, 1]");
    double bar = -log_rat(delta);  // log(1/delta)
    auto minima = joint_minima(ts, t_window);
    double half = t_window / 2;
    bool low_first = false, low_last = false, all_last_high = true;
    for (const auto& e : minima) {
        bool low = e.log_value < bar;
        if (e.t <= half && low) low_first = true;
        if (e.t > half) {
            if (low) low_last = true;
            if (e.log_value <= bar) all_last_high = false;
        }
    }
    if (low_first && low_last) return Classification::Recurrent;
    if (all_last_high && !low_last) return Classification::Escaping;
    return Classification::Undecided;
}

std::vector<std::vector<std::string>> trace_rows(const MinimaTrace& trace) {
    std::vector<std::vector<std::string>> rows;
    for (const auto& e : trace.events) {
        rows.push_back({fmt_double(e.t), fmt_double(std::exp(e.log_value)),
                        std::to_string(e.from + 1), std::to_string(e.to + 1),
                        e.cusp_from ? e.cusp_from->str() : "-",
                        e.cusp_to ? e.cusp_to->str() : "-"});
    }
    return rows;
}

BoxCountFit box_count_dimension(const std::vector<std::vector<double>>& points,
                                const std::vector<double>& scales) {
    if (points.size() < 1000)
        throw std::invalid_argument("box_count_dimension: need >= 1000 points");
    if (scales.size() < 4) throw std::invalid_argument("box_count_dimension: need >= 4 scales");
    const size_t dim = points.front().size();
    for (const auto& p : points)
        if (p.size() != dim) throw std::invalid_argument("box_count_dimension: ragged points");

    BoxCountFit fit;
    fit.scales = scales;
    bool degenerate = true;
    for (const auto& p : points)
        if (p != points.front()) { degenerate = false; break; }

    std::vector<double> xs, ys;
    for (double eps : scales) {
        if (!(eps > 0)) throw std::invalid_argument("box_count_dimension: scales > 0");
        std::set<std::vector<int64_t>> cells;
        std::vector<int64_t> key(dim);
        for (const auto& p : points) {
            for (size_t j = 0; j < dim; ++j) key[j] = static_cast<int64_t>(std::floor(p[j] / eps));
            cells.insert(key);
        }
        fit.counts.push_back(cells.size());
        xs.push_back(std::log(1.0 / eps));
        ys.push_back(std::log(static_cast<double>(cells.size())));
    }
    if (degenerate) {
        fit.warnings.push_back("degenerate point set (all points equal), slope 0");
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
    fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    fit.intercept = (sy - fit.slope * sx) / n;
    for (size_t i = 0; i < xs.size(); ++i)
        fit.max_residual =
            std::max(fit.max_residual, std::abs(ys[i] - fit.slope * xs[i] - fit.intercept));
    return fit;
}

}  // namespace cuspflow::product
