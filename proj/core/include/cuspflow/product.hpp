#pragma once

#include "cuspflow/excursion.hpp"

#include <optional>
#include <string>
#include <vector>

namespace cuspflow::product {

/// k directions flowing under the same diagonal time; one spectrum each.
struct DirectionTuple {
    std::vector<excursion::Direction> components;
    BigRat theta{1};
    BigInt h_max{BigInt(1) << 40};

    size_t k() const { return components.size(); }
};

/// Per-component spectra, precomputed once.
struct TupleSpectra {
    std::vector<excursion::Spectrum> spectra;
};

TupleSpectra compute_spectra(const DirectionTuple& xs);

/// Joint excursion height W at time t: max over components of the component
/// profile, with the active cusp per component; ties broken by lowest index.
struct JointValue {
    double log_value;
    int argmax;  // 0-based component
    std::optional<lattice::Cusp> cusp;
};
JointValue joint_profile(const TupleSpectra& ts, double t);

/// Log of component i's profile at time t (max over that component's records).
double component_log_profile(const excursion::Spectrum& s, double t,
                             const lattice::Cusp** active = nullptr);

/// One leadership change of the joint profile.  from == to marks a dip of the
/// leading component between two of its own excursions.
struct MinimaEvent {
    double t;
    double log_value;
    int from = 0, to = 0;
    std::optional<lattice::Cusp> cusp_from;         // next cusp of the outgoing component
    std::optional<lattice::Cusp> cusp_from_active;  // its active cusp at the event
    std::optional<lattice::Cusp> cusp_to;           // active cusp of the incoming component
};

struct MinimaTrace {
    std::vector<MinimaEvent> events;  // switch events only (from != to)
};

/// All argmax switch events in (0, t_max].
MinimaTrace minima_trace(const TupleSpectra& ts, double t_max);

/// Every local minimum of the joint profile (switches and leader dips); the
/// classifier's raw material.
std::vector<MinimaEvent> joint_minima(const TupleSpectra& ts, double t_max);

enum class Classification { Escaping, Recurrent, Undecided };
std::string to_string(Classification c);

/// Finite-horizon surrogate of divergence: escaping when every joint-profile
/// minimum in the last half of the window exceeds 1/delta, recurrent when a
/// minimum below 1/delta occurs in both halves.  Never a claim about the
/// true infinite-time behavior.
Classification classify(const TupleSpectra& ts, const BigRat& delta, double t_window);

/// CSV rows (t, value, from, to, cusp_from, cusp_to).
std::vector<std::vector<std::string>> trace_rows(const MinimaTrace& trace);

// -- box-counting dimension ---------------------------------------------------

struct BoxCountFit {
    double slope = 0;
    double intercept = 0;
    double max_residual = 0;
    std::vector<double> scales;
    std::vector<size_t> counts;
    std::vector<std::string> warnings;
};

/// Least-squares slope of log N(eps) against log(1/eps) on a geometric grid
/// of scales.  Points are rows of coordinates (dimension = row width).
BoxCountFit box_count_dimension(const std::vector<std::vector<double>>& points,
                                const std::vector<double>& scales);

}  // namespace cuspflow::product
