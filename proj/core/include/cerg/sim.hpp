#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "cerg/constraints.hpp"
#include "cerg/contact.hpp"
#include "cerg/controller.hpp"
#include "cerg/governor.hpp"
#include "cerg/plant.hpp"
#include "cerg/state.hpp"

namespace cerg {

enum class Phase { FreeMotion, ApproachingContact, Contact };

/// Stable label used in trace files and summaries.
const char* phase_name(Phase p);

/// Complete description of one closed-loop run.
struct Scenario {
    std::shared_ptr<const PlantModel> plant;
    GainConfig gains;
    ConstraintSet constraints;
    ContactParams contact;
    GovernorParams governor;
    bool governor_enabled = true;  ///< false runs the baseline with v held at the raw reference
    State x0 = State::zero(1);
    Eigen::VectorXd reference;
    double duration = 0.0;
    double dt_sim = 1e-3;

    /// Throws std::invalid_argument on dimension mismatches, inadmissible
    /// steps (dt_sim must divide dt_gov), or invalid sub-configurations.
    void validate() const;
};

/// Column-per-sample record of a run. All matrices have one column per logged
/// step; `force` holds the contact force (task-space for task surfaces,
/// generalized for joint-space surfaces, first two components).
struct TraceLog {
    Eigen::VectorXd t;
    Eigen::MatrixXd q, qd, v, u;            // dof x N
    Eigen::VectorXd energy;                 // V(x, v)
    Eigen::VectorXd s;                      // soft constraint value at q
    Eigen::VectorXd dsm_h, dsm_s, dsm_e, dsm;  // raw margins, zero-order held between ticks
    Eigen::Matrix2Xd force;
    std::vector<Phase> phase;
    bool aborted = false;
    std::string error;

    Eigen::Index samples() const { return t.size(); }
};

struct PhaseEvent {
    Phase phase;
    double t = 0.0;  ///< entry time
};

/// Integrate the full loop: plant + controller + contact, with the governor
/// updating the applied reference every dt_gov (v starts at q(0); when
/// disabled, v is the raw reference throughout and margin columns stay zero).
/// A non-finite state or a failed governor tick aborts with a partial trace
/// and the error recorded on the log rather than throwing.
TraceLog run_closed_loop(const Scenario& scenario);

/// Segment a trace into at most three phases: free motion, then (only when
/// contact eventually occurs) an approaching-contact window over which the
/// energy bound already holds, then contact from the first sample with s >= 0.
std::vector<PhaseEvent> detect_phases(const TraceLog& trace, const ConstraintSet& set);

struct SteadyStateMetrics {
    Eigen::VectorXd v_final;
    Eigen::VectorXd q_final;
    double force_mean = 0.0;   ///< mean contact force magnitude over the window
    double energy_mean = 0.0;  ///< mean V over the window
};

/// Averages over the trailing `window` seconds of the trace. Throws
/// std::invalid_argument unless 0 < window < trace span.
SteadyStateMetrics steady_state_metrics(const TraceLog& trace, double window);

}  // namespace cerg
