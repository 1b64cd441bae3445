#include "cerg/sim.hpp"

#include <cmath>
#include <stdexcept>

#include "cerg/integrate.hpp"

namespace cerg {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

const char* phase_name(Phase p) {
    switch (p) {
        case Phase::FreeMotion:
            return "free-motion";
        case Phase::ApproachingContact:
            return "approaching-contact";
        case Phase::Contact:
            return "contact";
    }
    return "unknown";
}

void Scenario::validate() const {
    require(plant != nullptr, "scenario: no plant configured");
    const Eigen::Index n = plant->dof();
    // the contact probe and the trace schema are planar
    require(n == 2, "scenario: closed-loop simulation supports 2-dof plants only");
    require(x0.dof() == n, "scenario: initial state dimension does not match the plant");
    require(x0.finite(), "scenario: initial state must be finite");
    require(reference.size() == n, "scenario: reference dimension does not match the plant");
    require(reference.allFinite(), "scenario: reference must be finite");
    require(duration >= 0.0, "scenario: duration must be nonnegative");
    require(dt_sim > 0.0, "scenario: dt_sim must be positive");

    gains.validate(n);
    contact.validate();
    governor.validate();
    constraints.validate();

    require(dt_sim <= governor.dt_gov + 1e-15, "scenario: dt_sim must not exceed dt_gov");
    const double ratio = governor.dt_gov / dt_sim;
    require(std::abs(ratio - std::round(ratio)) < 1e-6 * ratio,
            "scenario: dt_gov must be an integer multiple of dt_sim");

    const Eigen::Index soft_dim = constraints.soft.space == SoftSpace::Joint ? n : 2;
    require(constraints.soft.normal.size() == soft_dim,
            "scenario: soft constraint dimension does not match its space");
    for (const HardConstraint& h : constraints.hard) {
        require(h.coeff.size() == n, "scenario: hard constraint dimension does not match the plant");
    }
}

namespace {

struct ContactEval {
    double s = 0.0;
    Eigen::Vector2d logged = Eigen::Vector2d::Zero();
    Eigen::VectorXd tau;
};

// Evaluates the soft constraint and the resulting contact wrench at one state.
// Task surfaces act at the end effector and map back through J^T; joint
// surfaces act directly as a generalized force.
class ContactProbe {
  public:
    ContactProbe(const PlantModel& model, const SoftConstraint& soft, const ContactParams& params)
        : model_(model), soft_(soft), params_(params), jac_(2, model.dof()) {}

    void eval(const State& x, ContactEval& out) {
        if (soft_.space == SoftSpace::Joint) {
            out.s = soft_.normal.dot(x.q) - soft_.offset;
            out.tau = contact_force(out.s, soft_.normal, x.qd, params_);
            const Eigen::Index m = std::min<Eigen::Index>(2, out.tau.size());
            out.logged.setZero();
            out.logged.head(m) = out.tau.head(m);
        } else {
            model_.forward_kinematics_into(x.q, p_);
            model_.jacobian_into(x.q, jac_);
            pd_.noalias() = jac_ * x.qd;
            out.s = soft_.normal.dot(p_) - soft_.offset;
            out.logged = contact_force(out.s, soft_.normal, pd_, params_);
            out.tau.noalias() = jac_.transpose() * out.logged;
        }
    }

  private:
    const PlantModel& model_;
    const SoftConstraint& soft_;
    const ContactParams& params_;
    Eigen::Vector2d p_, pd_;
    Eigen::MatrixXd jac_;
};

void truncate(TraceLog& log, Eigen::Index count) {
    log.t.conservativeResize(count);
    log.q.conservativeResize(Eigen::NoChange, count);
    log.qd.conservativeResize(Eigen::NoChange, count);
    log.v.conservativeResize(Eigen::NoChange, count);
    log.u.conservativeResize(Eigen::NoChange, count);
    log.energy.conservativeResize(count);
    log.s.conservativeResize(count);
    log.dsm_h.conservativeResize(count);
    log.dsm_s.conservativeResize(count);
    log.dsm_e.conservativeResize(count);
    log.dsm.conservativeResize(count);
    log.force.conservativeResize(Eigen::NoChange, count);
}

void assign_phases(TraceLog& log, const ConstraintSet& set) {
    const std::vector<PhaseEvent> events = detect_phases(log, set);
    log.phase.assign(static_cast<std::size_t>(log.samples()), Phase::FreeMotion);
    std::size_t e = 0;
    Phase cur = Phase::FreeMotion;
    for (Eigen::Index k = 0; k < log.samples(); ++k) {
        while (e < events.size() && events[e].t <= log.t(k) + 1e-12) {
            cur = events[e].phase;
            ++e;
        }
        log.phase[static_cast<std::size_t>(k)] = cur;
    }
}

}  // namespace

TraceLog run_closed_loop(const Scenario& scenario) {
    scenario.validate();
    const PlantModel& model = *scenario.plant;
    const Eigen::Index n = model.dof();

    const auto steps = static_cast<Eigen::Index>(std::llround(scenario.duration / scenario.dt_sim));
    const auto gov_every =
        static_cast<Eigen::Index>(std::llround(scenario.governor.dt_gov / scenario.dt_sim));

    TraceLog log;
    log.t.resize(steps + 1);
    log.q.resize(n, steps + 1);
    log.qd.resize(n, steps + 1);
    log.v.resize(n, steps + 1);
    log.u.resize(n, steps + 1);
    log.energy.resize(steps + 1);
    log.s.resize(steps + 1);
    log.dsm_h.resize(steps + 1);
    log.dsm_s.resize(steps + 1);
    log.dsm_e.resize(steps + 1);
    log.dsm.resize(steps + 1);
    log.force.resize(2, steps + 1);

    State x = scenario.x0;
    Eigen::VectorXd v_applied = scenario.governor_enabled ? scenario.x0.q : scenario.reference;
    Eigen::VectorXd v_pending = v_applied;
    DsmBreakdown held{};

    DynamicsWorkspace ws(n);
    Rk4Scratch scratch(n);
    ContactProbe probe(model, scenario.constraints.soft, scenario.contact);
    ContactEval ct;
    ct.tau.resize(n);
    Eigen::VectorXd u_log(n);

    auto deriv = [&](const State& y, State& dy) {
        dy.q = y.qd;
        control_input_into(y, v_applied, scenario.gains, model, ws, ws.u);
        probe.eval(y, ct);
        forward_acceleration(model, y, ws.u, ct.tau, ws, dy.qd);
    };

    Eigen::Index count = 0;
    try {
        for (Eigen::Index k = 0;; ++k) {
            if (!x.finite()) {
                throw NumericalFailure("state left the finite range");
            }
            if (scenario.governor_enabled && k % gov_every == 0) {
                if (k > 0) {
                    v_applied = v_pending;
                }
                GovernorStep gs = governor_step(x, v_applied, scenario.reference,
                                                scenario.constraints, model, scenario.gains,
                                                scenario.governor);
                v_pending = std::move(gs.v_next);
                held = gs.dsm;
            }

            probe.eval(x, ct);
            control_input_into(x, v_applied, scenario.gains, model, ws, u_log);
            log.t(k) = static_cast<double>(k) * scenario.dt_sim;
            log.q.col(k) = x.q;
            log.qd.col(k) = x.qd;
            log.v.col(k) = v_applied;
            log.u.col(k) = u_log;
            log.energy(k) = energy(x, v_applied, scenario.gains, model);
            log.s(k) = ct.s;
            log.dsm_h(k) = held.hard;
            log.dsm_s(k) = held.soft;
            log.dsm_e(k) = held.energy;
            log.dsm(k) = held.composed;
            log.force.col(k) = ct.logged;
            count = k + 1;

            if (k == steps) {
                break;
            }
            rk4_step(deriv, x, scenario.dt_sim, scratch);
        }
    } catch (const NumericalFailure& failure) {
        log.aborted = true;
        log.error = failure.what();
    }

    truncate(log, count);
    assign_phases(log, scenario.constraints);
    return log;
}

std::vector<PhaseEvent> detect_phases(const TraceLog& trace, const ConstraintSet& set) {
    if (trace.samples() == 0) {
        throw std::invalid_argument("detect_phases: empty trace");
    }

    Eigen::Index contact_at = -1;
    for (Eigen::Index k = 0; k < trace.samples(); ++k) {
        if (trace.s(k) >= 0.0) {
            contact_at = k;
            break;
        }
    }

    std::vector<PhaseEvent> events;
    if (contact_at < 0) {
        events.push_back({Phase::FreeMotion, trace.t(0)});
        return events;
    }

    // The approaching window is the maximal run of samples directly before
    // contact over which the energy bound already holds.
    Eigen::Index approach_at = contact_at;
    while (approach_at > 0 && trace.energy(approach_at - 1) <= set.e_max) {
        --approach_at;
    }

    if (approach_at > 0) {
        events.push_back({Phase::FreeMotion, trace.t(0)});
    }
    if (approach_at < contact_at) {
        events.push_back({Phase::ApproachingContact, trace.t(approach_at)});
    } else if (approach_at == contact_at && contact_at > 0) {
        // No admissible-energy window: free motion runs straight into contact.
    }
    events.push_back({Phase::Contact, trace.t(contact_at)});
    return events;
}

SteadyStateMetrics steady_state_metrics(const TraceLog& trace, double window) {
    if (trace.samples() == 0) {
        throw std::invalid_argument("steady_state_metrics: empty trace");
    }
    const double span = trace.t(trace.samples() - 1) - trace.t(0);
    if (!(window > 0.0) || window >= span) {
        throw std::invalid_argument("steady_state_metrics: window must lie inside the trace span");
    }

    const double t_from = trace.t(trace.samples() - 1) - window;
    Eigen::Index first = trace.samples() - 1;
    while (first > 0 && trace.t(first - 1) >= t_from) {
        --first;
    }

    SteadyStateMetrics out;
    out.v_final = trace.v.col(trace.samples() - 1);
    out.q_final = trace.q.col(trace.samples() - 1);
    const Eigen::Index m = trace.samples() - first;
    out.force_mean = trace.force.rightCols(m).colwise().norm().mean();
    out.energy_mean = trace.energy.tail(m).mean();
    return out;
}

}  // namespace cerg
