#include "cerg/governor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "cerg/integrate.hpp"

namespace cerg {

namespace {

void require(bool ok, const char* msg) {
    if (!ok) throw std::invalid_argument(msg);
}

}  // namespace

void GovernorParams::validate() const {
    require(eta > 0.0, "governor: eta must be positive");
    require(zeta > 0.0, "governor: zeta must be positive");
    require(delta_h > 0.0, "governor: delta_h must be positive");
    require(zeta > delta_h, "governor: zeta must exceed delta_h");
    require(delta_s > 0.0, "governor: delta_s must be positive");
    require(kappa_h > 0.0 && kappa_s > 0.0 && kappa_e > 0.0,
            "governor: kappa gains must be positive");
    require(t_pred > 0.0 && dt_pred > 0.0,
            "governor: prediction horizon and step must be positive");
    require(t_pred >= dt_pred, "governor: t_pred must cover at least one prediction step");
    require(dt_gov > 0.0, "governor: dt_gov must be positive");
    require(dt_pred <= dt_gov, "governor: dt_pred must not exceed dt_gov");
    require(delta_max > 0.0, "governor: delta_max must be positive");
    require(settle_eps_q > 0.0 && settle_eps_v > 0.0,
            "governor: settle tolerances must be positive");
}

PredictionTrace predict(const State& x, const Eigen::VectorXd& v, const PlantModel& model,
                        const GainConfig& gains, const GovernorParams& params) {
    const Eigen::Index n = model.dof();
    if (x.dof() != n || v.size() != n) {
        throw std::invalid_argument("predict: state/reference dimension does not match the plant");
    }

    const auto max_steps = static_cast<Eigen::Index>(std::llround(params.t_pred / params.dt_pred));
    PredictionTrace trace;
    trace.tau.resize(max_steps + 1);
    trace.q.resize(n, max_steps + 1);
    trace.qd.resize(n, max_steps + 1);
    trace.u.resize(n, max_steps + 1);

    DynamicsWorkspace ws(n);
    Rk4Scratch scratch(n);
    State cur = x;
    Eigen::VectorXd u_sample(n);
    const Eigen::VectorXd tau_ext = Eigen::VectorXd::Zero(n);

    // Contact-free prediction: the applied reference stays frozen at v.
    auto deriv = [&](const State& y, State& dy) {
        dy.q = y.qd;
        control_input_into(y, v, gains, model, ws, ws.u);
        forward_acceleration(model, y, ws.u, tau_ext, ws, dy.qd);
    };

    Eigen::Index count = 0;
    for (Eigen::Index k = 0;; ++k) {
        if (!cur.finite()) {
            throw NumericalFailure("prediction diverged to a non-finite state");
        }
        control_input_into(cur, v, gains, model, ws, u_sample);
        trace.tau(k) = static_cast<double>(k) * params.dt_pred;
        trace.q.col(k) = cur.q;
        trace.qd.col(k) = cur.qd;
        trace.u.col(k) = u_sample;
        count = k + 1;
        if ((cur.q - v).norm() < params.settle_eps_q && cur.qd.norm() < params.settle_eps_v) {
            trace.settled = true;
            break;
        }
        if (k == max_steps) {
            break;
        }
        // The logged control doubles as stage one of the step.
        scratch.k1.q = cur.qd;
        forward_acceleration(model, cur, u_sample, tau_ext, ws, scratch.k1.qd);
        rk4_step_from_k1(deriv, cur, params.dt_pred, scratch);
    }

    trace.tau.conservativeResize(count);
    trace.q.conservativeResize(Eigen::NoChange, count);
    trace.qd.conservativeResize(Eigen::NoChange, count);
    trace.u.conservativeResize(Eigen::NoChange, count);
    return trace;
}

double dsm_hard(const PredictionTrace& trace, const ConstraintSet& set,
                const GovernorParams& params) {
    if (set.hard.empty()) {
        return params.delta_max;
    }
    double worst = -std::numeric_limits<double>::infinity();
    Eigen::RowVectorXd vals;
    for (const HardConstraint& h : set.hard) {
        switch (h.space) {
            case HardSpace::Position:
                vals.noalias() = h.coeff.transpose() * trace.q;
                break;
            case HardSpace::Velocity:
                vals.noalias() = h.coeff.transpose() * trace.qd;
                break;
            case HardSpace::Input:
                vals.noalias() = h.coeff.transpose() * trace.u;
                break;
        }
        worst = std::max(worst, vals.maxCoeff() - h.bound);
    }
    return params.kappa_h * (-worst);
}

double dsm_soft(const PredictionTrace& trace, const ConstraintSet& set, const PlantModel& model,
                const GovernorParams& params) {
    double s_max = -std::numeric_limits<double>::infinity();
    if (set.soft.space == SoftSpace::Joint) {
        const Eigen::RowVectorXd vals = set.soft.normal.transpose() * trace.q;
        s_max = vals.maxCoeff() - set.soft.offset;
    } else {
        Eigen::Vector2d p;
        Eigen::VectorXd qbuf(trace.q.rows());
        for (Eigen::Index k = 0; k < trace.samples(); ++k) {
            qbuf = trace.q.col(k);
            model.forward_kinematics_into(qbuf, p);
            s_max = std::max(s_max, set.soft.normal.dot(p) - set.soft.offset);
        }
    }
    return params.kappa_s * (-s_max);
}

double dsm_energy(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                  const PlantModel& model, const ConstraintSet& set,
                  const GovernorParams& params) {
    return params.kappa_e * (set.e_max - energy(x, v, gains, model));
}

DsmBreakdown dsm_compose(double hard, double soft, double energy) {
    DsmBreakdown out;
    out.hard = hard;
    out.soft = soft;
    out.energy = energy;
    out.soft_or_energy = std::max(soft, energy);
    out.composed = std::min(hard, out.soft_or_energy);
    return out;
}

Eigen::VectorXd nav_attraction(const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                               const GovernorParams& params) {
    if (v.size() != r.size()) {
        throw std::invalid_argument("nav_attraction: reference dimensions disagree");
    }
    Eigen::VectorXd d = r - v;
    return d / std::max(d.norm(), params.eta);
}

Eigen::VectorXd nav_hard_repulsion(const Eigen::VectorXd& v, const ConstraintSet& set,
                                   const PlantModel& model, const GovernorParams& params) {
    Eigen::VectorXd rho = Eigen::VectorXd::Zero(v.size());
    for (const HardConstraint& h : set.hard) {
        const double h_ss = h.steady_state(v, model);
        const double scale = std::max((params.zeta + h_ss) / (params.zeta - params.delta_h), 0.0);
        if (scale <= 0.0) {
            continue;
        }
        const Eigen::VectorXd grad = h.steady_state_gradient(v, model);
        const double norm = grad.norm();
        if (norm <= 1e-12) {
            std::ostringstream msg;
            msg << "hard repulsion undefined for \"" << h.label
                << "\": vanishing steady-state gradient at an active constraint";
            throw NumericalFailure(msg.str());
        }
        rho -= (scale / norm) * grad;
    }
    return rho;
}

Eigen::VectorXd nav_soft_repulsion(const Eigen::VectorXd& v, const ConstraintSet& set,
                                   const PlantModel& model, const GovernorParams& params) {
    const Eigen::Index n = v.size();
    const double sv = set.soft.value(model, v);
    if (sv <= 0.0) {
        return Eigen::VectorXd::Zero(n);
    }
    const double scale = sv / params.delta_s;

    Eigen::VectorXd dir(n);
    if (set.soft.space == SoftSpace::Joint) {
        dir = -set.soft.normal;  // unit by construction
    } else {
        Eigen::MatrixXd jac(2, n);
        model.jacobian_into(v, jac);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const double sv_max = svd.singularValues().maxCoeff();
        const double sv_min = svd.singularValues().minCoeff();
        if (!(sv_min > 1e-8 * std::max(sv_max, 1.0))) {
            std::ostringstream msg;
            msg << "soft repulsion undefined: singular Jacobian at reference ["
                << v.transpose() << "]";
            throw NumericalFailure(msg.str());
        }
        const Eigen::VectorXd interior = -set.soft.normal;
        dir = svd.solve(interior);
        const double dn = dir.norm();
        if (dn <= 1e-12) {
            throw NumericalFailure(
                "soft repulsion undefined: surface normal maps into the Jacobian null space");
        }
        dir /= dn;
    }
    return scale * dir;
}

Eigen::VectorXd nav_field(const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                          const ConstraintSet& set, const PlantModel& model,
                          const GovernorParams& params) {
    return nav_attraction(v, r, params) + nav_hard_repulsion(v, set, model, params) +
           nav_soft_repulsion(v, set, model, params);
}

GovernorStep governor_step(const State& x, const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                           const ConstraintSet& set, const PlantModel& model,
                           const GainConfig& gains, const GovernorParams& params) {
    const PredictionTrace trace = predict(x, v, model, gains, params);
    GovernorStep out;
    out.dsm = dsm_compose(dsm_hard(trace, set, params), dsm_soft(trace, set, model, params),
                          dsm_energy(x, v, gains, model, set, params));
    const Eigen::VectorXd rho = nav_field(v, r, set, model, params);
    const double applied = std::clamp(out.dsm.composed, 0.0, params.delta_max);
    out.v_next = v + (params.dt_gov * applied) * rho;
    return out;
}

double penetration_for_force(double f_ss, double kp) {
    if (!(f_ss > 0.0)) {
        throw std::invalid_argument("penetration_for_force: steady-state force must be positive");
    }
    if (!(kp > 0.0)) {
        throw std::invalid_argument("penetration_for_force: proportional gain must be positive");
    }
    return f_ss / kp;
}

double steady_state_contact_energy(double delta_s, double kp) {
    if (!(delta_s > 0.0) || !(kp > 0.0)) {
        throw std::invalid_argument(
            "steady_state_contact_energy: penetration and gain must be positive");
    }
    return 0.5 * kp * delta_s * delta_s;
}

Eigen::VectorXd steady_state_target(const Eigen::VectorXd& r, const ConstraintSet& set,
                                    const GovernorParams& params) {
    if (set.soft.space != SoftSpace::Joint) {
        throw std::invalid_argument(
            "steady_state_target: closed form exists only for joint-space surfaces");
    }
    const double excess = set.soft.normal.dot(r) - set.soft.offset - params.delta_s;
    if (excess <= 0.0) {
        return r;
    }
    return r - excess * set.soft.normal;
}

}  // namespace cerg
