#pragma once

#include <Eigen/Dense>

#include "cerg/constraints.hpp"
#include "cerg/controller.hpp"
#include "cerg/plant.hpp"
#include "cerg/state.hpp"

namespace cerg {

/// Tuning knobs of the reference governor. Defaults are usable for both
/// shipped plants; `delta_s` has no sensible default and must be set from the
/// desired steady-state contact force.
struct GovernorParams {
    // navigation field
    double eta = 0.1;       ///< attraction smoothing radius
    double zeta = 0.2;      ///< hard-constraint influence margin
    double delta_h = 0.05;  ///< hard-constraint static margin (repulsion saturates here)
    double delta_s = 0.0;   ///< target steady-state penetration of the soft surface

    // dynamic safety margin gains
    double kappa_h = 1.0;
    double kappa_s = 1.0;
    double kappa_e = 1.0;

    // prediction and update discretization
    double t_pred = 5.0;
    double dt_pred = 1e-3;
    double dt_gov = 1e-2;
    double delta_max = 1.0;  ///< cap on the applied margin in the reference update

    // prediction settles early once ||q - v|| < settle_eps_q and ||qd|| < settle_eps_v
    double settle_eps_q = 1e-5;
    double settle_eps_v = 1e-5;

    /// Throws std::invalid_argument unless all fields are admissible:
    /// positive margins and steps, zeta > delta_h, dt_pred <= dt_gov,
    /// t_pred >= dt_pred.
    void validate() const;
};

/// Prestabilized trajectory prediction from a frozen reference. Samples are
/// stored column-wise; `settled` marks an early exit at an equilibrium.
struct PredictionTrace {
    Eigen::VectorXd tau;  ///< sample times, tau(0) = 0
    Eigen::MatrixXd q;    ///< n x N predicted positions
    Eigen::MatrixXd qd;   ///< n x N predicted velocities
    Eigen::MatrixXd u;    ///< n x N control inputs along the prediction
    bool settled = false;

    Eigen::Index samples() const { return tau.size(); }
};

/// Raw dynamic safety margin terms before clamping. `composed` follows the
/// min/max combination rule and may be negative.
struct DsmBreakdown {
    double hard = 0.0;            ///< trajectory margin of the hard constraints
    double soft = 0.0;            ///< trajectory margin of the soft constraint
    double energy = 0.0;          ///< instantaneous energy margin
    double soft_or_energy = 0.0;  ///< max(soft, energy)
    double composed = 0.0;        ///< min(hard, soft_or_energy)
};

/// Integrate the contact-free prestabilized closed loop from `x` with the
/// reference frozen at `v`, step dt_pred, horizon t_pred. Exits early once the
/// settle tolerances hold (checked before the first step, so a settled initial
/// state yields a single sample). Throws NumericalFailure if the state leaves
/// the finite range.
PredictionTrace predict(const State& x, const Eigen::VectorXd& v, const PlantModel& model,
                        const GainConfig& gains, const GovernorParams& params);

/// kappa_h * inf over the trace of -h(x_hat, u_hat), taken over all hard
/// constraints and samples. An empty hard set yields delta_max.
double dsm_hard(const PredictionTrace& trace, const ConstraintSet& set,
                const GovernorParams& params);

/// kappa_s * inf over the trace of -s(q_hat).
double dsm_soft(const PredictionTrace& trace, const ConstraintSet& set, const PlantModel& model,
                const GovernorParams& params);

/// kappa_e * (e_max - V(x, v)), evaluated at the current state only. Valid as
/// a margin because V never grows along the contact-free closed loop.
double dsm_energy(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                  const PlantModel& model, const ConstraintSet& set,
                  const GovernorParams& params);

/// Combination rule: the hard margin must hold, and either the soft margin or
/// the energy margin must hold.
DsmBreakdown dsm_compose(double hard, double soft, double energy);

/// Attraction toward r, unit length outside the eta-ball and proportional
/// inside it.
Eigen::VectorXd nav_attraction(const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                               const GovernorParams& params);

/// Sum of repulsion terms away from each hard constraint's steady-state
/// boundary, active within zeta and saturating at delta_h. Throws
/// NumericalFailure if an active constraint has a vanishing gradient.
Eigen::VectorXd nav_hard_repulsion(const Eigen::VectorXd& v, const ConstraintSet& set,
                                   const PlantModel& model, const GovernorParams& params);

/// Repulsion away from the soft surface once the reference penetrates past
/// delta_s, directed along the interior normal (mapped through the
/// pseudoinverse Jacobian for a task-space surface). Throws NumericalFailure
/// at a singular Jacobian.
Eigen::VectorXd nav_soft_repulsion(const Eigen::VectorXd& v, const ConstraintSet& set,
                                   const PlantModel& model, const GovernorParams& params);

/// Full navigation field: attraction plus both repulsion terms.
Eigen::VectorXd nav_field(const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                          const ConstraintSet& set, const PlantModel& model,
                          const GovernorParams& params);

struct GovernorStep {
    Eigen::VectorXd v_next;
    DsmBreakdown dsm;
};

/// One governor tick: predict, compose the margin, evaluate the field, and
/// advance v by dt_gov * clamp(margin, 0, delta_max) * rho. The raw margin is
/// reported unclamped in the breakdown.
GovernorStep governor_step(const State& x, const Eigen::VectorXd& v, const Eigen::VectorXd& r,
                           const ConstraintSet& set, const PlantModel& model,
                           const GainConfig& gains, const GovernorParams& params);

/// Penetration depth delta_s that yields steady-state force f_ss under a
/// proportional gain kp: f_ss / kp. Throws std::invalid_argument unless both
/// are positive.
double penetration_for_force(double f_ss, double kp);

/// Energy stored at steady-state penetration: 0.5 * kp * delta_s^2.
double steady_state_contact_energy(double delta_s, double kp);

/// Equilibrium of the governed reference for a joint-space soft constraint:
/// the projection of r onto normal . v <= offset + delta_s. Task-space
/// surfaces have no closed form here; throws std::invalid_argument.
Eigen::VectorXd steady_state_target(const Eigen::VectorXd& r, const ConstraintSet& set,
                                    const GovernorParams& params);

}  // namespace cerg
