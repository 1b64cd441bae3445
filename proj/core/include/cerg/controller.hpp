#pragma once

#include <Eigen/Core>

#include "cerg/plant.hpp"
#include "cerg/state.hpp"

namespace cerg {

enum class ControlMode { Joint, Task };

/// Gains of the constraint-agnostic prestabilizer.
///
/// Joint mode:  u = -Kp (q - v) - Kd qd + g(q)
/// Task mode:   u = -kp J(q)^T (f(q) - f(v)) - kd qd + g(q)
///
/// v is a joint-space reference in both modes; task mode maps it through the
/// forward kinematics.
struct GainConfig {
    ControlMode mode = ControlMode::Joint;
    Eigen::MatrixXd kp;  ///< joint stiffness, n x n SPD
    Eigen::MatrixXd kd;  ///< joint damping, n x n SPD
    double task_kp = 0.0;
    double task_kd = 0.0;

    /// Scalar joint gains expand to kp * I, kd * I.
    static GainConfig joint(Eigen::Index n, double kp_scalar, double kd_scalar);
    static GainConfig joint(Eigen::MatrixXd kp, Eigen::MatrixXd kd);
    static GainConfig task(double kp_scalar, double kd_scalar);

    void validate(Eigen::Index n) const;
};

/// Joint-space PD with gravity compensation.
Eigen::VectorXd control_joint(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                              const PlantModel& model);

/// End-effector PD with gravity compensation; v stays a joint-space reference.
Eigen::VectorXd control_task(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                             const PlantModel& model);

/// Dispatches on gains.mode.
Eigen::VectorXd control_input(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                              const PlantModel& model);

/// Allocation-free control evaluation for the integration loops.
void control_input_into(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                        const PlantModel& model, DynamicsWorkspace& ws, Eigen::VectorXd& u);

/// Total energy of the prestabilized system: real kinetic energy plus the
/// virtual potential stored in the control spring,
///   joint:  V = 1/2 qd^T M qd + 1/2 (q - v)^T Kp (q - v)
///   task:   V = 1/2 qd^T M qd + 1/2 kp |f(q) - f(v)|^2
/// Nonnegative; zero exactly at the equilibrium of the active mode.
double energy(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
              const PlantModel& model);

/// Analytic rate of change of `energy` along the closed loop with constant v
/// and no external force: -qd^T Kd qd (joint), -kd |qd|^2 (task).
double energy_decay_rate(const State& x, const GainConfig& gains);

}  // namespace cerg
