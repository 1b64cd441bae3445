#pragma once

#include <Eigen/Core>

#include "cerg/plant.hpp"

namespace cerg {

/// Unidirectional spring-damper environment.
struct ContactParams {
    double stiffness = 0.0;  ///< K (N/m)
    double damping = 0.0;    ///< B (N s/m)

    void validate() const;
};

/// Penalty force of the unidirectional spring damper,
///   F = -max(0, K s) grad_s - max(0, B s) vel,
/// zero whenever the penetration s_val <= 0. `grad_s` must be the unit outward
/// constraint gradient and `vel` the velocity of the contact point. The
/// damping term acts on the full contact-point velocity scaled by penetration.
Eigen::Vector2d contact_force(double s_val, const Eigen::Vector2d& grad_s,
                              const Eigen::Vector2d& vel, const ContactParams& params);

/// Maps a planar force at the end effector to generalized joint forces,
/// tau = J(q)^T F. Identity mapping for the double integrator.
Eigen::VectorXd generalized_contact_torque(const PlantModel& model, const Eigen::VectorXd& q,
                                           const Eigen::Vector2d& force);

}  // namespace cerg
