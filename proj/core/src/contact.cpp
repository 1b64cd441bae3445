#include "cerg/contact.hpp"

#include <stdexcept>

namespace cerg {

void ContactParams::validate() const {
    if (stiffness <= 0.0) throw std::invalid_argument("ContactParams: stiffness must be > 0");
    if (damping < 0.0) throw std::invalid_argument("ContactParams: damping must be >= 0");
}

Eigen::Vector2d contact_force(double s_val, const Eigen::Vector2d& grad_s,
                              const Eigen::Vector2d& vel, const ContactParams& params) {
    if (s_val <= 0.0) return Eigen::Vector2d::Zero();
    return -params.stiffness * s_val * grad_s - params.damping * s_val * vel;
}

Eigen::VectorXd generalized_contact_torque(const PlantModel& model, const Eigen::VectorXd& q,
                                           const Eigen::Vector2d& force) {
    return model.jacobian(q).transpose() * force;
}

}  // namespace cerg
