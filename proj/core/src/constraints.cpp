#include "cerg/constraints.hpp"

#include <algorithm>
#include <stdexcept>

namespace cerg {

HardConstraint::HardConstraint(HardSpace space_in, Eigen::VectorXd coeff_in, double bound_in,
                               std::string label_in)
    : space(space_in), coeff(std::move(coeff_in)), bound(bound_in), label(std::move(label_in)) {
    if (coeff.size() == 0) throw std::invalid_argument("HardConstraint: empty coefficient vector");
}

double HardConstraint::value(const State& x, const Eigen::VectorXd& u) const {
    switch (space) {
        case HardSpace::Position: return coeff.dot(x.q) - bound;
        case HardSpace::Velocity: return coeff.dot(x.qd) - bound;
        case HardSpace::Input: return coeff.dot(u) - bound;
    }
    return 0.0;
}

double HardConstraint::steady_state(const Eigen::VectorXd& v, const PlantModel& model) const {
    switch (space) {
        case HardSpace::Position: return coeff.dot(v) - bound;
        case HardSpace::Velocity: return -bound;
        case HardSpace::Input: return coeff.dot(model.gravity_vector(v)) - bound;
    }
    return 0.0;
}

Eigen::VectorXd HardConstraint::steady_state_gradient(const Eigen::VectorXd& v,
                                                      const PlantModel& model) const {
    switch (space) {
        case HardSpace::Position: return coeff;
        case HardSpace::Velocity: return Eigen::VectorXd::Zero(v.size());
        case HardSpace::Input: break;
    }
    // d/dv coeff . g(v) by central differences; exact closed forms are not
    // worth carrying for the gravity Jacobian.
    const double h = 1e-6;
    Eigen::VectorXd grad(v.size());
    Eigen::VectorXd vp = v, vm = v;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        vp[i] += h;
        vm[i] -= h;
        grad[i] = (coeff.dot(model.gravity_vector(vp)) - coeff.dot(model.gravity_vector(vm))) /
                  (2.0 * h);
        vp[i] = v[i];
        vm[i] = v[i];
    }
    return grad;
}

SoftConstraint::SoftConstraint(SoftSpace space_in, Eigen::VectorXd normal_in, double offset_in)
    : space(space_in), normal(std::move(normal_in)), offset(offset_in) {
    const double n = normal.norm();
    if (n <= 0.0) throw std::invalid_argument("SoftConstraint: zero normal");
    // Rescale so the stored gradient is unit length; the halfspace is unchanged.
    normal /= n;
    offset /= n;
    if (space == SoftSpace::Task && normal.size() != 2)
        throw std::invalid_argument("SoftConstraint: task-space normal must be planar");
}

double SoftConstraint::value(const PlantModel& model, const Eigen::VectorXd& q) const {
    if (space == SoftSpace::Task) return normal.dot(model.forward_kinematics(q)) - offset;
    return normal.dot(q) - offset;
}

void ConstraintSet::validate() const {
    if (e_max <= 0.0) throw std::invalid_argument("ConstraintSet: e_max must be > 0");
    if (soft.normal.size() == 0) throw std::invalid_argument("ConstraintSet: soft constraint unset");
}

std::vector<double> eval_hard(const ConstraintSet& set, const State& x, const Eigen::VectorXd& u) {
    std::vector<double> out;
    out.reserve(set.hard.size());
    for (const auto& h : set.hard) out.push_back(h.value(x, u));
    return out;
}

double eval_soft(const ConstraintSet& set, const PlantModel& model, const Eigen::VectorXd& q) {
    return set.soft.value(model, q);
}

std::vector<double> compliant_residual(const ConstraintSet& set, const PlantModel& model,
                                       const State& x, const Eigen::VectorXd& u,
                                       double energy_val) {
    std::vector<double> out = eval_hard(set, x, u);
    const double s = eval_soft(set, model, x.q);
    out.push_back(std::min(s, energy_val - set.e_max));
    return out;
}

}  // namespace cerg
