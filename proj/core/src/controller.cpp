#include "cerg/controller.hpp"

#include <stdexcept>

namespace cerg {

GainConfig GainConfig::joint(Eigen::Index n, double kp_scalar, double kd_scalar) {
    GainConfig g;
    g.mode = ControlMode::Joint;
    g.kp = kp_scalar * Eigen::MatrixXd::Identity(n, n);
    g.kd = kd_scalar * Eigen::MatrixXd::Identity(n, n);
    return g;
}

GainConfig GainConfig::joint(Eigen::MatrixXd kp, Eigen::MatrixXd kd) {
    GainConfig g;
    g.mode = ControlMode::Joint;
    g.kp = std::move(kp);
    g.kd = std::move(kd);
    return g;
}

GainConfig GainConfig::task(double kp_scalar, double kd_scalar) {
    GainConfig g;
    g.mode = ControlMode::Task;
    g.task_kp = kp_scalar;
    g.task_kd = kd_scalar;
    return g;
}

namespace {

bool symmetric_positive_definite(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) return false;
    if (!m.isApprox(m.transpose(), 1e-12)) return false;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    return llt.info() == Eigen::Success;
}

}  // namespace

void GainConfig::validate(Eigen::Index n) const {
    if (mode == ControlMode::Joint) {
        if (kp.rows() != n || kd.rows() != n)
            throw std::invalid_argument("GainConfig: joint gain dimension mismatch");
        if (!symmetric_positive_definite(kp) || !symmetric_positive_definite(kd))
            throw std::invalid_argument("GainConfig: Kp and Kd must be symmetric positive definite");
    } else {
        if (task_kp <= 0.0 || task_kd <= 0.0)
            throw std::invalid_argument("GainConfig: task gains must be positive");
    }
}

Eigen::VectorXd control_joint(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                              const PlantModel& model) {
    Eigen::VectorXd u = model.gravity_vector(x.q);
    u.noalias() -= gains.kp * (x.q - v);
    u.noalias() -= gains.kd * x.qd;
    return u;
}

Eigen::VectorXd control_task(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                             const PlantModel& model) {
    const Eigen::Vector2d err = model.forward_kinematics(x.q) - model.forward_kinematics(v);
    Eigen::VectorXd u = model.gravity_vector(x.q);
    u.noalias() -= gains.task_kp * (model.jacobian(x.q).transpose() * err);
    u -= gains.task_kd * x.qd;
    return u;
}

Eigen::VectorXd control_input(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                              const PlantModel& model) {
    return gains.mode == ControlMode::Joint ? control_joint(x, v, gains, model)
                                            : control_task(x, v, gains, model);
}

void control_input_into(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
                        const PlantModel& model, DynamicsWorkspace& ws, Eigen::VectorXd& u) {
    model.gravity_vector_into(x.q, ws.g);
    if (gains.mode == ControlMode::Joint) {
        u = ws.g;
        u.noalias() -= gains.kp * (x.q - v);
        u.noalias() -= gains.kd * x.qd;
    } else {
        model.forward_kinematics_into(x.q, ws.p);
        model.forward_kinematics_into(v, ws.fv);
        model.jacobian_into(x.q, ws.jac);
        u = ws.g;
        u.noalias() -= gains.task_kp * (ws.jac.transpose() * (ws.p - ws.fv));
        u -= gains.task_kd * x.qd;
    }
}

double energy(const State& x, const Eigen::VectorXd& v, const GainConfig& gains,
              const PlantModel& model) {
    const double kinetic = 0.5 * x.qd.dot(model.mass_matrix(x.q) * x.qd);
    if (gains.mode == ControlMode::Joint) {
        const Eigen::VectorXd e = x.q - v;
        return kinetic + 0.5 * e.dot(gains.kp * e);
    }
    const Eigen::Vector2d e = model.forward_kinematics(x.q) - model.forward_kinematics(v);
    return kinetic + 0.5 * gains.task_kp * e.squaredNorm();
}

double energy_decay_rate(const State& x, const GainConfig& gains) {
    if (gains.mode == ControlMode::Joint) return -x.qd.dot(gains.kd * x.qd);
    return -gains.task_kd * x.qd.squaredNorm();
}

}  // namespace cerg
