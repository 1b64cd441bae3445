#include "cerg/plant.hpp"

#include <cmath>
#include <stdexcept>

namespace cerg {

void PlantModel::check_dim(const Eigen::VectorXd& v, const char* what) const {
    if (v.size() != dof())
        throw std::invalid_argument(std::string(what) + ": expected dimension " +
                                    std::to_string(dof()) + ", got " + std::to_string(v.size()));
}

Eigen::MatrixXd PlantModel::mass_matrix(const Eigen::VectorXd& q) const {
    check_dim(q, "mass_matrix");
    Eigen::MatrixXd m(dof(), dof());
    mass_matrix_into(q, m);
    return m;
}

Eigen::MatrixXd PlantModel::coriolis_matrix(const Eigen::VectorXd& q,
                                            const Eigen::VectorXd& qd) const {
    check_dim(q, "coriolis_matrix");
    check_dim(qd, "coriolis_matrix");
    Eigen::MatrixXd c(dof(), dof());
    coriolis_matrix_into(q, qd, c);
    return c;
}

Eigen::VectorXd PlantModel::gravity_vector(const Eigen::VectorXd& q) const {
    check_dim(q, "gravity_vector");
    Eigen::VectorXd g(dof());
    gravity_vector_into(q, g);
    return g;
}

Eigen::Vector2d PlantModel::forward_kinematics(const Eigen::VectorXd& q) const {
    check_dim(q, "forward_kinematics");
    Eigen::Vector2d p;
    forward_kinematics_into(q, p);
    return p;
}

Eigen::MatrixXd PlantModel::jacobian(const Eigen::VectorXd& q) const {
    check_dim(q, "jacobian");
    Eigen::MatrixXd j(2, dof());
    jacobian_into(q, j);
    return j;
}

StateDerivative PlantModel::dynamics(const State& x, const Eigen::VectorXd& u,
                                     const Eigen::VectorXd& tau_ext) const {
    check_dim(x.q, "dynamics");
    check_dim(u, "dynamics");
    check_dim(tau_ext, "dynamics");
    DynamicsWorkspace ws(dof());
    Eigen::VectorXd qdd(dof());
    forward_acceleration(*this, x, u, tau_ext, ws, qdd);
    return StateDerivative(x.qd, std::move(qdd));
}

void forward_acceleration(const PlantModel& model, const State& x, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& tau_ext, DynamicsWorkspace& ws,
                          Eigen::VectorXd& qdd) {
    model.mass_matrix_into(x.q, ws.m);
    model.coriolis_matrix_into(x.q, x.qd, ws.c);
    model.gravity_vector_into(x.q, ws.g);
    ws.rhs = u + tau_ext - ws.g;
    ws.rhs.noalias() -= ws.c * x.qd;
    if (ws.m.rows() == 2) {
        // Direct solve; a factorization of a 2x2 system dominates the hot loop.
        const double a = ws.m(0, 0), b = ws.m(0, 1), c = ws.m(1, 0), d = ws.m(1, 1);
        const double det = a * d - b * c;
        if (!(std::abs(det) > 1e-12 * std::max({std::abs(a * d), std::abs(b * c), 1e-300}))) {
            throw NumericalFailure("dynamics: mass matrix is singular");
        }
        qdd[0] = (d * ws.rhs[0] - b * ws.rhs[1]) / det;
        qdd[1] = (a * ws.rhs[1] - c * ws.rhs[0]) / det;
    } else {
        ws.ldlt.compute(ws.m);
        if (ws.ldlt.info() != Eigen::Success)
            throw NumericalFailure("dynamics: mass matrix factorization failed");
        qdd = ws.ldlt.solve(ws.rhs);
    }
    if (!qdd.allFinite())
        throw NumericalFailure("dynamics: non-finite acceleration");
}

// ---- double integrator ------------------------------------------------------

void DoubleIntegrator::mass_matrix_into(const Eigen::VectorXd&, Eigen::MatrixXd& m) const {
    m.setIdentity();
}

void DoubleIntegrator::coriolis_matrix_into(const Eigen::VectorXd&, const Eigen::VectorXd&,
                                            Eigen::MatrixXd& c) const {
    c.setZero();
}

void DoubleIntegrator::gravity_vector_into(const Eigen::VectorXd&, Eigen::VectorXd& g) const {
    g.setZero();
}

void DoubleIntegrator::forward_kinematics_into(const Eigen::VectorXd& q, Eigen::Vector2d& p) const {
    p = q.head<2>();
}

void DoubleIntegrator::jacobian_into(const Eigen::VectorXd&, Eigen::MatrixXd& j) const {
    j.setIdentity();
}

// ---- RR arm -----------------------------------------------------------------

void RrArmParams::validate() const {
    if (l1 <= 0.0 || l2 <= 0.0)
        throw std::invalid_argument("RrArmParams: link lengths must be positive");
    if (m1 <= 0.0 || m2 <= 0.0)
        throw std::invalid_argument("RrArmParams: masses must be positive");
}

RrArm::RrArm(RrArmParams params) : params_(params) { params_.validate(); }

void RrArm::mass_matrix_into(const Eigen::VectorXd& q, Eigen::MatrixXd& m) const {
    const auto& p = params_;
    const double c2 = std::cos(q[1]);
    const double l1l2c2 = p.l1 * p.l2 * c2;
    m(0, 0) = p.m1 * p.l1 * p.l1 + p.m2 * (p.l1 * p.l1 + p.l2 * p.l2 + 2.0 * l1l2c2);
    m(0, 1) = p.m2 * (p.l2 * p.l2 + l1l2c2);
    m(1, 0) = m(0, 1);
    m(1, 1) = p.m2 * p.l2 * p.l2;
}

void RrArm::coriolis_matrix_into(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                 Eigen::MatrixXd& c) const {
    // Christoffel symbols of the point-mass M(q); h = m2 l1 l2 sin(q2).
    const double h = params_.m2 * params_.l1 * params_.l2 * std::sin(q[1]);
    c(0, 0) = -h * qd[1];
    c(0, 1) = -h * (qd[0] + qd[1]);
    c(1, 0) = h * qd[0];
    c(1, 1) = 0.0;
}

void RrArm::gravity_vector_into(const Eigen::VectorXd& q, Eigen::VectorXd& g) const {
    const auto& p = params_;
    const double c1 = std::cos(q[0]);
    const double c12 = std::cos(q[0] + q[1]);
    g[0] = (p.m1 + p.m2) * p.g0 * p.l1 * c1 + p.m2 * p.g0 * p.l2 * c12;
    g[1] = p.m2 * p.g0 * p.l2 * c12;
}

void RrArm::forward_kinematics_into(const Eigen::VectorXd& q, Eigen::Vector2d& p) const {
    const double q12 = q[0] + q[1];
    p[0] = params_.l1 * std::cos(q[0]) + params_.l2 * std::cos(q12);
    p[1] = params_.l1 * std::sin(q[0]) + params_.l2 * std::sin(q12);
}

void RrArm::jacobian_into(const Eigen::VectorXd& q, Eigen::MatrixXd& j) const {
    const double q12 = q[0] + q[1];
    const double s1 = std::sin(q[0]), c1 = std::cos(q[0]);
    const double s12 = std::sin(q12), c12 = std::cos(q12);
    j(0, 0) = -params_.l1 * s1 - params_.l2 * s12;
    j(0, 1) = -params_.l2 * s12;
    j(1, 0) = params_.l1 * c1 + params_.l2 * c12;
    j(1, 1) = params_.l2 * c12;
}

}  // namespace cerg
