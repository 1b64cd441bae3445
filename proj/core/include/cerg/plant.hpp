#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <memory>

#include "cerg/state.hpp"

namespace cerg {

/// Rigid-body plant with Euler-Lagrange structure
///     M(q) qdd + C(q, qd) qd + g(q) = u + tau_ext.
///
/// The Coriolis factorization follows the Christoffel construction, so
/// Mdot - 2C is skew symmetric. Forward kinematics map the configuration to a
/// planar point p = f(q) with Jacobian J(q) = df/dq (2 x n).
class PlantModel {
  public:
    virtual ~PlantModel() = default;

    virtual Eigen::Index dof() const = 0;

    Eigen::MatrixXd mass_matrix(const Eigen::VectorXd& q) const;
    Eigen::MatrixXd coriolis_matrix(const Eigen::VectorXd& q, const Eigen::VectorXd& qd) const;
    Eigen::VectorXd gravity_vector(const Eigen::VectorXd& q) const;
    Eigen::Vector2d forward_kinematics(const Eigen::VectorXd& q) const;
    Eigen::MatrixXd jacobian(const Eigen::VectorXd& q) const;

    /// Forward dynamics: returns [qd; M^{-1}(u + tau_ext - C qd - g)].
    StateDerivative dynamics(const State& x, const Eigen::VectorXd& u,
                             const Eigen::VectorXd& tau_ext) const;

    /// Allocation-free variants used by the integration loops. Outputs must be
    /// pre-sized (n x n resp. n, or 2 x n for the Jacobian).
    virtual void mass_matrix_into(const Eigen::VectorXd& q, Eigen::MatrixXd& m) const = 0;
    virtual void coriolis_matrix_into(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                                      Eigen::MatrixXd& c) const = 0;
    virtual void gravity_vector_into(const Eigen::VectorXd& q, Eigen::VectorXd& g) const = 0;
    virtual void forward_kinematics_into(const Eigen::VectorXd& q, Eigen::Vector2d& p) const = 0;
    virtual void jacobian_into(const Eigen::VectorXd& q, Eigen::MatrixXd& j) const = 0;

  protected:
    void check_dim(const Eigen::VectorXd& v, const char* what) const;
};

/// Scratch buffers for repeated forward-dynamics evaluations. Constructing one
/// per integration loop keeps the hot path free of heap traffic.
struct DynamicsWorkspace {
    Eigen::MatrixXd m, c, jac;
    Eigen::VectorXd g, u, tau, rhs;
    Eigen::Vector2d p, pd, fv;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;

    explicit DynamicsWorkspace(Eigen::Index n)
        : m(n, n), c(n, n), jac(2, n), g(n), u(n), tau(n), rhs(n), ldlt(n) {}
};

/// qdd = M^{-1}(u + tau_ext - C qd - g), written into `qdd` using `ws`.
void forward_acceleration(const PlantModel& model, const State& x, const Eigen::VectorXd& u,
                          const Eigen::VectorXd& tau_ext, DynamicsWorkspace& ws,
                          Eigen::VectorXd& qdd);

/// Planar double integrator: unit masses, M = I, C = 0, g = 0, f(q) = q.
class DoubleIntegrator final : public PlantModel {
  public:
    Eigen::Index dof() const override { return 2; }

    void mass_matrix_into(const Eigen::VectorXd& q, Eigen::MatrixXd& m) const override;
    void coriolis_matrix_into(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                              Eigen::MatrixXd& c) const override;
    void gravity_vector_into(const Eigen::VectorXd& q, Eigen::VectorXd& g) const override;
    void forward_kinematics_into(const Eigen::VectorXd& q, Eigen::Vector2d& p) const override;
    void jacobian_into(const Eigen::VectorXd& q, Eigen::MatrixXd& j) const override;
};

/// Parameters of the planar two-link (RR) arm. Point masses sit at the link
/// tips and gravity acts along -y in the arm plane.
struct RrArmParams {
    double l1 = 1.0;   ///< first link length (m)
    double l2 = 0.5;   ///< second link length (m)
    double m1 = 2.0;   ///< mass at first link tip (kg)
    double m2 = 1.5;   ///< mass at second link tip (kg)
    double g0 = 9.81;  ///< gravity acceleration (m/s^2); 0 gives a horizontal-plane arm

    void validate() const;
};

/// Two-link planar arm with the closed forms that follow from the point-mass
/// Lagrangian (validated against a finite-difference oracle in the tests).
class RrArm final : public PlantModel {
  public:
    RrArm() : RrArm(RrArmParams{}) {}
    explicit RrArm(RrArmParams params);

    Eigen::Index dof() const override { return 2; }
    const RrArmParams& params() const { return params_; }

    void mass_matrix_into(const Eigen::VectorXd& q, Eigen::MatrixXd& m) const override;
    void coriolis_matrix_into(const Eigen::VectorXd& q, const Eigen::VectorXd& qd,
                              Eigen::MatrixXd& c) const override;
    void gravity_vector_into(const Eigen::VectorXd& q, Eigen::VectorXd& g) const override;
    void forward_kinematics_into(const Eigen::VectorXd& q, Eigen::Vector2d& p) const override;
    void jacobian_into(const Eigen::VectorXd& q, Eigen::MatrixXd& j) const override;

  private:
    RrArmParams params_;
};

}  // namespace cerg
