#include <random>

#include <doctest.h>

#include "cerg/plant.hpp"
#include "support/oracles.hpp"

using namespace cerg;
using namespace cerg::testing;

namespace {

Eigen::VectorXd random_vec(std::mt19937& rng, double lo, double hi, Eigen::Index n = 2) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i) v(i) = dist(rng);
    return v;
}

}  // namespace

TEST_CASE("double integrator terms") {
    DoubleIntegrator di;
    const Eigen::VectorXd q = (Eigen::VectorXd(2) << 0.3, -1.2).finished();
    const Eigen::VectorXd qd = (Eigen::VectorXd(2) << 0.5, 2.0).finished();

    CHECK(di.dof() == 2);
    CHECK(di.mass_matrix(q).isApprox(Eigen::MatrixXd::Identity(2, 2)));
    CHECK(di.coriolis_matrix(q, qd).isZero());
    CHECK(di.gravity_vector(q).isZero());
    CHECK(di.forward_kinematics(q).isApprox(Eigen::Vector2d(0.3, -1.2)));
    CHECK(di.jacobian(q).isApprox(Eigen::MatrixXd::Identity(2, 2)));

    // unit mass: qdd equals the applied force plus external force
    const Eigen::VectorXd u = (Eigen::VectorXd(2) << 1.0, -2.0).finished();
    const Eigen::VectorXd tau = (Eigen::VectorXd(2) << 0.25, 0.0).finished();
    const StateDerivative dx = di.dynamics(State(q, qd), u, tau);
    CHECK(dx.q.isApprox(qd));
    CHECK(dx.qd.isApprox(u + tau));
}

TEST_CASE("rr arm frozen values") {
    RrArm arm;

    // configuration with the elbow straight: closed-form mass matrix entries
    const Eigen::VectorXd q0 = (Eigen::VectorXd(2) << 0.7, 0.0).finished();
    Eigen::MatrixXd m = arm.mass_matrix(q0);
    CHECK(m(0, 0) == doctest::Approx(5.375).epsilon(1e-12));
    CHECK(m(0, 1) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(m(1, 0) == doctest::Approx(1.125).epsilon(1e-12));
    CHECK(m(1, 1) == doctest::Approx(0.375).epsilon(1e-12));

    // gravity at the horizontal pose, from the point-mass potential
    const Eigen::VectorXd qh = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd g = arm.gravity_vector(qh);
    CHECK(g(0) == doctest::Approx(41.6925).epsilon(1e-9));
    CHECK(g(1) == doctest::Approx(7.3575).epsilon(1e-9));

    // end-effector position quoted for the reference configuration
    const Eigen::VectorXd qr = (Eigen::VectorXd(2) << M_PI / 4, -M_PI / 3).finished();
    const Eigen::Vector2d p = arm.forward_kinematics(qr);
    CHECK(p.x() == doctest::Approx(1.19007).epsilon(1e-5));
    CHECK(p.y() == doctest::Approx(0.57770).epsilon(1e-5));
}

TEST_CASE("rr arm closed forms match the point-mass oracles") {
    RrArmParams params;
    RrArm arm(params);
    std::mt19937 rng(7);

    for (int i = 0; i < 25; ++i) {
        const Eigen::VectorXd q = random_vec(rng, -M_PI, M_PI);
        const Eigen::VectorXd qd = random_vec(rng, -2.0, 2.0);

        CHECK((arm.mass_matrix(q) - rr_mass_oracle(params, q)).cwiseAbs().maxCoeff() < 1e-6);
        CHECK((arm.gravity_vector(q) - rr_gravity_oracle(params, q)).cwiseAbs().maxCoeff() <
              1e-6);
        CHECK((arm.forward_kinematics(q) - rr_tip2(params, q)).cwiseAbs().maxCoeff() < 1e-12);

        const Eigen::MatrixXd jac_fd = fd_jacobian(
            [&](const Eigen::VectorXd& qq) { return Eigen::VectorXd(rr_tip2(params, qq)); }, q);
        CHECK((arm.jacobian(q) - jac_fd).cwiseAbs().maxCoeff() < 1e-6);

        // Christoffel Coriolis matrix: Mdot - 2C is skew symmetric
        const Eigen::MatrixXd skew =
            fd_mass_rate(arm, q, qd) - 2.0 * arm.coriolis_matrix(q, qd);
        const Eigen::VectorXd z = random_vec(rng, -1.0, 1.0);
        CHECK(std::abs(z.dot(skew * z)) < 1e-8);
    }
}

TEST_CASE("rr arm parameter validation") {
    RrArmParams bad;
    bad.l2 = 0.0;
    CHECK_THROWS_AS(RrArm{bad}, std::invalid_argument);
    bad = RrArmParams{};
    bad.m1 = -1.0;
    CHECK_THROWS_AS(RrArm{bad}, std::invalid_argument);
}

TEST_CASE("dynamics rejects mismatched dimensions") {
    DoubleIntegrator di;
    const State x = State::zero(2);
    CHECK_THROWS_AS(di.dynamics(x, Eigen::VectorXd::Zero(3), Eigen::VectorXd::Zero(2)),
                    std::invalid_argument);
    CHECK_THROWS_AS(di.mass_matrix(Eigen::VectorXd::Zero(1)), std::invalid_argument);
}

TEST_CASE("state invariants") {
    CHECK_THROWS_AS(State(Eigen::VectorXd::Zero(2), Eigen::VectorXd::Zero(3)),
                    std::invalid_argument);
    State x = State::zero(2);
    CHECK(x.finite());
    x.qd(1) = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(x.finite());
}
