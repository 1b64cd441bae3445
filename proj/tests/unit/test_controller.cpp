#include <random>

#include <doctest.h>

#include "cerg/controller.hpp"
#include "cerg/plant.hpp"
#include "support/oracles.hpp"

using namespace cerg;
using namespace cerg::testing;

namespace {

State random_state(std::mt19937& rng) {
    std::uniform_real_distribution<double> pos(-M_PI, M_PI), vel(-2.0, 2.0);
    Eigen::VectorXd q(2), qd(2);
    q << pos(rng), pos(rng);
    qd << vel(rng), vel(rng);
    return State(q, qd);
}

}  // namespace

TEST_CASE("gain factories and validation") {
    const GainConfig joint = GainConfig::joint(2, 6.0, 10.0);
    CHECK(joint.mode == ControlMode::Joint);
    CHECK(joint.kp.isApprox(6.0 * Eigen::MatrixXd::Identity(2, 2)));
    CHECK(joint.kd.isApprox(10.0 * Eigen::MatrixXd::Identity(2, 2)));
    CHECK_NOTHROW(joint.validate(2));
    CHECK_THROWS_AS(joint.validate(3), std::invalid_argument);

    const GainConfig task = GainConfig::task(16.0, 10.0);
    CHECK(task.mode == ControlMode::Task);
    CHECK_NOTHROW(task.validate(2));
    CHECK_THROWS_AS(GainConfig::task(0.0, 10.0).validate(2), std::invalid_argument);
    CHECK_THROWS_AS(GainConfig::task(16.0, -1.0).validate(2), std::invalid_argument);

    // non-SPD joint stiffness is rejected
    Eigen::MatrixXd bad(2, 2);
    bad << 1.0, 2.0, 2.0, 1.0;  // indefinite
    CHECK_THROWS_AS(GainConfig::joint(bad, Eigen::MatrixXd::Identity(2, 2)).validate(2),
                    std::invalid_argument);
}

TEST_CASE("joint control law") {
    RrArm arm;
    const GainConfig gains = GainConfig::joint(2, 16.0, 10.0);
    std::mt19937 rng(11);

    for (int i = 0; i < 10; ++i) {
        const State x = random_state(rng);
        const Eigen::VectorXd v = random_state(rng).q;
        const Eigen::VectorXd u = control_input(x, v, gains, arm);
        const Eigen::VectorXd expect =
            -gains.kp * (x.q - v) - gains.kd * x.qd + arm.gravity_vector(x.q);
        CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-12);
    }

    // at rest on the reference only gravity remains
    const Eigen::VectorXd v0 = (Eigen::VectorXd(2) << 0.4, -0.9).finished();
    const Eigen::VectorXd hold = control_input(State(v0, Eigen::VectorXd::Zero(2)), v0, gains, arm);
    CHECK((hold - arm.gravity_vector(v0)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("task control law") {
    RrArm arm;
    const GainConfig gains = GainConfig::task(16.0, 10.0);
    std::mt19937 rng(13);

    for (int i = 0; i < 10; ++i) {
        const State x = random_state(rng);
        const Eigen::VectorXd v = random_state(rng).q;
        const Eigen::VectorXd u = control_input(x, v, gains, arm);
        const Eigen::Vector2d err = arm.forward_kinematics(x.q) - arm.forward_kinematics(v);
        const Eigen::VectorXd expect = -gains.task_kp * arm.jacobian(x.q).transpose() * err -
                                       gains.task_kd * x.qd + arm.gravity_vector(x.q);
        CHECK((u - expect).cwiseAbs().maxCoeff() < 1e-12);

        // the spring part does no virtual work orthogonal to the task error:
        // u - g + kd qd lies in the row space of J
        const Eigen::VectorXd spring = u - arm.gravity_vector(x.q) + gains.task_kd * x.qd;
        const Eigen::VectorXd recovered = -gains.task_kp * arm.jacobian(x.q).transpose() * err;
        CHECK((spring - recovered).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("workspace control path matches the allocating one") {
    RrArm arm;
    DynamicsWorkspace ws(2);
    std::mt19937 rng(17);
    for (const GainConfig& gains : {GainConfig::joint(2, 16.0, 10.0), GainConfig::task(16.0, 10.0)}) {
        for (int i = 0; i < 5; ++i) {
            const State x = random_state(rng);
            const Eigen::VectorXd v = random_state(rng).q;
            Eigen::VectorXd u(2);
            control_input_into(x, v, gains, arm, ws, u);
            CHECK((u - control_input(x, v, gains, arm)).cwiseAbs().maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("energy definitions") {
    RrArm arm;
    std::mt19937 rng(19);
    const State x = random_state(rng);
    const Eigen::VectorXd v = random_state(rng).q;

    const GainConfig joint = GainConfig::joint(2, 16.0, 10.0);
    const double vj = energy(x, v, joint, arm);
    const double kinetic = 0.5 * x.qd.dot(arm.mass_matrix(x.q) * x.qd);
    CHECK(vj == doctest::Approx(kinetic + 0.5 * (x.q - v).dot(joint.kp * (x.q - v))).epsilon(1e-12));

    const GainConfig task = GainConfig::task(16.0, 10.0);
    const double vt = energy(x, v, task, arm);
    const double task_err =
        (arm.forward_kinematics(x.q) - arm.forward_kinematics(v)).squaredNorm();
    CHECK(vt == doctest::Approx(kinetic + 0.5 * 16.0 * task_err).epsilon(1e-12));

    // zero exactly at the mode's equilibrium
    CHECK(energy(State(v, Eigen::VectorXd::Zero(2)), v, joint, arm) == doctest::Approx(0.0));
    CHECK(energy(State(v, Eigen::VectorXd::Zero(2)), v, task, arm) == doctest::Approx(0.0));

    CHECK(energy_decay_rate(x, joint) == doctest::Approx(-x.qd.dot(joint.kd * x.qd)).epsilon(1e-12));
    CHECK(energy_decay_rate(x, task) == doctest::Approx(-10.0 * x.qd.squaredNorm()).epsilon(1e-12));
}
