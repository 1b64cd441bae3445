#include <cmath>
#include <random>

#include <doctest.h>

#include "cerg/governor.hpp"
#include "support/oracles.hpp"

using namespace cerg;
using namespace cerg::testing;

namespace {

GovernorParams base_params() {
    GovernorParams p;
    p.delta_s = 0.05;
    return p;
}

ConstraintSet joint_wall(double offset, double e_max) {
    ConstraintSet set;
    set.soft = SoftConstraint(SoftSpace::Joint, (Eigen::VectorXd(2) << 0.0, 1.0).finished(), offset);
    set.e_max = e_max;
    return set;
}

}  // namespace

TEST_CASE("governor params validation") {
    CHECK_NOTHROW(base_params().validate());

    GovernorParams p = base_params();
    p.delta_s = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = base_params();
    p.zeta = p.delta_h;  // influence region must extend past the static margin
    CHECK_THROWS_WITH_AS(p.validate(), "governor: zeta must exceed delta_h",
                         std::invalid_argument);

    p = base_params();
    p.dt_pred = p.dt_gov * 2.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = base_params();
    p.t_pred = 0.5 * p.dt_pred;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);

    p = base_params();
    p.delta_max = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("prediction matches the scalar closed form on the double integrator") {
    DoubleIntegrator di;
    const GainConfig gains = GainConfig::joint(2, 6.0, 10.0);
    GovernorParams params = base_params();
    params.t_pred = 2.0;

    const State x0((Eigen::VectorXd(2) << 0.4, -0.2).finished(),
                   (Eigen::VectorXd(2) << 0.1, 0.3).finished());
    const Eigen::VectorXd v = (Eigen::VectorXd(2) << 1.0, 0.5).finished();

    const PredictionTrace trace = predict(x0, v, di, gains, params);
    REQUIRE(trace.samples() > 10);
    CHECK(trace.tau(0) == 0.0);
    CHECK((trace.q.col(0) - x0.q).cwiseAbs().maxCoeff() == 0.0);

    // each axis decouples into qdd = -kp (q - v) - kd qd with known roots
    const ScalarPdSolution sol{6.0, 10.0};
    for (Eigen::Index k = 0; k < trace.samples(); k += 50) {
        for (int axis = 0; axis < 2; ++axis) {
            const auto [qe, qde] = sol.at(x0.q[axis], x0.qd[axis], v[axis], trace.tau(k));
            CHECK(trace.q(axis, k) == doctest::Approx(qe).epsilon(1e-7));
            CHECK(trace.qd(axis, k) == doctest::Approx(qde).epsilon(1e-7));
        }
    }

    // logged inputs are the control law along the prediction
    const Eigen::Index last = trace.samples() - 1;
    const State xl(trace.q.col(last), trace.qd.col(last));
    CHECK((trace.u.col(last) - control_input(xl, v, gains, di)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("prediction settles immediately at an equilibrium") {
    DoubleIntegrator di;
    const Eigen::VectorXd v = (Eigen::VectorXd(2) << -0.7, 0.2).finished();
    const PredictionTrace trace =
        predict(State(v, Eigen::VectorXd::Zero(2)), v, di, GainConfig::joint(2, 6.0, 10.0),
                base_params());
    CHECK(trace.settled);
    CHECK(trace.samples() == 1);
    CHECK(trace.tau(0) == 0.0);
}

TEST_CASE("hard margin over a trace") {
    GovernorParams params = base_params();
    params.kappa_h = 2.0;

    PredictionTrace trace;
    trace.tau = Eigen::VectorXd::LinSpaced(3, 0.0, 0.2);
    trace.q.resize(2, 3);
    trace.q << 0.0, 0.5, 0.3,
               0.0, 0.0, 0.0;
    trace.qd = Eigen::MatrixXd::Zero(2, 3);
    trace.u.resize(2, 3);
    trace.u << 1.0, 3.0, -2.0,
               0.0, 0.0, 0.0;

    ConstraintSet set = joint_wall(10.0, 1.0);
    SUBCASE("empty hard set returns the cap") {
        CHECK(dsm_hard(trace, set, params) == doctest::Approx(params.delta_max));
    }
    SUBCASE("position constraint picks the worst sample") {
        set.hard.emplace_back(HardSpace::Position, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 2.0);
        // worst h = 0.5 - 2.0 = -1.5, margin = kappa_h * 1.5
        CHECK(dsm_hard(trace, set, params) == doctest::Approx(3.0));
    }
    SUBCASE("input constraint can dominate and go negative") {
        set.hard.emplace_back(HardSpace::Position, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 2.0);
        set.hard.emplace_back(HardSpace::Input, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 2.5);
        // worst input h = 3.0 - 2.5 = 0.5 > position's -1.5
        CHECK(dsm_hard(trace, set, params) == doctest::Approx(-1.0));
    }
}

TEST_CASE("soft margin over a trace in both spaces") {
    GovernorParams params = base_params();
    params.kappa_s = 3.0;

    PredictionTrace trace;
    trace.tau = Eigen::VectorXd::LinSpaced(3, 0.0, 0.2);
    trace.q.resize(2, 3);
    trace.q << 0.0, 0.2, 0.1,
               1.0, 1.2, 0.9;
    trace.qd = Eigen::MatrixXd::Zero(2, 3);
    trace.u = Eigen::MatrixXd::Zero(2, 3);

    DoubleIntegrator di;
    // joint wall q2 <= 1.5: worst s = 1.2 - 1.5 = -0.3
    CHECK(dsm_soft(trace, joint_wall(1.5, 1.0), di, params) == doctest::Approx(0.9));

    // task wall x <= 1.5 on the identity-kinematics plant: same numbers via f(q) = q
    ConstraintSet task;
    task.soft = SoftConstraint(SoftSpace::Task, (Eigen::VectorXd(2) << 0.0, 1.0).finished(), 1.5);
    task.e_max = 1.0;
    CHECK(dsm_soft(trace, task, di, params) == doctest::Approx(0.9));
}

TEST_CASE("energy margin is instantaneous") {
    DoubleIntegrator di;
    const GainConfig gains = GainConfig::joint(2, 6.0, 10.0);
    GovernorParams params = base_params();
    params.kappa_e = 0.5;
    const ConstraintSet set = joint_wall(1.5, 0.2);

    const Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
    const State x((Eigen::VectorXd(2) << 0.1, 0.0).finished(), Eigen::VectorXd::Zero(2));
    const double expected_v = 0.5 * 6.0 * 0.01;
    CHECK(dsm_energy(x, v, gains, di, set, params) ==
          doctest::Approx(0.5 * (0.2 - expected_v)).epsilon(1e-12));
}

TEST_CASE("margin composition truth table") {
    auto composed = [](double h, double s, double e) { return dsm_compose(h, s, e).composed; };
    CHECK(composed(1.0, 2.0, 3.0) == doctest::Approx(1.0));
    CHECK(composed(5.0, 2.0, 3.0) == doctest::Approx(3.0));
    CHECK(composed(5.0, -1.0, 3.0) == doctest::Approx(3.0));
    CHECK(composed(5.0, 2.0, -4.0) == doctest::Approx(2.0));
    CHECK(composed(5.0, -1.0, -4.0) == doctest::Approx(-1.0));
    CHECK(composed(-2.0, 9.0, 9.0) == doctest::Approx(-2.0));

    const DsmBreakdown b = dsm_compose(-2.0, -1.0, -4.0);
    CHECK(b.hard == -2.0);
    CHECK(b.soft == -1.0);
    CHECK(b.energy == -4.0);
    CHECK(b.soft_or_energy == -1.0);
    CHECK(b.composed == -2.0);
}

TEST_CASE("attraction field magnitude") {
    const GovernorParams params = base_params();
    const Eigen::VectorXd v = Eigen::VectorXd::Zero(2);

    // far from the goal: unit vector toward r
    const Eigen::VectorXd r_far = (Eigen::VectorXd(2) << 3.0, 4.0).finished();
    const Eigen::VectorXd far = nav_attraction(v, r_far, params);
    CHECK(far.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((far - r_far / 5.0).cwiseAbs().maxCoeff() < 1e-12);

    // inside the eta ball: proportional, ||rho|| = ||r - v|| / eta
    const Eigen::VectorXd r_near = (Eigen::VectorXd(2) << 0.03, 0.04).finished();
    const Eigen::VectorXd near_field = nav_attraction(v, r_near, params);
    CHECK(near_field.norm() == doctest::Approx(0.05 / params.eta).epsilon(1e-12));

    CHECK(nav_attraction(v, v, params).isZero(0.0));
}

TEST_CASE("hard repulsion magnitude profile") {
    DoubleIntegrator di;
    GovernorParams params = base_params();  // zeta = 0.2, delta_h = 0.05
    ConstraintSet set = joint_wall(10.0, 1.0);
    set.hard.emplace_back(HardSpace::Position, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 1.0,
                          "q1 cap");

    auto repulsion_at = [&](double q1) {
        return nav_hard_repulsion((Eigen::VectorXd(2) << q1, 0.0).finished(), set, di, params);
    };

    // outside the influence region: zero
    CHECK(repulsion_at(0.75).isZero(0.0));
    CHECK(repulsion_at(0.0).isZero(0.0));

    // exactly at the static margin h_ss = -delta_h: unit magnitude, pointing inward
    const Eigen::VectorXd at_margin = repulsion_at(1.0 - 0.05);
    CHECK(at_margin.norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(at_margin(0) == doctest::Approx(-1.0).epsilon(1e-12));

    // halfway into the band the scale interpolates linearly
    const double h_ss = -0.125;  // q1 = 0.875
    const Eigen::VectorXd mid = repulsion_at(0.875);
    CHECK(mid.norm() == doctest::Approx((params.zeta + h_ss) / (params.zeta - params.delta_h))
                            .epsilon(1e-12));

    // a velocity-space constraint has a zero steady-state gradient; if it is
    // active at v the field is undefined
    ConstraintSet degenerate = joint_wall(10.0, 1.0);
    degenerate.hard.emplace_back(HardSpace::Velocity, (Eigen::VectorXd(2) << 1.0, 0.0).finished(),
                                 -0.1, "impossible rest");
    CHECK_THROWS_AS(nav_hard_repulsion(Eigen::VectorXd::Zero(2), degenerate, di, params),
                    NumericalFailure);
}

TEST_CASE("soft repulsion in joint space") {
    DoubleIntegrator di;
    GovernorParams params = base_params();
    params.delta_s = 0.1;
    const ConstraintSet set = joint_wall(1.5, 1.0);

    // on or outside the surface: zero
    CHECK(nav_soft_repulsion((Eigen::VectorXd(2) << 0.0, 1.4).finished(), set, di, params)
              .isZero(0.0));
    CHECK(nav_soft_repulsion((Eigen::VectorXd(2) << 0.0, 1.5).finished(), set, di, params)
              .isZero(0.0));

    // at s = delta_s: unit magnitude along the interior normal
    const Eigen::VectorXd at_target =
        nav_soft_repulsion((Eigen::VectorXd(2) << 0.0, 1.6).finished(), set, di, params);
    CHECK(at_target(0) == doctest::Approx(0.0));
    CHECK(at_target(1) == doctest::Approx(-1.0).epsilon(1e-12));

    // deeper: scale s / delta_s keeps growing (unsaturated)
    const Eigen::VectorXd deep =
        nav_soft_repulsion((Eigen::VectorXd(2) << 0.0, 1.8).finished(), set, di, params);
    CHECK(deep(1) == doctest::Approx(-3.0).epsilon(1e-12));
}

TEST_CASE("soft repulsion in task space maps through the jacobian") {
    RrArm arm;
    GovernorParams params = base_params();
    params.delta_s = 0.1;

    ConstraintSet set;
    set.soft = SoftConstraint(SoftSpace::Task, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 1.0);
    set.e_max = 1.0;

    // find a configuration penetrating the x = 1 wall by exactly delta_s
    // fk(q) with q = (0, q2): x = cos 0 + 0.5 cos q2 -> q2 = acos(0.2) gives x = 1.1
    const double q2 = std::acos(0.2);
    const Eigen::VectorXd v = (Eigen::VectorXd(2) << 0.0, q2).finished();
    CHECK(set.soft.value(arm, v) == doctest::Approx(0.1).epsilon(1e-12));

    const Eigen::VectorXd rho = nav_soft_repulsion(v, set, arm, params);
    CHECK(rho.norm() == doctest::Approx(1.0).epsilon(1e-12));
    // moving along rho must decrease s: directional derivative of s is
    // normal^T J rho < 0
    const Eigen::VectorXd ds = arm.jacobian(v).transpose() * set.soft.normal;
    CHECK(ds.dot(rho) < 0.0);

    // a singular arm (q2 = 0) penetrating the wall cannot map the normal
    const Eigen::VectorXd singular = Eigen::VectorXd::Zero(2);  // fully stretched, x = 1.5
    CHECK_THROWS_AS(nav_soft_repulsion(singular, set, arm, params), NumericalFailure);
}

TEST_CASE("governor step moves the reference toward the goal when safe") {
    DoubleIntegrator di;
    const GainConfig gains = GainConfig::joint(2, 6.0, 10.0);
    GovernorParams params = base_params();
    params.t_pred = 2.0;
    const ConstraintSet set = joint_wall(1.5, 0.1);

    const Eigen::VectorXd v = Eigen::VectorXd::Zero(2);
    const Eigen::VectorXd r = (Eigen::VectorXd(2) << 0.5, 0.0).finished();
    const State x(v, Eigen::VectorXd::Zero(2));  // settled at v, wall far away

    const GovernorStep step = governor_step(x, v, r, set, di, gains, params);
    // settled state far from every constraint: composed margin is positive
    CHECK(step.dsm.composed > 0.0);
    // motion is along the attraction direction with speed dt_gov * clamp(margin)
    const double applied = std::min(std::max(step.dsm.composed, 0.0), params.delta_max);
    CHECK((step.v_next - (v + params.dt_gov * applied * (r - v).normalized()))
              .cwiseAbs()
              .maxCoeff() < 1e-12);

    // a negative margin freezes the reference
    ConstraintSet hot = set;
    hot.e_max = 1e-9;
    ConstraintSet blocked = hot;
    blocked.hard.emplace_back(HardSpace::Position, (Eigen::VectorXd(2) << 1.0, 0.0).finished(),
                              -1.0);
    const GovernorStep frozen = governor_step(x, v, r, blocked, di, gains, params);
    CHECK(frozen.dsm.composed < 0.0);
    CHECK((frozen.v_next - v).isZero(0.0));
}

TEST_CASE("steady state helpers") {
    CHECK(penetration_for_force(1.0, 6.0) == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK_THROWS_AS(penetration_for_force(0.0, 6.0), std::invalid_argument);
    CHECK_THROWS_AS(penetration_for_force(1.0, 0.0), std::invalid_argument);
    CHECK(steady_state_contact_energy(1.0 / 6.0, 6.0) ==
          doctest::Approx(1.0 / 12.0).epsilon(1e-12));

    GovernorParams params = base_params();
    params.delta_s = 1.0 / 6.0;
    const ConstraintSet set = joint_wall(1.5, 0.1);
    const Eigen::VectorXd r = (Eigen::VectorXd(2) << 0.5, 1.8).finished();
    const Eigen::VectorXd vbar = steady_state_target(r, set, params);
    CHECK(vbar(0) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(vbar(1) == doctest::Approx(1.5 + 1.0 / 6.0).epsilon(1e-12));

    // a goal short of the surface is untouched
    const Eigen::VectorXd inside = (Eigen::VectorXd(2) << 0.5, 1.0).finished();
    CHECK((steady_state_target(inside, set, params) - inside).isZero(0.0));

    ConstraintSet task;
    task.soft = SoftConstraint(SoftSpace::Task, (Eigen::VectorXd(2) << 1.0, 0.0).finished(), 1.0);
    task.e_max = 0.1;
    CHECK_THROWS_AS(steady_state_target(r, task, params), std::invalid_argument);
}
