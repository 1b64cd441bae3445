#include <memory>

#include <benchmark/benchmark.h>

#include "cerg/governor.hpp"
#include "cerg/integrate.hpp"
#include "cerg/sim.hpp"

namespace {

using namespace cerg;

ConstraintSet di_constraints() {
    ConstraintSet set;
    set.soft = SoftConstraint(SoftSpace::Joint, (Eigen::VectorXd(2) << 0, 1).finished(), 1.5);
    set.e_max = 0.1;
    return set;
}

ConstraintSet arm_constraints() {
    ConstraintSet set;
    set.soft = SoftConstraint(SoftSpace::Task, (Eigen::VectorXd(2) << 1, 0).finished(), 1.0);
    set.e_max = 0.2;
    return set;
}

State arm_state() {
    return State((Eigen::VectorXd(2) << M_PI / 2, M_PI / 5).finished(),
                 (Eigen::VectorXd(2) << 0.1, -0.2).finished());
}

void BM_ForwardAcceleration(benchmark::State& state) {
    RrArm arm;
    DynamicsWorkspace ws(2);
    const State x = arm_state();
    const Eigen::VectorXd u = (Eigen::VectorXd(2) << 1.0, -0.5).finished();
    const Eigen::VectorXd tau = Eigen::VectorXd::Zero(2);
    Eigen::VectorXd qdd(2);
    for (auto _ : state) {
        forward_acceleration(arm, x, u, tau, ws, qdd);
        benchmark::DoNotOptimize(qdd.data());
    }
}
BENCHMARK(BM_ForwardAcceleration);

void BM_PredictionStep(benchmark::State& state) {
    // One integration step of the contact-free prestabilized loop, the unit
    // of work the governor repeats ~t_pred/dt_pred times per tick.
    RrArm arm;
    const GainConfig gains = GainConfig::joint(2, 16.0, 10.0);
    const Eigen::VectorXd v = (Eigen::VectorXd(2) << M_PI / 4, -M_PI / 3).finished();
    const Eigen::VectorXd tau = Eigen::VectorXd::Zero(2);
    DynamicsWorkspace ws(2);
    Rk4Scratch scratch(2);
    State x = arm_state();
    auto deriv = [&](const State& y, State& dy) {
        dy.q = y.qd;
        control_input_into(y, v, gains, arm, ws, ws.u);
        forward_acceleration(arm, y, ws.u, tau, ws, dy.qd);
    };
    for (auto _ : state) {
        State step = x;
        rk4_step(deriv, step, 1e-3, scratch);
        benchmark::DoNotOptimize(step.q.data());
    }
}
BENCHMARK(BM_PredictionStep);

void BM_GovernorTick(benchmark::State& state) {
    const DoubleIntegrator plant;
    const GainConfig gains = GainConfig::joint(2, 6.0, 10.0);
    const ConstraintSet set = di_constraints();
    GovernorParams params;
    params.delta_s = 1.0 / 6.0;
    const State x(Eigen::VectorXd::Zero(2), (Eigen::VectorXd(2) << 0.2, 0.4).finished());
    const Eigen::VectorXd v = (Eigen::VectorXd(2) << 0.1, 0.5).finished();
    const Eigen::VectorXd r = (Eigen::VectorXd(2) << 0.5, 1.8).finished();
    for (auto _ : state) {
        GovernorStep gs = governor_step(x, v, r, set, plant, gains, params);
        benchmark::DoNotOptimize(gs.v_next.data());
    }
}
BENCHMARK(BM_GovernorTick);

void BM_ClosedLoopSecond(benchmark::State& state) {
    // One simulated second of the governed arm loop, contact included.
    Scenario sc;
    sc.plant = std::make_shared<RrArm>();
    sc.gains = GainConfig::task(16.0, 10.0);
    sc.constraints = arm_constraints();
    sc.contact = ContactParams{100.0, 10.0};
    sc.governor.delta_s = 0.0625;
    sc.x0 = State((Eigen::VectorXd(2) << M_PI / 2, M_PI / 5).finished(),
                  Eigen::VectorXd::Zero(2));
    sc.reference = (Eigen::VectorXd(2) << M_PI / 4, -M_PI / 3).finished();
    sc.duration = 1.0;
    sc.dt_sim = 1e-3;
    for (auto _ : state) {
        TraceLog log = run_closed_loop(sc);
        benchmark::DoNotOptimize(log.q.data());
    }
}
BENCHMARK(BM_ClosedLoopSecond)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
