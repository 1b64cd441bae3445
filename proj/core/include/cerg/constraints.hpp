#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "cerg/plant.hpp"
#include "cerg/state.hpp"

namespace cerg {

enum class HardSpace { Position, Velocity, Input };

/// Hard state-and-input constraint h(q, qd, u) <= 0, shipped as an affine
/// halfspace coeff . z - bound <= 0 on z in {q, qd, u}. The steady-state form
/// is h_ss(v) = h(v, 0, g(v)).
struct HardConstraint {
    HardSpace space = HardSpace::Position;
    Eigen::VectorXd coeff;
    double bound = 0.0;
    std::string label;

    HardConstraint() = default;
    HardConstraint(HardSpace space_in, Eigen::VectorXd coeff_in, double bound_in,
                   std::string label_in = {});

    double value(const State& x, const Eigen::VectorXd& u) const;
    double steady_state(const Eigen::VectorXd& v, const PlantModel& model) const;
    Eigen::VectorXd steady_state_gradient(const Eigen::VectorXd& v, const PlantModel& model) const;
};

enum class SoftSpace { Joint, Task };

/// Soft constraint s <= 0: a halfspace surface the robot may contact. In task
/// space s(q) = normal . f(q) - offset, in joint space s(q) = normal . q -
/// offset. The stored normal is unit length (inputs are rescaled).
struct SoftConstraint {
    SoftSpace space = SoftSpace::Joint;
    Eigen::VectorXd normal;  ///< unit outward gradient in the native space
    double offset = 0.0;

    SoftConstraint() = default;
    SoftConstraint(SoftSpace space_in, Eigen::VectorXd normal_in, double offset_in);

    /// Penetration at a joint configuration; negative = free motion.
    double value(const PlantModel& model, const Eigen::VectorXd& q) const;
};

struct ConstraintSet {
    std::vector<HardConstraint> hard;
    SoftConstraint soft;
    double e_max = 0.0;  ///< total-energy bound during contact (J)

    void validate() const;
};

/// One residual per hard constraint; satisfied iff every entry <= 0.
std::vector<double> eval_hard(const ConstraintSet& set, const State& x, const Eigen::VectorXd& u);

/// Soft residual at configuration q (task-space constraints evaluate s(f(q))).
double eval_soft(const ConstraintSet& set, const PlantModel& model, const Eigen::VectorXd& q);

/// Compliant residual [h(q, qd, u); min(s(q), V - E_max)]. The trailing entry
/// encodes the OR constraint: free motion or energy-bounded contact. `energy_val`
/// is V(x, v) supplied by the caller.
std::vector<double> compliant_residual(const ConstraintSet& set, const PlantModel& model,
                                       const State& x, const Eigen::VectorXd& u,
                                       double energy_val);

}  // namespace cerg
