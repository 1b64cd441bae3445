#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>

namespace cerg {

/// Thrown when an integration or a field evaluation produces a value that is
/// not numerically usable (non-finite state, singular Jacobian, ...).
struct NumericalFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Full state of a mechanical system, x = [q; qd].
struct State {
    Eigen::VectorXd q;   ///< joint positions (rad or m)
    Eigen::VectorXd qd;  ///< joint velocities (rad/s or m/s)

    State() = default;
    State(Eigen::VectorXd q_in, Eigen::VectorXd qd_in)
        : q(std::move(q_in)), qd(std::move(qd_in)) {
        if (q.size() != qd.size())
            throw std::invalid_argument("State: q and qd must have the same dimension");
        if (q.size() < 1)
            throw std::invalid_argument("State: dimension must be >= 1");
    }

    static State zero(Eigen::Index n) {
        return State(Eigen::VectorXd::Zero(n), Eigen::VectorXd::Zero(n));
    }

    Eigen::Index dof() const { return q.size(); }

    bool finite() const { return q.allFinite() && qd.allFinite(); }
};

/// Time derivative of a State: fields hold [qd; qdd].
using StateDerivative = State;

}  // namespace cerg
