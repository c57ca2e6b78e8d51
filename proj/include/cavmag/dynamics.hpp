#pragma once

#include "cavmag/hamiltonian.hpp"

#include <cstddef>
#include <vector>

namespace cavmag {

struct Trajectory {
    std::vector<double> times;               // strictly increasing, starts at 0
    std::vector<Eigen::VectorXcd> states;    // (a, m1, m2) or (m1, m2)
    double step{0.0};                        // step actually taken
    double final_residual{0.0};              // distance of the last state from the fixed point
};

// exp(a) via eigendecomposition; falls back to scaling-and-squaring Taylor
// series when the eigenvector matrix is ill-conditioned (cond > 1e8), which
// happens at and near exceptional points.
Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a);

// Exact solution of dx/dt = A x + f: x(t) = x_ss + exp(A t)(x0 - x_ss),
// x_ss = -A^{-1} f. A must be nonsingular.
Eigen::VectorXcd exact_linear_solution(const Eigen::MatrixXcd& generator, const Eigen::VectorXcd& forcing,
                                       const Eigen::VectorXcd& initial, double t);

// Classical RK4 for dX/dt = -i (H - delta) X + F. The step is shortened so
// that an integer number of steps lands on t_end; every record_stride-th
// state is stored (the final state always is). Throws std::invalid_argument
// when dt * max|lambda| >= 2.8 for the generator's eigenvalues.
Trajectory integrate_full(const SystemParams& params, const DriveParams& drive, const Vector3c& initial,
                          double t_end, double dt, std::size_t record_stride = 1);

// Same integrator on the undriven two-magnon model dY/dt = -i H_ad Y.
Trajectory integrate_adiabatic(const AdiabaticModel& model, const Vector2c& initial, double t_end, double dt,
                               std::size_t record_stride = 1);

// Integrates the undriven full and adiabatic systems from consistent data
// (cavity set to its slaved value) and returns
//   max_t |(m1, m2)_full(t) - (m1, m2)_adiabatic(t)| / |(m1, m2)(0)|.
// dt <= 0 selects 0.1 / max(kappa, |s|, g1, g2, 1) capped at 0.01.
double adiabatic_validity_report(const SystemParams& params, const Vector2c& initial_magnons, double t_end,
                                 double dt = 0.0);

}  // namespace cavmag
