#include "cavmag/dynamics.hpp"

#include "cavmag/response.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace cavmag {

namespace {

Eigen::MatrixXcd taylor_exponential(const Eigen::MatrixXcd& a) {
    const double norm = a.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm > 0.5) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    }
    const Eigen::MatrixXcd scaled = a / std::ldexp(1.0, squarings);
    const auto n = a.rows();
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(n, n);
    Eigen::MatrixXcd sum = term;
    for (int k = 1; k <= 24; ++k) {
        term = term * scaled / static_cast<double>(k);
        sum += term;
    }
    for (int i = 0; i < squarings; ++i) {
        sum = sum * sum;
    }
    return sum;
}

// RK4 on dx/dt = A x + f
template <class Vec>
Trajectory rk4(const Eigen::MatrixXcd& gen, const Vec& forcing, const Vec& initial, double t_end, double dt,
               std::size_t stride) {
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive and finite");
    }
    if (!(t_end > 0.0) || !std::isfinite(t_end)) {
        throw std::invalid_argument("t_end must be positive and finite");
    }
    if (stride == 0) {
        throw std::invalid_argument("record stride must be >= 1");
    }
    const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Eigen::MatrixXcd>(gen, false).eigenvalues();
    const double rate = ev.cwiseAbs().maxCoeff();
    if (dt * rate >= 2.8) {
        throw std::invalid_argument("dt = " + std::to_string(dt) + " exceeds the RK4 stability bound 2.8/" +
                                    std::to_string(rate));
    }

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const double h = t_end / static_cast<double>(steps);

    Trajectory traj;
    traj.step = h;
    traj.times.reserve(steps / stride + 2);
    traj.states.reserve(steps / stride + 2);
    Eigen::VectorXcd x = initial;
    const Eigen::VectorXcd f = forcing;
    traj.times.push_back(0.0);
    traj.states.push_back(x);
    for (std::size_t n = 1; n <= steps; ++n) {
        const Eigen::VectorXcd k1 = gen * x + f;
        const Eigen::VectorXcd k2 = gen * (x + 0.5 * h * k1) + f;
        const Eigen::VectorXcd k3 = gen * (x + 0.5 * h * k2) + f;
        const Eigen::VectorXcd k4 = gen * (x + h * k3) + f;
        x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (n % stride == 0 || n == steps) {
            traj.times.push_back(h * static_cast<double>(n));
            traj.states.push_back(x);
        }
    }
    return traj;
}

}  // namespace

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& a) {
    if (a.rows() != a.cols()) {
        throw std::invalid_argument("matrix_exponential: matrix must be square");
    }
    const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(a);
    if (es.info() == Eigen::Success) {
        const Eigen::MatrixXcd& v = es.eigenvectors();
        const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(v).singularValues();
        const double cond = sv(sv.size() - 1) > 0.0 ? sv(0) / sv(sv.size() - 1)
                                                    : std::numeric_limits<double>::infinity();
        if (cond <= 1e8) {
            const Eigen::VectorXcd expd = es.eigenvalues().array().exp();
            return v * expd.asDiagonal() * v.inverse();
        }
    }
    return taylor_exponential(a);
}

Eigen::VectorXcd exact_linear_solution(const Eigen::MatrixXcd& generator, const Eigen::VectorXcd& forcing,
                                       const Eigen::VectorXcd& initial, double t) {
    const Eigen::VectorXcd fixed = -generator.partialPivLu().solve(forcing);
    return fixed + matrix_exponential(generator * t) * (initial - fixed);
}

Trajectory integrate_full(const SystemParams& params, const DriveParams& drive, const Vector3c& initial,
                          double t_end, double dt, std::size_t record_stride) {
    const EffectiveHamiltonian sys = build_driven_system(params, drive);
    const Eigen::MatrixXcd gen = -kI * sys.matrix;
    const Eigen::VectorXcd init = initial;
    const Eigen::VectorXcd force = sys.force;
    Trajectory traj = rk4(gen, force, init, t_end, dt, record_stride);
    try {
        const Vector3c fixed = steady_state(params, drive).state();
        traj.final_residual = (traj.states.back() - Eigen::VectorXcd(fixed)).norm();
    } catch (const NumericalError&) {
        traj.final_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return traj;
}

Trajectory integrate_adiabatic(const AdiabaticModel& model, const Vector2c& initial, double t_end, double dt,
                               std::size_t record_stride) {
    const Eigen::MatrixXcd gen = -kI * model.matrix;
    const Eigen::VectorXcd init = initial;
    const Eigen::VectorXcd force = Eigen::VectorXcd::Zero(2);
    Trajectory traj = rk4(gen, force, init, t_end, dt, record_stride);
    traj.final_residual = traj.states.back().norm();
    return traj;
}

double adiabatic_validity_report(const SystemParams& params, const Vector2c& initial_magnons, double t_end,
                                 double dt) {
    params.validate();
    const double scale0 = initial_magnons.norm();
    if (!(scale0 > 0.0)) {
        throw std::invalid_argument("adiabatic_validity_report: initial magnon state must be nonzero");
    }
    if (dt <= 0.0) {
        dt = std::min(0.01, 0.1 / std::max({params.kappa, std::abs(params.s), params.g1, params.g2, 1.0}));
    }
    const Vector3c full0(slaved_cavity_amplitude(params, initial_magnons), initial_magnons(0), initial_magnons(1));
    const Trajectory full = integrate_full(params, DriveParams{0.0, 0.0}, full0, t_end, dt);
    const Trajectory reduced = integrate_adiabatic(build_adiabatic_model(params), initial_magnons, t_end, dt);

    double worst = 0.0;
    for (std::size_t i = 0; i < full.states.size(); ++i) {
        const Eigen::VectorXcd diff = full.states[i].tail(2) - reduced.states[i];
        worst = std::max(worst, diff.norm());
    }
    return worst / scale0;
}

}  // namespace cavmag
