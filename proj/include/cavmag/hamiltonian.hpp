#pragma once

#include "cavmag/params.hpp"

#include <Eigen/Dense>

#include <complex>
#include <span>
#include <vector>

namespace cavmag {

using cplx = std::complex<double>;
using Matrix3c = Eigen::Matrix3cd;
using Vector3c = Eigen::Vector3cd;
using Matrix2c = Eigen::Matrix2cd;
using Vector2c = Eigen::Vector2cd;

inline constexpr cplx kI{0.0, 1.0};

// Rotating-frame generator of the mean-field amplitudes (a, m1, m2) together
// with the cavity drive term, so that dX/dt = -i * matrix * X + force.
struct EffectiveHamiltonian {
    Matrix3c matrix;
    Vector3c force;
};

// [[-i kappa, g1, g2], [g1, s - i gamma1, 0], [g2, 0, -s - i gamma2]]
Matrix3c build_full_hamiltonian(const SystemParams& params);

// matrix = H - delta * I, force = sqrt(kappa) * (E, 0, 0).
EffectiveHamiltonian build_driven_system(const SystemParams& params, const DriveParams& drive);

// Two-magnon model left after slaving the cavity to a = -i (g1 m1 + g2 m2) / kappa.
struct AdiabaticModel {
    Matrix2c matrix;
    double Gamma{0.0};         // g1 g2 / kappa
    double gamma_tilde1{0.0};  // gamma1 + g1^2 / kappa
    double gamma_tilde2{0.0};  // gamma2 + g2^2 / kappa
    double s{0.0};
};

AdiabaticModel build_adiabatic_model(const SystemParams& params);

// Slaved cavity amplitude for given magnon amplitudes (undriven).
cplx slaved_cavity_amplitude(const SystemParams& params, const Vector2c& magnons);

// Unitary map from (a, m1, m2) to the normal modes of the undamped symmetric
// system: A = (m1 - m2)/sqrt2 (dark), B = (a + (m1 + m2)/sqrt2)/sqrt2,
// C = (a - (m1 + m2)/sqrt2)/sqrt2.
struct PolaritonBasis {
    Matrix3c transform;
};

PolaritonBasis polariton_basis();

// Undamped Hamiltonian expressed in the (A, B, C) basis. Requires g1 == g2;
// all damping rates are ignored.
Matrix3c polariton_transform(const SystemParams& params);

// Collapse operator sigma = sum_k coefficients[k] * m_k applied with the
// Liouvillian rate * (2 sigma rho sigma^+ - sigma^+ sigma rho - rho sigma^+ sigma).
struct Dissipator {
    double rate{0.0};
    Eigen::VectorXcd coefficients;
};

// Drift M of the first moments, d<m>/dt = M <m>, generated by
// H = sum_k detuning_k m_k^+ m_k and the listed dissipators.
Matrix2c lindblad_mean_field_drift(const Vector2c& detunings, std::span<const Dissipator> dissipators);

// gamma1 L(m1), gamma2 L(m2) and 2 Gamma L((m1 + m2)/sqrt2) with Gamma = g^2/kappa.
// Requires g1 == g2.
std::vector<Dissipator> common_reservoir_dissipators(const SystemParams& params);

}  // namespace cavmag
