#include "cavmag/hamiltonian.hpp"

#include <cmath>
#include <string>

namespace cavmag {

Matrix3c build_full_hamiltonian(const SystemParams& params) {
    params.validate();
    Matrix3c h;
    h << cplx{0.0, -params.kappa}, params.g1, params.g2,
         params.g1, cplx{params.s, -params.gamma1}, 0.0,
         params.g2, 0.0, cplx{-params.s, -params.gamma2};
    return h;
}

EffectiveHamiltonian build_driven_system(const SystemParams& params, const DriveParams& drive) {
    drive.validate();
    EffectiveHamiltonian out;
    out.matrix = build_full_hamiltonian(params) - drive.delta * Matrix3c::Identity();
    out.force = Vector3c(std::sqrt(params.kappa) * drive.amplitude, 0.0, 0.0);
    return out;
}

AdiabaticModel build_adiabatic_model(const SystemParams& params) {
    params.validate();
    AdiabaticModel model;
    model.Gamma = params.g1 * params.g2 / params.kappa;
    model.gamma_tilde1 = params.gamma1 + params.g1 * params.g1 / params.kappa;
    model.gamma_tilde2 = params.gamma2 + params.g2 * params.g2 / params.kappa;
    model.s = params.s;
    const cplx coupling{0.0, -model.Gamma};
    model.matrix << cplx{params.s, -model.gamma_tilde1}, coupling,
                    coupling, cplx{-params.s, -model.gamma_tilde2};
    return model;
}

cplx slaved_cavity_amplitude(const SystemParams& params, const Vector2c& magnons) {
    return -kI * (params.g1 * magnons(0) + params.g2 * magnons(1)) / params.kappa;
}

PolaritonBasis polariton_basis() {
    const double h = 1.0 / std::sqrt(2.0);
    PolaritonBasis basis;
    // rows: A, B, C; columns: a, m1, m2
    basis.transform << 0.0, h, -h,
                       h, 0.5, 0.5,
                       h, -0.5, -0.5;
    return basis;
}

Matrix3c polariton_transform(const SystemParams& params) {
    params.validate();
    if (!params.symmetric_couplings()) {
        throw ParameterError("g2", "polariton basis requires g1 == g2");
    }
    Matrix3c h;
    h << 0.0, params.g1, params.g2,
         params.g1, params.s, 0.0,
         params.g2, 0.0, -params.s;
    const Matrix3c u = polariton_basis().transform;
    return u * h * u.adjoint();
}

Matrix2c lindblad_mean_field_drift(const Vector2c& detunings, std::span<const Dissipator> dissipators) {
    Matrix2c drift = Matrix2c::Zero();
    drift.diagonal() = -kI * detunings;
    for (std::size_t k = 0; k < dissipators.size(); ++k) {
        const auto& d = dissipators[k];
        if (d.coefficients.size() != 2) {
            throw std::invalid_argument("dissipator " + std::to_string(k) + " has " +
                                        std::to_string(d.coefficients.size()) +
                                        " coefficients, expected 2");
        }
        if (!(d.rate >= 0.0)) {
            throw std::invalid_argument("dissipator " + std::to_string(k) + " has negative rate");
        }
        // d<m_j>/dt picks up -rate * conj(c_j) * <sigma>.
        drift -= d.rate * (d.coefficients.conjugate() * d.coefficients.transpose());
    }
    return drift;
}

std::vector<Dissipator> common_reservoir_dissipators(const SystemParams& params) {
    params.validate();
    if (!params.symmetric_couplings()) {
        throw ParameterError("g2", "common-reservoir dissipator form requires g1 == g2");
    }
    const double h = 1.0 / std::sqrt(2.0);
    std::vector<Dissipator> out(3);
    out[0] = {params.gamma1, Eigen::Vector2cd(1.0, 0.0)};
    out[1] = {params.gamma2, Eigen::Vector2cd(0.0, 1.0)};
    out[2] = {2.0 * params.induced_rate(), Eigen::Vector2cd(h, h)};
    return out;
}

}  // namespace cavmag
