#include "cavmag/response.hpp"

#include <cmath>
#include <string>

namespace cavmag {

ResponsePoint steady_state(const SystemParams& params, const DriveParams& drive) {
    const EffectiveHamiltonian sys = build_driven_system(params, drive);
    const Vector3c rhs = -kI * sys.force;

    const Eigen::PartialPivLU<Matrix3c> lu(sys.matrix);
    const double rcond = lu.rcond();
    if (!(rcond > 1e-14)) {
        throw NumericalError("singular steady-state system at delta = " + std::to_string(drive.delta) +
                             " (rcond " + std::to_string(rcond) + ")");
    }
    Vector3c x = lu.solve(rhs);
    x += lu.solve(rhs - sys.matrix * x);
    if (!x.array().isFinite().all()) {
        throw NumericalError("non-finite steady state at delta = " + std::to_string(drive.delta));
    }

    ResponsePoint out;
    out.delta = drive.delta;
    out.a = x(index(Mode::Cavity));
    out.m1 = x(index(Mode::Magnon1));
    out.m2 = x(index(Mode::Magnon2));
    out.total_spincurrent = std::norm(out.m1) + std::norm(out.m2);
    out.dark_amplitude = (out.m1 - out.m2) / std::sqrt(2.0);
    if (drive.amplitude > 0.0) {
        out.t = std::sqrt(params.kappa) * out.a / drive.amplitude;
        out.r = out.t - 1.0;
    }
    return out;
}

std::pair<cplx, cplx> analytic_magnon_response(const SystemParams& params, const DriveParams& drive) {
    params.validate();
    drive.validate();
    const double s = params.s;
    const double dl = drive.delta;
    const cplx g1_term{s + dl, params.gamma2};       // s + delta + i gamma2
    const cplx minus_term{s - dl, -params.gamma1};   // s - delta - i gamma1
    const cplx d = cplx{dl, params.kappa} * minus_term * g1_term
                 + params.g1 * params.g1 * g1_term - params.g2 * params.g2 * minus_term;
    if (std::abs(d) == 0.0) {
        throw NumericalError("analytic_magnon_response: D = 0 at delta = " + std::to_string(dl));
    }
    const double drive_scale = std::sqrt(params.kappa) * drive.amplitude;
    const cplx m1 = -kI * drive_scale * params.g1 * cplx{s + dl, params.gamma1} / d;
    const cplx m2 = kI * drive_scale * params.g2 * minus_term / d;
    return {m1, m2};
}

std::vector<Peak> detect_peaks(std::span<const double> grid, std::span<const double> values, bool refine) {
    if (grid.size() != values.size()) {
        throw std::invalid_argument("detect_peaks: grid and values differ in length");
    }
    std::vector<Peak> peaks;
    for (std::size_t i = 1; i + 1 < values.size(); ++i) {
        const double left = values[i - 1];
        const double mid = values[i];
        const double right = values[i + 1];
        if (!(mid > left && mid > right)) {
            continue;
        }
        Peak p{grid[i], mid};
        if (refine) {
            const double h = 0.5 * (grid[i + 1] - grid[i - 1]);
            const double curvature = left - 2.0 * mid + right;
            if (curvature < 0.0) {
                const double offset = 0.5 * (left - right) / curvature;
                p.delta = grid[i] + offset * h;
                p.height = mid - 0.25 * (left - right) * offset;
            }
        }
        peaks.push_back(p);
    }
    return peaks;
}

SpectrumSweep spincurrent_spectrum(const SystemParams& params, std::span<const double> delta_grid, double amplitude,
                                   bool refine_peaks) {
    if (delta_grid.empty()) {
        throw std::invalid_argument("spincurrent_spectrum: empty drive grid");
    }
    SpectrumSweep sweep;
    sweep.grid.assign(delta_grid.begin(), delta_grid.end());
    sweep.points.reserve(delta_grid.size());
    std::vector<double> heights;
    heights.reserve(delta_grid.size());
    for (double dl : delta_grid) {
        sweep.points.push_back(steady_state(params, DriveParams{dl, amplitude}));
        heights.push_back(sweep.points.back().total_spincurrent);
    }
    sweep.peaks = detect_peaks(sweep.grid, heights, refine_peaks);
    return sweep;
}

double resonance_peak_height(const SystemParams& params, double amplitude) {
    params.validate();
    if (params.gamma1 != params.kappa || params.gamma2 != params.kappa || !params.symmetric_couplings()) {
        throw ParameterError("gamma1", "resonance_peak_height requires kappa == gamma1 == gamma2 and g1 == g2");
    }
    return steady_state(params, DriveParams{0.0, amplitude}).total_spincurrent;
}

ScatteringCoefficients reflection_transmission(const SystemParams& params, const DriveParams& drive) {
    if (!(drive.amplitude > 0.0)) {
        throw ParameterError("amplitude", "reflection/transmission need a nonzero drive amplitude");
    }
    const ResponsePoint p = steady_state(params, drive);
    return {p.r, p.t};
}

cplx dark_mode_amplitude(const SystemParams& params, const DriveParams& drive) {
    return steady_state(params, drive).dark_amplitude;
}

}  // namespace cavmag
