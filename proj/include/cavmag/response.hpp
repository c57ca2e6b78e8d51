#pragma once

#include "cavmag/hamiltonian.hpp"
#include "cavmag/spectra.hpp"

#include <span>
#include <utility>
#include <vector>

namespace cavmag {

// Steady state of the cavity-driven system at one drive detuning.
struct ResponsePoint {
    double delta{0.0};
    cplx a;
    cplx m1;
    cplx m2;
    double total_spincurrent{0.0};  // |m1|^2 + |m2|^2
    cplx dark_amplitude;            // (m1 - m2)/sqrt2
    cplx r;                         // t - 1
    cplx t;                         // sqrt(kappa) a / E; zero when E == 0

    Vector3c state() const { return Vector3c(a, m1, m2); }
};

struct Peak {
    double delta{0.0};
    double height{0.0};
};

struct SpectrumSweep {
    std::vector<double> grid;
    std::vector<ResponsePoint> points;
    std::vector<Peak> peaks;
};

// X = -i (H - delta)^{-1} F by LU solve with one refinement step. Throws
// NumericalError when H - delta is singular to working precision.
ResponsePoint steady_state(const SystemParams& params, const DriveParams& drive);

// Closed-form magnon amplitudes exactly as they are usually quoted:
//   m1 = -i sqrt(kappa) E g1 (s + delta + i gamma1) / D
//   m2 =  i sqrt(kappa) E g2 (s - delta - i gamma1) / D
// D = (delta + i kappa)(s - delta - i gamma1)(s + delta + i gamma2)
//     + g1^2 (s + delta + i gamma2) - g2^2 (s - delta - i gamma1).
// Only equal to the linear solve when gamma1 == gamma2: the cofactor for m1
// carries gamma2, not gamma1.
std::pair<cplx, cplx> analytic_magnon_response(const SystemParams& params, const DriveParams& drive);

// Strict three-point local maxima; with refine, a parabola through each
// maximum and its neighbours places the peak between grid points.
std::vector<Peak> detect_peaks(std::span<const double> grid, std::span<const double> values, bool refine = false);

SpectrumSweep spincurrent_spectrum(const SystemParams& params, std::span<const double> delta_grid, double amplitude,
                                   bool refine_peaks = false);

// |m1|^2 + |m2|^2 at delta = 0 from the linear solve. Requires the fully
// symmetric case kappa == gamma1 == gamma2, g1 == g2.
double resonance_peak_height(const SystemParams& params, double amplitude);

struct ScatteringCoefficients {
    cplx r;
    cplx t;
};

// t = sqrt(kappa) a / E and r = t - 1 from the exact steady state.
ScatteringCoefficients reflection_transmission(const SystemParams& params, const DriveParams& drive);

cplx dark_mode_amplitude(const SystemParams& params, const DriveParams& drive);

}  // namespace cavmag
