#pragma once

#include <stdexcept>
#include <string>

namespace cavmag {

// Mode ordering used by every vector and matrix in the library.
enum class Mode : int { Cavity = 0, Magnon1 = 1, Magnon2 = 2 };

constexpr int index(Mode m) noexcept { return static_cast<int>(m); }

// Reduced Planck constant in J*s (CODATA 2014 value).
inline constexpr double kHbar = 1.0545718e-34;

class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string field, const std::string& what)
        : std::invalid_argument(what), field_(std::move(field)) {}
    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// Rates and detunings of the two-magnon / one-cavity system, all in the same
// rate unit (kappa = 1 by convention). s is half the magnon frequency
// splitting; the cavity sits at the magnon midpoint.
struct SystemParams {
    double kappa{1.0};
    double gamma1{0.01};
    double gamma2{0.01};
    double g1{0.2};
    double g2{0.2};
    double s{0.0};

    static SystemParams symmetric(double kappa, double gamma, double g, double s) {
        return SystemParams{kappa, gamma, gamma, g, g, s};
    }

    // Cavity-induced collective rate g1*g2/kappa.
    double induced_rate() const noexcept { return g1 * g2 / kappa; }

    bool symmetric_couplings() const noexcept { return g1 == g2; }
    bool symmetric_damping() const noexcept { return gamma1 == gamma2; }

    SystemParams with_s(double value) const noexcept {
        SystemParams p = *this;
        p.s = value;
        return p;
    }

    // Throws ParameterError naming the offending field.
    void validate() const;

    bool operator==(const SystemParams&) const = default;
};

struct DriveParams {
    double delta{0.0};      // drive detuning from the cavity
    double amplitude{1.0};  // sqrt(photon flux)

    DriveParams with_delta(double value) const noexcept { return DriveParams{value, amplitude}; }

    void validate() const;

    bool operator==(const DriveParams&) const = default;
};

// sqrt(P / (hbar * omega_d)) for a drive of power P (W) at angular frequency
// omega_d (rad/s). The result is in sqrt(photons/s).
double drive_amplitude_from_power(double power_watts, double drive_angular_frequency);

}  // namespace cavmag
