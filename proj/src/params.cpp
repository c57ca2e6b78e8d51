#include "cavmag/params.hpp"

#include <cmath>

namespace cavmag {

namespace {

void require_finite(double v, const char* name) {
    if (!std::isfinite(v)) {
        throw ParameterError(name, std::string(name) + " must be finite");
    }
}

void require_nonnegative(double v, const char* name) {
    require_finite(v, name);
    if (v < 0.0) {
        throw ParameterError(name, std::string(name) + " must be >= 0");
    }
}

}  // namespace

void SystemParams::validate() const {
    require_finite(kappa, "kappa");
    if (kappa <= 0.0) {
        throw ParameterError("kappa", "kappa must be > 0");
    }
    require_nonnegative(gamma1, "gamma1");
    require_nonnegative(gamma2, "gamma2");
    require_nonnegative(g1, "g1");
    require_nonnegative(g2, "g2");
    require_finite(s, "s");
}

void DriveParams::validate() const {
    require_finite(delta, "delta");
    require_nonnegative(amplitude, "amplitude");
}

double drive_amplitude_from_power(double power_watts, double drive_angular_frequency) {
    require_nonnegative(power_watts, "power");
    require_finite(drive_angular_frequency, "frequency");
    if (drive_angular_frequency <= 0.0) {
        throw ParameterError("frequency", "drive frequency must be > 0");
    }
    return std::sqrt(power_watts / (kHbar * drive_angular_frequency));
}

}  // namespace cavmag
