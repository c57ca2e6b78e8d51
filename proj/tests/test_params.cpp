#include "cavmag/params.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <numbers>

using namespace cavmag;

TEST(SystemParams, DefaultsAreWeakCouplingRegime) {
    const SystemParams p;
    EXPECT_EQ(p.kappa, 1.0);
    EXPECT_EQ(p.gamma1, 0.01);
    EXPECT_EQ(p.gamma2, 0.01);
    EXPECT_EQ(p.g1, 0.2);
    EXPECT_EQ(p.g2, 0.2);
    EXPECT_NO_THROW(p.validate());
    EXPECT_NEAR(p.induced_rate(), 0.04, 1e-15);
}

TEST(SystemParams, ValidationNamesField) {
    auto field_of = [](SystemParams p) {
        try {
            p.validate();
        } catch (const ParameterError& e) {
            return e.field();
        }
        return std::string{};
    };
    SystemParams p;
    p.kappa = 0.0;
    EXPECT_EQ(field_of(p), "kappa");
    p = SystemParams{};
    p.gamma2 = -1e-3;
    EXPECT_EQ(field_of(p), "gamma2");
    p = SystemParams{};
    p.g1 = std::numeric_limits<double>::quiet_NaN();
    EXPECT_EQ(field_of(p), "g1");
    p = SystemParams{};
    p.s = std::numeric_limits<double>::infinity();
    EXPECT_EQ(field_of(p), "s");
    p = SystemParams{};
    p.s = -123.0;  // any finite detuning is allowed
    EXPECT_EQ(field_of(p), "");
}

TEST(DriveAmplitude, ZeroPowerGivesZero) {
    EXPECT_EQ(drive_amplitude_from_power(0.0, 1.0), 0.0);
}

TEST(DriveAmplitude, OneMilliwattAtTenGigahertz) {
    const double omega = 2.0 * std::numbers::pi * 1e10;
    const double e = drive_amplitude_from_power(1e-3, omega);
    // direct evaluation of sqrt(P / (hbar omega)) with hbar = 1.0545718e-34
    EXPECT_NEAR(e, 12284910276.007067, 1e-3);
    EXPECT_NEAR(e / 1.2288e10, 1.0, 1e-3);
}

TEST(DriveAmplitude, SquareRootScaling) {
    const double a = drive_amplitude_from_power(2e-3, 5e10);
    const double b = drive_amplitude_from_power(8e-3, 5e10);
    EXPECT_NEAR(b / a, 2.0, 1e-14);
}

TEST(DriveAmplitude, RejectsNonPositiveFrequency) {
    EXPECT_THROW(drive_amplitude_from_power(1e-3, 0.0), ParameterError);
    EXPECT_THROW(drive_amplitude_from_power(1e-3, -1.0), ParameterError);
    EXPECT_THROW(drive_amplitude_from_power(-1e-3, 1.0), ParameterError);
}
