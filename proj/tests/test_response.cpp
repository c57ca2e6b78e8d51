#include "cavmag/response.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace cavmag;

namespace {

std::vector<double> grid(double lo, double hi, std::size_t n) { return uniform_grid(lo, hi, n); }

double residual(const SystemParams& p, const DriveParams& d, const ResponsePoint& pt) {
    const EffectiveHamiltonian h = build_driven_system(p, d);
    return (h.matrix * pt.state() + kI * h.force).norm();
}

}  // namespace

TEST(SteadyState, BareCavity) {
    const SystemParams p{1.0, 0.01, 0.01, 0.0, 0.0, 0.3};
    for (double delta : {-1.0, 0.0, 0.5}) {
        const auto pt = steady_state(p, DriveParams{delta, 2.0});
        EXPECT_EQ(pt.m1, cplx(0.0));
        EXPECT_EQ(pt.m2, cplx(0.0));
        EXPECT_LE(std::abs(pt.a - kI * 2.0 / cplx{delta, 1.0}), 1e-14);
    }
    EXPECT_NEAR(std::abs(steady_state(SystemParams{4.0, 0.1, 0.1, 0.0, 0.0, 0.0}, DriveParams{0.0, 1.0}).a),
                1.0 / 2.0, 1e-15);
}

TEST(SteadyState, SymmetricResonanceMatchesClosedForm) {
    const auto pt = steady_state(SystemParams::symmetric(1.0, 1.0, 2.0, 0.0), DriveParams{0.0, 1.0});
    const auto [m1, m2] = oracle::symmetric_magnon_amplitudes(1.0, 2.0, 0.0, 0.0, 1.0);
    EXPECT_LE(std::abs(pt.m1 - m1), 1e-14);
    EXPECT_LE(std::abs(pt.m2 - m2), 1e-14);
    EXPECT_EQ(pt.m1, pt.m2);
    EXPECT_NEAR(std::abs(pt.m1), 2.0 / 9.0, 1e-15);
}

TEST(SteadyState, SymmetricDetunedMatchesClosedForm) {
    oracle::Rng rng(2);
    for (int n = 0; n < 100; ++n) {
        const double k = rng.uniform(0.2, 2.0), g = rng.uniform(0.0, 3.0), s = rng.uniform(-3, 3);
        const double delta = rng.uniform(-5, 5), e = rng.uniform(0.1, 3.0);
        const auto pt = steady_state(SystemParams::symmetric(k, k, g, s), DriveParams{delta, e});
        const auto [m1, m2] = oracle::symmetric_magnon_amplitudes(k, g, s, delta, e);
        EXPECT_LE(std::abs(pt.m1 - m1), 1e-12 * std::max(1.0, std::abs(m1)));
        EXPECT_LE(std::abs(pt.m2 - m2), 1e-12 * std::max(1.0, std::abs(m2)));
    }
}

TEST(SteadyState, ResidualAndDefinitions) {
    oracle::Rng rng(8);
    for (int n = 0; n < 200; ++n) {
        const SystemParams p{rng.uniform(0.1, 3), rng.uniform(0.001, 1), rng.uniform(0.001, 1),
                             rng.uniform(0, 3),   rng.uniform(0, 3),     rng.uniform(-3, 3)};
        const DriveParams d{rng.uniform(-5, 5), rng.uniform(0.1, 5)};
        const auto pt = steady_state(p, d);
        EXPECT_LE(residual(p, d, pt), 1e-12 * std::sqrt(p.kappa) * d.amplitude);
        EXPECT_EQ(pt.total_spincurrent, std::norm(pt.m1) + std::norm(pt.m2));
        EXPECT_EQ(pt.dark_amplitude, (pt.m1 - pt.m2) / std::sqrt(2.0));
        EXPECT_EQ(pt.t, std::sqrt(p.kappa) * pt.a / d.amplitude);
        EXPECT_EQ(pt.r, pt.t - 1.0);
    }
}

TEST(SteadyState, Linearity) {
    const SystemParams p{1.0, 0.02, 0.05, 0.3, 0.2, 0.1};
    const auto one = steady_state(p, DriveParams{0.07, 1.0});
    const auto three = steady_state(p, DriveParams{0.07, 3.0});
    EXPECT_LE(std::abs(three.a - 3.0 * one.a), 1e-13);
    EXPECT_LE(std::abs(three.m1 - 3.0 * one.m1), 1e-13);
    EXPECT_LE(std::abs(three.m2 - 3.0 * one.m2), 1e-13);
    EXPECT_NEAR(three.total_spincurrent, 9.0 * one.total_spincurrent, 1e-12 * three.total_spincurrent);
    EXPECT_LE(std::abs(three.t - one.t), 1e-14);
}

TEST(SteadyState, SingularSystemIsReported) {
    // undamped, uncoupled magnon driven exactly at its frequency
    const SystemParams p{1.0, 0.0, 0.0, 0.0, 0.0, 0.5};
    EXPECT_THROW(steady_state(p, DriveParams{0.5, 1.0}), NumericalError);
}

TEST(AnalyticResponse, AgreesWithLinearSolveForEqualDamping) {
    oracle::Rng rng(14);
    for (int n = 0; n < 200; ++n) {
        const double ga = rng.uniform(0.001, 1.0);
        const SystemParams p{rng.uniform(0.1, 3), ga, ga, rng.uniform(0, 3), rng.uniform(0, 3), rng.uniform(-3, 3)};
        const DriveParams d{rng.uniform(-5, 5), rng.uniform(0.1, 3)};
        const auto pt = steady_state(p, d);
        const auto [m1, m2] = analytic_magnon_response(p, d);
        EXPECT_LE(std::abs(m1 - pt.m1), 1e-10 * std::abs(pt.m1) + 1e-300) << "draw " << n;
        EXPECT_LE(std::abs(m2 - pt.m2), 1e-10 * std::abs(pt.m2) + 1e-300) << "draw " << n;
    }
}

TEST(AnalyticResponse, WeakCouplingExample) {
    const SystemParams p = SystemParams::symmetric(1.0, 0.01, 0.2, 0.04);
    const DriveParams d{0.04, 1.0};
    const auto pt = steady_state(p, d);
    // direct evaluation of the analytic formulas
    const cplx den = cplx{0.04, 1.0} * cplx{0.0, -0.01} * cplx{0.08, 0.01} + 0.04 * cplx{0.08, 0.01} -
                     0.04 * cplx{0.0, -0.01};
    const cplx m1 = -kI * 0.2 * cplx{0.08, 0.01} / den;
    const cplx m2 = kI * 0.2 * cplx{0.0, -0.01} / den;
    EXPECT_LE(std::abs(pt.m1 - m1), 1e-12 * std::abs(m1));
    EXPECT_LE(std::abs(pt.m2 - m2), 1e-12 * std::abs(m2));
}

TEST(AnalyticResponse, SymmetryOfAmplitudes) {
    const auto [m1, m2] = analytic_magnon_response(SystemParams::symmetric(1.0, 1.0, 2.0, 0.0), DriveParams{0.3, 1.0});
    EXPECT_LE(std::abs(m1 - m2), 1e-15);
    const auto [n1, n2] = analytic_magnon_response(SystemParams::symmetric(1.0, 1.0, 2.0, 0.5), DriveParams{0.3, 1.0});
    EXPECT_GT(std::abs(n1 - n2), 1e-3);
    // ratio of numerators (delta + s + i k) / (delta - s + i k)
    EXPECT_LE(std::abs(n1 / n2 - cplx{0.8, 1.0} / cplx{-0.2, 1.0}), 1e-13);
}

TEST(AnalyticResponse, UnequalDampingFinding) {
    // With gamma1 != gamma2 the quoted m1 numerator disagrees with the
    // linear solve; replacing gamma1 by gamma2 there restores agreement.
    const SystemParams p{1.0, 0.3, 0.05, 0.4, 0.6, 0.2};
    const DriveParams d{0.1, 1.0};
    const auto pt = steady_state(p, d);
    const auto [m1, m2] = analytic_magnon_response(p, d);
    EXPECT_GT(std::abs(m1 - pt.m1), 1e-3 * std::abs(pt.m1));
    EXPECT_LE(std::abs(m2 - pt.m2), 1e-12 * std::abs(pt.m2));
    const cplx corrected = m1 * cplx{p.s + d.delta, p.gamma2} / cplx{p.s + d.delta, p.gamma1};
    EXPECT_LE(std::abs(corrected - pt.m1), 1e-12 * std::abs(pt.m1));
}

TEST(DetectPeaks, StrictMaxima) {
    const std::vector<double> x{0, 1, 2, 3, 4, 5, 6};
    const std::vector<double> y{0, 2, 1, 1, 3, 3, 0};
    const auto peaks = detect_peaks(x, y);
    ASSERT_EQ(peaks.size(), 1u);  // the plateau at 3,3 is not strict
    EXPECT_EQ(peaks[0].delta, 1.0);
    EXPECT_EQ(peaks[0].height, 2.0);
}

TEST(DetectPeaks, ParabolicRefinement) {
    std::vector<double> x, y;
    for (int i = 0; i <= 20; ++i) {
        x.push_back(0.1 * i);
        y.push_back(-(x.back() - 0.93) * (x.back() - 0.93));
    }
    const auto peaks = detect_peaks(x, y, true);
    ASSERT_EQ(peaks.size(), 1u);
    EXPECT_NEAR(peaks[0].delta, 0.93, 1e-12);
    EXPECT_NEAR(peaks[0].height, 0.0, 1e-12);
}

namespace {

// Location of the largest spincurrent value for delta > 1 on a very fine grid,
// from the closed-form symmetric amplitudes.
double outer_peak_oracle(double k, double g, double s) {
    double best = 0.0, at = 0.0;
    for (int i = 1; i <= 700000; ++i) {
        const double delta = 1.0 + 1e-5 * i;
        const auto [m1, m2] = oracle::symmetric_magnon_amplitudes(k, g, s, delta, 1.0);
        const double v = std::norm(m1) + std::norm(m2);
        if (v > best) {
            best = v;
            at = delta;
        }
    }
    return at;
}

}  // namespace

TEST(SpincurrentSpectrum, StrongCouplingResonanceHasTwoPeaks) {
    const auto g = grid(-8, 8, 1601);
    const auto sweep = spincurrent_spectrum(SystemParams::symmetric(1.0, 1.0, 2.0, 0.0), g, 1.0);
    ASSERT_EQ(sweep.peaks.size(), 2u);
    const double step = g[1] - g[0];
    // with damping kappa the maximum of 1/|(D - r + i k)(D + r + i k)|^2 sits at sqrt(r^2 - k^2)
    EXPECT_NEAR(sweep.peaks[0].delta, -std::sqrt(7.0), 0.5 * step);
    EXPECT_NEAR(sweep.peaks[1].delta, std::sqrt(7.0), 0.5 * step);
    for (const auto& pt : sweep.points) {
        EXPECT_LE(std::abs(pt.dark_amplitude), 1e-12 * std::abs(pt.m1));
    }
}

TEST(SpincurrentSpectrum, DetunedStrongCouplingHasThreePeaks) {
    const auto g = grid(-8, 8, 1601);
    const auto sweep = spincurrent_spectrum(SystemParams::symmetric(1.0, 1.0, 2.0, 2.0), g, 1.0);
    ASSERT_EQ(sweep.peaks.size(), 3u);
    const double step = g[1] - g[0];
    const double outer = outer_peak_oracle(1.0, 2.0, 2.0);
    EXPECT_NEAR(sweep.peaks[0].delta, -outer, 0.5 * step);
    EXPECT_NEAR(sweep.peaks[1].delta, 0.0, 0.5 * step);
    EXPECT_NEAR(sweep.peaks[2].delta, outer, 0.5 * step);
    // damping pulls the outer maxima inside the eigenfrequencies +-sqrt(s^2 + 2 g^2)
    EXPECT_LT(outer, std::sqrt(12.0) - 0.2);
}

TEST(SpincurrentSpectrum, NarrowLinesSitAtEigenfrequencies) {
    const auto g = grid(-8, 8, 1601);
    const double step = g[1] - g[0];
    for (double s : {0.0, 1.0, 2.0}) {
        const auto sweep = spincurrent_spectrum(SystemParams::symmetric(0.05, 0.05, 2.0, s), g, 1.0);
        const double r = std::sqrt(s * s + 8.0);
        ASSERT_GE(sweep.peaks.size(), 2u);
        EXPECT_NEAR(sweep.peaks.front().delta, -r, 0.5 * step) << "s=" << s;
        EXPECT_NEAR(sweep.peaks.back().delta, r, 0.5 * step) << "s=" << s;
    }
}

TEST(SpincurrentSpectrum, WeakCouplingSinglePeak) {
    const auto g = grid(-0.5, 0.5, 1001);
    const auto sweep = spincurrent_spectrum(SystemParams::symmetric(1.0, 0.01, 0.2, 0.0), g, 1.0);
    ASSERT_EQ(sweep.peaks.size(), 1u);
    EXPECT_NEAR(sweep.peaks[0].delta, 0.0, 1e-12);
}

TEST(SpincurrentSpectrum, MirrorSymmetryUnderDetuningFlip) {
    const auto g = grid(-4, 4, 161);
    const auto plus = spincurrent_spectrum(SystemParams{1.0, 0.2, 0.2, 0.7, 0.7, 0.9}, g, 1.0);
    const auto minus = spincurrent_spectrum(SystemParams{1.0, 0.2, 0.2, 0.7, 0.7, -0.9}, g, 1.0);
    for (std::size_t i = 0; i < g.size(); ++i) {
        const double a = plus.points[i].total_spincurrent;
        const double b = minus.points[g.size() - 1 - i].total_spincurrent;
        EXPECT_NEAR(a, b, 1e-12 * std::max(a, 1e-12));
    }
}

TEST(SpincurrentSpectrum, PreservesGridOrder) {
    const std::vector<double> g{0.3, -0.1, 0.2};
    const auto sweep = spincurrent_spectrum(SystemParams{}, g, 1.0);
    ASSERT_EQ(sweep.points.size(), 3u);
    for (std::size_t i = 0; i < 3; ++i) {
        EXPECT_EQ(sweep.points[i].delta, g[i]);
    }
    EXPECT_THROW(spincurrent_spectrum(SystemParams{}, std::vector<double>{}, 1.0), std::invalid_argument);
}

TEST(PeakHeight, MinimalAtResonance) {
    const double h0 = resonance_peak_height(SystemParams::symmetric(1.0, 1.0, 2.0, 0.0), 1.0);
    for (double s = -3.0; s <= 3.0 + 1e-12; s += 0.05) {
        EXPECT_GE(resonance_peak_height(SystemParams::symmetric(1.0, 1.0, 2.0, s), 1.0), h0 - 1e-15) << "s=" << s;
    }
    EXPECT_EQ(resonance_peak_height(SystemParams::symmetric(1.0, 1.0, 0.0, 0.5), 1.0), 0.0);
    EXPECT_THROW(resonance_peak_height(SystemParams::symmetric(1.0, 0.5, 2.0, 0.0), 1.0), ParameterError);
}

TEST(PeakHeight, DenominatorPowerFinding) {
    // The height from the linear solve follows the squared-denominator form;
    // the single-power form is reported for comparison only.
    const double k = 1.0, g = 2.0, s = 1.0;
    const double solved = resonance_peak_height(SystemParams::symmetric(k, k, g, s), 1.0);
    const double squared = oracle::peak_height_squared(k, g, s, 1.0);
    const double quoted = oracle::peak_height_quoted(k, g, s, 1.0);
    EXPECT_NEAR(solved, squared, 1e-14);
    RecordProperty("solved", std::to_string(solved));
    RecordProperty("quoted", std::to_string(quoted));
    std::cout << "peak height s=1: solve " << solved << ", squared form " << squared << ", single-power form "
              << quoted << '\n';
}

TEST(Scattering, TransparencyWithoutMagnonDamping) {
    const auto sc = reflection_transmission(SystemParams::symmetric(1.0, 0.0, 0.2, 0.01), DriveParams{0.0, 1.0});
    EXPECT_LE(std::abs(sc.t - 1.0), 1e-10);
    EXPECT_LE(std::abs(sc.r), 1e-10);
}

TEST(Scattering, DampedResonanceValues) {
    const auto sc = reflection_transmission(SystemParams::symmetric(1.0, 0.01, 0.2, 0.04), DriveParams{0.0, 1.0});
    const double t = oracle::transmission_at_resonance(1.0, 0.01, 0.2, 0.04);
    EXPECT_NEAR(t, 0.68, 1e-12);
    EXPECT_LE(std::abs(sc.t - 0.68), 1e-10);
    EXPECT_LE(std::abs(sc.r + 0.32), 1e-10);
}

TEST(Scattering, BareCavity) {
    for (double delta : {-2.0, 0.0, 0.4}) {
        const auto sc = reflection_transmission(SystemParams{1.5, 0.1, 0.1, 0.0, 0.0, 0.3}, DriveParams{delta, 1.0});
        EXPECT_LE(std::abs(sc.t - kI * 1.5 / cplx{delta, 1.5}), 1e-14);
        EXPECT_NEAR(std::norm(sc.t) + std::norm(sc.r), 1.0, 1e-14);
    }
}

TEST(Scattering, MatchesQuotedTransmission) {
    oracle::Rng rng(9);
    for (int n = 0; n < 200; ++n) {
        const double k = rng.uniform(0.1, 3), ga = rng.uniform(0, 1), g = rng.uniform(0, 3), s = rng.uniform(-3, 3);
        const double delta = rng.uniform(-5, 5);
        const auto sc = reflection_transmission(SystemParams::symmetric(k, ga, g, s), DriveParams{delta, 1.0});
        const cplx t = oracle::transmission_symmetric(k, ga, g, s, delta);
        EXPECT_LE(std::abs(sc.t - t), 1e-10 * std::max(1.0, std::abs(t)));
    }
}

TEST(Scattering, UnitarityAndPassivity) {
    oracle::Rng rng(10);
    for (int n = 0; n < 200; ++n) {
        const double k = rng.uniform(0.1, 3), g = rng.uniform(0, 3), s = rng.uniform(-3, 3);
        const double delta = rng.uniform(-5, 5);
        const auto lossless = reflection_transmission(SystemParams::symmetric(k, 0.0, g, s), DriveParams{delta, 1.0});
        EXPECT_NEAR(std::norm(lossless.t) + std::norm(lossless.r), 1.0, 1e-10);
        const auto lossy = reflection_transmission(
            SystemParams{k, rng.uniform(0, 1), rng.uniform(0, 1), g, rng.uniform(0, 3), s}, DriveParams{delta, 1.0});
        EXPECT_LE(std::norm(lossy.t) + std::norm(lossy.r), 1.0 + 1e-10);
    }
}

TEST(Scattering, RequiresDrive) {
    EXPECT_THROW(reflection_transmission(SystemParams{}, DriveParams{0.0, 0.0}), ParameterError);
}

TEST(DarkMode, ExtinctAtSymmetricResonance) {
    for (double delta : {-3.0, 0.0, 1.0}) {
        EXPECT_LE(std::abs(dark_mode_amplitude(SystemParams::symmetric(1.0, 1.0, 2.0, 0.0), DriveParams{delta, 1.0})),
                  1e-12);
    }
}

TEST(DarkMode, GrowsWithDetuning) {
    double last = 0.0;
    for (double s = 0.05; s <= 0.5 + 1e-12; s += 0.05) {
        const double a = std::abs(dark_mode_amplitude(SystemParams::symmetric(1.0, 1.0, 2.0, s), DriveParams{0.0, 1.0}));
        EXPECT_GT(a, last) << "s=" << s;
        last = a;
    }
    EXPECT_GT(last, 1e-3);
}

TEST(DarkMode, UnequalCouplingsPopulateIt) {
    EXPECT_GT(std::abs(dark_mode_amplitude(SystemParams{1.0, 1.0, 1.0, 2.0, 1.5, 0.0}, DriveParams{0.0, 1.0})), 1e-3);
}
