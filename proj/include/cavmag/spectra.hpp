#pragma once

#include "cavmag/hamiltonian.hpp"

#include <array>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace cavmag {

class NumericalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

using Spectrum3 = std::array<cplx, 3>;
using Spectrum2 = std::array<cplx, 2>;

// Roots of det(lambda I - h) = 0.
Spectrum3 eigenvalues_3x3(const Matrix3c& h);
Spectrum2 eigenvalues_2x2(const Matrix2c& h);

// {lambda_0, lambda_+, lambda_-} = {-i kappa, -i kappa +- sqrt(s^2 + 2 g^2)}.
// Valid only for kappa == gamma1 == gamma2 and g1 == g2.
Spectrum3 closed_form_symmetric(const SystemParams& params);

// Leading-order eigenvalues for g, |s| << kappa with magnon damping neglected:
// lambda_0 = -i kappa [1 - (g1^2 + g2^2)/(s^2 + kappa^2)],
// lambda_+- = -i Gamma +- i sqrt(Gamma^2 - s^2) with Gamma = g1 g2 / kappa.
// Returned as {lambda_0, lambda_+, lambda_-}.
Spectrum3 weak_coupling_approx(const SystemParams& params);

// -i gamma_tilde +- sqrt(s^2 - Gamma^2). Requires equal dressed decay rates,
// which holds for g1 == g2 and gamma1 == gamma2. Returned as {+, -}.
Spectrum2 adiabatic_eigenvalues(const AdiabaticModel& model);

enum class SpectrumModel { Full, Adiabatic };

// Eigenvalues along a uniform s grid, permuted so that each column is a
// continuous branch.
struct EigenBranchSet {
    std::vector<double> sweep_values;
    std::vector<std::vector<cplx>> branches;  // [point][branch]

    // Branch identities, assigned at the endpoint with the largest |s| and
    // carried along by continuity. cavity_branch is empty for 2x2 sweeps.
    std::optional<std::size_t> cavity_branch;
    std::size_t magnon1_branch{0};
    std::size_t magnon2_branch{1};

    // Interval i spans points i and i+1; listed when the step is too coarse
    // to separate nearly degenerate branches (e.g. around an EP), so either
    // assignment across it is equally valid.
    std::vector<std::size_t> ambiguous_intervals;

    std::size_t size() const noexcept { return sweep_values.size(); }
    std::size_t branch_count() const noexcept { return branches.empty() ? 0 : branches.front().size(); }
};

std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

// Branch-tracks raw eigenvalue lists by minimizing the summed displacement
// over all permutations between consecutive points (identity wins ties).
EigenBranchSet track_branches(std::vector<double> sweep_values, std::vector<std::vector<cplx>> raw);

EigenBranchSet sweep_eigenvalues(const SystemParams& base, double s_min, double s_max, std::size_t n_points,
                                 SpectrumModel model = SpectrumModel::Full);

// Same as above over an explicit (ordered) list of s values.
EigenBranchSet sweep_eigenvalues(const SystemParams& base, std::vector<double> s_values,
                                 SpectrumModel model = SpectrumModel::Full);

struct ExceptionalPoint {
    double location{0.0};
    cplx degenerate_value;
    double gap_at_location{0.0};
};

struct ExceptionalPointOptions {
    std::size_t coarse_points{201};
    double gap_tolerance{1e-6};    // in units of kappa
    double s_resolution{1e-8};     // in units of kappa
};

// Smallest pairwise eigenvalue separation at the given s.
double coalescence_gap(const SystemParams& base, double s, SpectrumModel model = SpectrumModel::Full);

// Golden-section search for the s that minimizes coalescence_gap inside
// [s_lo, s_hi]. Throws NumericalError when the minimum gap exceeds the
// tolerance or the degeneracy found is not defective (a plain crossing).
ExceptionalPoint find_exceptional_point(const SystemParams& base, double s_lo, double s_hi,
                                        SpectrumModel model = SpectrumModel::Full,
                                        const ExceptionalPointOptions& options = {});

}  // namespace cavmag
