#include "cavmag/spectra.hpp"

#include "cavmag/cubic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace cavmag {

namespace {

bool all_finite(const auto& m) {
    return m.array().isFinite().all();
}

std::vector<cplx> raw_spectrum(const SystemParams& p, SpectrumModel model) {
    if (model == SpectrumModel::Full) {
        const auto ev = eigenvalues_3x3(build_full_hamiltonian(p));
        return {ev.begin(), ev.end()};
    }
    const auto ev = eigenvalues_2x2(build_adiabatic_model(p).matrix);
    return {ev.begin(), ev.end()};
}

double min_pair_separation(const std::vector<cplx>& v) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            best = std::min(best, std::abs(v[i] - v[j]));
        }
    }
    return best;
}

std::pair<std::size_t, std::size_t> closest_pair(const std::vector<cplx>& v) {
    std::pair<std::size_t, std::size_t> out{0, 1};
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = i + 1; j < v.size(); ++j) {
            const double d = std::abs(v[i] - v[j]);
            if (d < best) {
                best = d;
                out = {i, j};
            }
        }
    }
    return out;
}

}  // namespace

Spectrum3 eigenvalues_3x3(const Matrix3c& h) {
    if (!all_finite(h)) {
        throw std::invalid_argument("eigenvalues_3x3: non-finite matrix entry");
    }
    return solve_cubic(characteristic_polynomial(h));
}

Spectrum2 eigenvalues_2x2(const Matrix2c& h) {
    if (!all_finite(h)) {
        throw std::invalid_argument("eigenvalues_2x2: non-finite matrix entry");
    }
    const cplx mean = 0.5 * (h(0, 0) + h(1, 1));
    const cplx half_diff = 0.5 * (h(0, 0) - h(1, 1));
    const cplx root = std::sqrt(half_diff * half_diff + h(0, 1) * h(1, 0));
    return {mean + root, mean - root};
}

Spectrum3 closed_form_symmetric(const SystemParams& p) {
    p.validate();
    if (p.gamma1 != p.kappa || p.gamma2 != p.kappa) {
        throw ParameterError("gamma1", "closed form requires gamma1 == gamma2 == kappa");
    }
    if (!p.symmetric_couplings()) {
        throw ParameterError("g2", "closed form requires g1 == g2");
    }
    const cplx base{0.0, -p.kappa};
    const double split = std::sqrt(p.s * p.s + 2.0 * p.g1 * p.g1);
    return {base, base + split, base - split};
}

Spectrum3 weak_coupling_approx(const SystemParams& p) {
    p.validate();
    const double gamma_c = p.induced_rate();
    const double g_sq_sum = p.g1 * p.g1 + p.g2 * p.g2;
    const cplx l0 = cplx{0.0, -p.kappa} * (1.0 - g_sq_sum / (p.s * p.s + p.kappa * p.kappa));
    const cplx root = kI * std::sqrt(cplx{gamma_c * gamma_c - p.s * p.s, 0.0});
    const cplx centre{0.0, -gamma_c};
    return {l0, centre + root, centre - root};
}

Spectrum2 adiabatic_eigenvalues(const AdiabaticModel& model) {
    if (model.gamma_tilde1 != model.gamma_tilde2) {
        throw ParameterError("gamma2", "closed-form adiabatic eigenvalues require equal dressed decay rates");
    }
    const cplx centre{0.0, -model.gamma_tilde1};
    const cplx root = std::sqrt(cplx{model.s * model.s - model.Gamma * model.Gamma, 0.0});
    return {centre + root, centre - root};
}

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
    if (!std::isfinite(lo) || !std::isfinite(hi)) {
        throw std::invalid_argument("grid bounds must be finite");
    }
    if (n == 0) {
        throw std::invalid_argument("grid needs at least one point");
    }
    if (n == 1) {
        return {lo};
    }
    if (!(hi > lo)) {
        throw std::invalid_argument("empty range: max must exceed min");
    }
    std::vector<double> out(n);
    const double step = (hi - lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = lo + step * static_cast<double>(i);
    }
    out.back() = hi;
    return out;
}

EigenBranchSet track_branches(std::vector<double> sweep_values, std::vector<std::vector<cplx>> raw) {
    if (sweep_values.size() != raw.size() || raw.empty()) {
        throw std::invalid_argument("track_branches: need one eigenvalue list per sweep value");
    }
    const std::size_t k = raw.front().size();
    for (const auto& r : raw) {
        if (r.size() != k) {
            throw std::invalid_argument("track_branches: inconsistent branch count");
        }
    }

    EigenBranchSet out;
    out.sweep_values = std::move(sweep_values);
    out.branches.reserve(raw.size());
    out.branches.push_back(raw.front());

    std::vector<std::size_t> perm(k);
    for (std::size_t i = 1; i < raw.size(); ++i) {
        const auto& prev = out.branches.back();
        const auto& next = raw[i];

        std::iota(perm.begin(), perm.end(), 0);
        std::vector<std::size_t> best = perm;
        double best_cost = std::numeric_limits<double>::infinity();
        do {
            double cost = 0.0;
            for (std::size_t b = 0; b < k; ++b) {
                cost += std::abs(next[perm[b]] - prev[b]);
            }
            if (cost < best_cost) {
                best_cost = cost;
                best = perm;
            }
        } while (std::next_permutation(perm.begin(), perm.end()));

        std::vector<cplx> assigned(k);
        double max_step = 0.0;
        for (std::size_t b = 0; b < k; ++b) {
            assigned[b] = next[best[b]];
            max_step = std::max(max_step, std::abs(assigned[b] - prev[b]));
        }
        const double separation = std::min(min_pair_separation(prev), min_pair_separation(assigned));
        if (max_step >= 0.5 * separation) {
            out.ambiguous_intervals.push_back(i - 1);
        }
        out.branches.push_back(std::move(assigned));
    }

    // Label branches at the endpoint farthest from s = 0.
    const std::size_t end = std::abs(out.sweep_values.back()) >= std::abs(out.sweep_values.front())
                                ? out.size() - 1
                                : 0;
    const double s_end = out.sweep_values[end];
    const auto& at_end = out.branches[end];
    std::vector<bool> taken(k, false);
    auto closest_to = [&](auto score) {
        std::size_t pick = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t b = 0; b < k; ++b) {
            if (!taken[b] && score(at_end[b]) < best) {
                best = score(at_end[b]);
                pick = b;
            }
        }
        taken[pick] = true;
        return pick;
    };
    if (s_end == 0.0 && k == 3) {
        // no detuning to label by: cavity is the most damped branch
        out.cavity_branch = closest_to([](cplx z) { return z.imag(); });
        out.magnon1_branch = closest_to([](cplx z) { return -z.real(); });
        out.magnon2_branch = closest_to([](cplx) { return 0.0; });
    } else {
        out.magnon1_branch = closest_to([&](cplx z) { return std::abs(z.real() - s_end); });
        out.magnon2_branch = closest_to([&](cplx z) { return std::abs(z.real() + s_end); });
        if (k == 3) {
            out.cavity_branch = closest_to([](cplx) { return 0.0; });
        }
    }
    return out;
}

EigenBranchSet sweep_eigenvalues(const SystemParams& base, std::vector<double> s_values, SpectrumModel model) {
    if (s_values.empty()) {
        throw std::invalid_argument("sweep_eigenvalues: empty sweep");
    }
    std::vector<std::vector<cplx>> raw;
    raw.reserve(s_values.size());
    for (double s : s_values) {
        raw.push_back(raw_spectrum(base.with_s(s), model));
    }
    return track_branches(std::move(s_values), std::move(raw));
}

EigenBranchSet sweep_eigenvalues(const SystemParams& base, double s_min, double s_max, std::size_t n_points,
                                 SpectrumModel model) {
    return sweep_eigenvalues(base, uniform_grid(s_min, s_max, n_points), model);
}

double coalescence_gap(const SystemParams& base, double s, SpectrumModel model) {
    return min_pair_separation(raw_spectrum(base.with_s(s), model));
}

ExceptionalPoint find_exceptional_point(const SystemParams& base, double s_lo, double s_hi, SpectrumModel model,
                                        const ExceptionalPointOptions& options) {
    base.validate();
    if (!(s_hi > s_lo)) {
        throw std::invalid_argument("find_exceptional_point: empty bracket");
    }
    const std::size_t n = std::max<std::size_t>(options.coarse_points, 3);
    const auto grid = uniform_grid(s_lo, s_hi, n);
    auto gap = [&](double s) { return coalescence_gap(base, s, model); };

    std::size_t best = 0;
    double best_gap = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double v = gap(grid[i]);
        if (v < best_gap) {
            best_gap = v;
            best = i;
        }
    }
    double a = grid[best == 0 ? 0 : best - 1];
    double b = grid[std::min(best + 1, n - 1)];

    // Golden-section refinement. The gap has a square-root cusp at an EP, so
    // s is refined past options.s_resolution until the gap itself is within
    // tolerance or the bracket reaches floating-point resolution.
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    const double s_tol = options.s_resolution * base.kappa;
    const double gap_tol = options.gap_tolerance * base.kappa;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = gap(c);
    double fd = gap(d);
    for (int iter = 0; iter < 400; ++iter) {
        const double width = b - a;
        const double floor = 8.0 * std::numeric_limits<double>::epsilon() * std::max({std::abs(a), std::abs(b), base.kappa});
        if (width <= floor) {
            break;
        }
        if (width <= s_tol && std::min(fc, fd) <= gap_tol) {
            break;
        }
        if (fc <= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = gap(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = gap(d);
        }
    }
    const double location = fc <= fd ? c : d;
    const double final_gap = std::min({fc, fd, gap(location)});

    if (final_gap > gap_tol) {
        throw NumericalError("no exceptional point in [" + std::to_string(s_lo) + ", " + std::to_string(s_hi) +
                             "]: minimum gap " + std::to_string(final_gap) + " exceeds tolerance");
    }

    const SystemParams at = base.with_s(location);
    const auto spectrum = raw_spectrum(at, model);
    const auto [i, j] = closest_pair(spectrum);
    const cplx value = 0.5 * (spectrum[i] + spectrum[j]);

    // An EP is defective: (M - lambda) keeps rank n-1. A plain crossing of
    // decoupled modes drops the rank by two.
    Eigen::MatrixXcd shifted;
    if (model == SpectrumModel::Full) {
        shifted = build_full_hamiltonian(at) - value * Matrix3c::Identity();
    } else {
        shifted = build_adiabatic_model(at).matrix - value * Matrix2c::Identity();
    }
    const Eigen::VectorXd sv = Eigen::JacobiSVD<Eigen::MatrixXcd>(shifted).singularValues();
    const double second_smallest = sv(sv.size() - 2);
    if (second_smallest <= 10.0 * gap_tol) {
        throw NumericalError("degeneracy at s = " + std::to_string(location) +
                             " is a plain crossing, not an exceptional point");
    }
    return ExceptionalPoint{location, value, final_gap};
}

}  // namespace cavmag
