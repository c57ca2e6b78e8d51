#include "cavmag/run.hpp"

#include "cavmag/dynamics.hpp"
#include "cavmag/response.hpp"
#include "cavmag/spectra.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

namespace cavmag {

using nlohmann::ordered_json;

namespace {

ordered_json complex_json(cplx z) {
    return ordered_json{{"re", z.real()}, {"im", z.imag()}};
}

// Wraps per-point evaluation so numerical failures name the sweep point.
template <class F>
auto at_point(const std::string& variable, std::size_t i, double value, F&& f) {
    try {
        return f();
    } catch (const NumericalError& e) {
        throw NumericalError("sweep point " + std::to_string(i) + " (" + variable + " = " + format_double(value) +
                             "): " + e.what());
    }
}

void add_si_column(const RunConfig& cfg, Table& t, std::size_t source_column, const std::string& name,
                   bool reciprocal) {
    if (!cfg.kappa_hz) {
        return;
    }
    t.columns.push_back(name);
    for (auto& row : t.rows) {
        row.push_back(reciprocal ? row[source_column] / *cfg.kappa_hz : row[source_column] * *cfg.kappa_hz);
    }
}

std::vector<double> refined_grid(const EigenBranchSet& set, std::size_t extra) {
    std::vector<double> grid;
    std::size_t next_flag = 0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        grid.push_back(set.sweep_values[i]);
        if (next_flag < set.ambiguous_intervals.size() && set.ambiguous_intervals[next_flag] == i && i + 1 < set.size()) {
            const double a = set.sweep_values[i];
            const double b = set.sweep_values[i + 1];
            for (std::size_t k = 1; k <= extra; ++k) {
                grid.push_back(a + (b - a) * static_cast<double>(k) / static_cast<double>(extra + 1));
            }
            ++next_flag;
        }
    }
    return grid;
}

EigenBranchSet branch_sweep(const RunConfig& cfg, SpectrumModel model) {
    const auto& sw = *cfg.sweep;
    EigenBranchSet set = at_point("s", 0, sw.min, [&] {
        return sweep_eigenvalues(cfg.system, sw.min, sw.max, sw.points, model);
    });
    if (sw.refine_points > 0 && !set.ambiguous_intervals.empty()) {
        set = sweep_eigenvalues(cfg.system, refined_grid(set, sw.refine_points), model);
    }
    return set;
}

// Pairs two 2-element lists to minimise the larger distance.
double paired_deviation(cplx a0, cplx a1, cplx b0, cplx b1, bool& swapped) {
    const double direct = std::max(std::abs(a0 - b0), std::abs(a1 - b1));
    const double crossed = std::max(std::abs(a0 - b1), std::abs(a1 - b0));
    swapped = crossed < direct;
    return std::min(direct, crossed);
}

RunResult eig_sweep(const RunConfig& cfg) {
    const EigenBranchSet set = branch_sweep(cfg, cfg.model);
    RunResult out;
    Table& t = out.table;
    const bool full = set.cavity_branch.has_value();
    t.columns = full ? std::vector<std::string>{"s", "re_l0", "im_l0", "re_lp", "im_lp", "re_lm", "im_lm"}
                     : std::vector<std::string>{"s", "re_lp", "im_lp", "re_lm", "im_lm"};
    double min_gap = std::numeric_limits<double>::infinity();
    double min_gap_at = 0.0;
    for (std::size_t i = 0; i < set.size(); ++i) {
        const auto& b = set.branches[i];
        std::vector<double> row{set.sweep_values[i]};
        if (full) {
            row.push_back(b[*set.cavity_branch].real());
            row.push_back(b[*set.cavity_branch].imag());
        }
        const cplx lp = b[set.magnon1_branch];
        const cplx lm = b[set.magnon2_branch];
        row.insert(row.end(), {lp.real(), lp.imag(), lm.real(), lm.imag()});
        t.rows.push_back(std::move(row));
        const double gap = std::abs(lp.real() - lm.real());
        if (gap < min_gap) {
            min_gap = gap;
            min_gap_at = set.sweep_values[i];
        }
    }
    add_si_column(cfg, t, 0, "s_hz", false);

    ordered_json f;
    f["model"] = to_string(cfg.model);
    f["points"] = set.size();
    f["min_gap"] = min_gap;
    f["min_gap_location"] = min_gap_at;
    ordered_json amb = ordered_json::array();
    for (std::size_t i : set.ambiguous_intervals) {
        amb.push_back({set.sweep_values[i], set.sweep_values[i + 1]});
    }
    f["ambiguous_intervals"] = amb;
    out.features_json = f.dump();
    return out;
}

RunResult response_sweep(const RunConfig& cfg) {
    const auto& sw = *cfg.sweep;
    const auto grid = uniform_grid(sw.min, sw.max, sw.points);
    const double amp = cfg.drive.resolved_amplitude();
    RunResult out;
    Table& t = out.table;
    t.columns = {"delta", "re_a", "im_a", "re_m1", "im_m1", "re_m2", "im_m2", "total_spincurrent", "re_dark", "im_dark"};
    std::vector<double> heights;
    double max_dark = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const ResponsePoint p = at_point("delta", i, grid[i], [&] {
            return steady_state(cfg.system, DriveParams{grid[i], amp});
        });
        t.rows.push_back({p.delta, p.a.real(), p.a.imag(), p.m1.real(), p.m1.imag(), p.m2.real(), p.m2.imag(),
                          p.total_spincurrent, p.dark_amplitude.real(), p.dark_amplitude.imag()});
        heights.push_back(p.total_spincurrent);
        max_dark = std::max(max_dark, std::abs(p.dark_amplitude));
    }
    add_si_column(cfg, t, 0, "delta_hz", false);

    const auto peaks = detect_peaks(grid, heights, cfg.refine_peaks);
    ordered_json f;
    f["amplitude"] = amp;
    f["peak_count"] = peaks.size();
    ordered_json pj = ordered_json::array();
    for (const auto& p : peaks) {
        pj.push_back({{"delta", p.delta}, {"height", p.height}});
    }
    f["peaks"] = pj;
    f["max_dark_amplitude"] = max_dark;
    out.features_json = f.dump();
    return out;
}

RunResult reflection_sweep(const RunConfig& cfg) {
    const auto& sw = *cfg.sweep;
    const auto grid = uniform_grid(sw.min, sw.max, sw.points);
    const double amp = cfg.drive.resolved_amplitude();
    RunResult out;
    Table& t = out.table;
    t.columns = {"delta", "re_r", "im_r", "re_t", "im_t", "abs_r2", "abs_t2"};
    std::vector<double> r2;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto sc = at_point("delta", i, grid[i], [&] {
            return reflection_transmission(cfg.system, DriveParams{grid[i], amp});
        });
        t.rows.push_back({grid[i], sc.r.real(), sc.r.imag(), sc.t.real(), sc.t.imag(), std::norm(sc.r), std::norm(sc.t)});
        r2.push_back(std::norm(sc.r));
    }
    add_si_column(cfg, t, 0, "delta_hz", false);

    // Dips of |r|^2 are peaks of -|r|^2.
    std::vector<double> neg(r2.size());
    std::transform(r2.begin(), r2.end(), neg.begin(), [](double v) { return -v; });
    const auto dips = detect_peaks(grid, neg, false);

    ordered_json f;
    const auto centre = at_point("delta", 0, 0.0, [&] {
        return reflection_transmission(cfg.system, DriveParams{0.0, amp});
    });
    f["r_at_zero"] = complex_json(centre.r);
    f["t_at_zero"] = complex_json(centre.t);
    f["abs_r2_at_zero"] = std::norm(centre.r);
    f["dip_present"] = !dips.empty();
    ordered_json dj = ordered_json::array();
    for (const auto& d : dips) {
        dj.push_back({{"delta", d.delta}, {"abs_r2", -d.height}});
    }
    f["dips"] = dj;
    out.features_json = f.dump();
    return out;
}

RunResult ep_find(const RunConfig& cfg) {
    const auto& sw = *cfg.sweep;
    ExceptionalPointOptions opt;
    opt.coarse_points = std::max<std::size_t>(sw.points, 3);
    const ExceptionalPoint ep = find_exceptional_point(cfg.system, sw.min, sw.max, cfg.model, opt);
    RunResult out;
    out.table.columns = {"s_ep", "re_value", "im_value", "gap"};
    out.table.rows.push_back({ep.location, ep.degenerate_value.real(), ep.degenerate_value.imag(), ep.gap_at_location});
    add_si_column(cfg, out.table, 0, "s_ep_hz", false);

    ordered_json f;
    f["model"] = to_string(cfg.model);
    f["exceptional_point"] = {{"location", ep.location},
                              {"value", complex_json(ep.degenerate_value)},
                              {"gap", ep.gap_at_location}};
    f["induced_rate"] = cfg.system.induced_rate();
    out.features_json = f.dump();
    return out;
}

RunResult adiabatic_compare(const RunConfig& cfg) {
    const EigenBranchSet full = branch_sweep(cfg, SpectrumModel::Full);
    const EigenBranchSet reduced = sweep_eigenvalues(cfg.system, full.sweep_values, SpectrumModel::Adiabatic);
    RunResult out;
    Table& t = out.table;
    t.columns = {"s", "re_full_p", "im_full_p", "re_full_m", "im_full_m",
                 "re_ad_p", "im_ad_p", "re_ad_m", "im_ad_m", "deviation"};
    double worst = 0.0;
    double worst_at = 0.0;
    for (std::size_t i = 0; i < full.size(); ++i) {
        const cplx fp = full.branches[i][full.magnon1_branch];
        const cplx fm = full.branches[i][full.magnon2_branch];
        cplx ap = reduced.branches[i][reduced.magnon1_branch];
        cplx am = reduced.branches[i][reduced.magnon2_branch];
        bool swapped = false;
        const double dev = paired_deviation(fp, fm, ap, am, swapped);
        if (swapped) {
            std::swap(ap, am);
        }
        t.rows.push_back({full.sweep_values[i], fp.real(), fp.imag(), fm.real(), fm.imag(),
                          ap.real(), ap.imag(), am.real(), am.imag(), dev});
        if (dev > worst) {
            worst = dev;
            worst_at = full.sweep_values[i];
        }
    }
    add_si_column(cfg, t, 0, "s_hz", false);

    const double rate = cfg.system.induced_rate();
    ordered_json f;
    f["induced_rate"] = rate;
    f["max_deviation"] = worst;
    f["max_deviation_location"] = worst_at;
    f["max_deviation_over_induced_rate"] = rate > 0.0 ? worst / rate : std::numeric_limits<double>::infinity();
    out.features_json = f.dump();
    return out;
}

RunResult dynamics(const RunConfig& cfg) {
    const DynamicsSpec& d = *cfg.dynamics;
    const DriveParams drive{cfg.drive.delta, cfg.drive.resolved_amplitude()};
    const Vector2c magnons(d.m1, d.m2);
    const Vector3c x0(slaved_cavity_amplitude(cfg.system, magnons), magnons(0), magnons(1));
    const Trajectory traj = integrate_full(cfg.system, drive, x0, d.t_end, d.dt, d.stride);

    ResponsePoint fixed{};
    bool have_fixed = true;
    try {
        fixed = steady_state(cfg.system, drive);
    } catch (const NumericalError&) {
        have_fixed = false;
    }

    RunResult out;
    Table& t = out.table;
    t.columns = {"t", "re_a", "im_a", "re_m1", "im_m1", "re_m2", "im_m2", "residual"};
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const auto& x = traj.states[i];
        const double res = have_fixed ? (x - Eigen::VectorXcd(fixed.state())).norm()
                                      : std::numeric_limits<double>::quiet_NaN();
        t.rows.push_back({traj.times[i], x(0).real(), x(0).imag(), x(1).real(), x(1).imag(), x(2).real(), x(2).imag(), res});
    }
    add_si_column(cfg, t, 0, "t_s", true);

    ordered_json f;
    f["step"] = traj.step;
    f["final_residual"] = traj.final_residual;
    if (have_fixed) {
        f["steady_state"] = {{"a", complex_json(fixed.a)}, {"m1", complex_json(fixed.m1)}, {"m2", complex_json(fixed.m2)}};
    }
    if (d.compare_adiabatic) {
        f["adiabatic_deviation"] = adiabatic_validity_report(cfg.system, magnons, d.t_end, d.dt);
    }
    out.features_json = f.dump();
    return out;
}

// Splits canonical config text into {section: {key: value}}.
ordered_json config_echo(const RunConfig& cfg) {
    ordered_json echo = ordered_json::object();
    std::istringstream in(to_config_text(cfg));
    std::string line;
    std::string section;
    while (std::getline(in, line)) {
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            section = line.substr(1, line.size() - 2);
            echo[section] = ordered_json::object();
            continue;
        }
        const auto eq = line.find(" = ");
        const std::string key = line.substr(0, eq);
        const std::string value = line.substr(eq + 3);
        if (section.empty()) {
            echo[key] = value;
        } else {
            echo[section][key] = value;
        }
    }
    return echo;
}

}  // namespace

RunResult execute(const RunConfig& config) {
    switch (config.mode) {
        case RunMode::EigSweep: return eig_sweep(config);
        case RunMode::ResponseSweep: return response_sweep(config);
        case RunMode::ReflectionSweep: return reflection_sweep(config);
        case RunMode::EpFind: return ep_find(config);
        case RunMode::AdiabaticCompare: return adiabatic_compare(config);
        case RunMode::Dynamics: return dynamics(config);
    }
    throw std::logic_error("unhandled run mode");
}

std::string to_csv(const RunConfig& config, const Table& table) {
    std::string out = "# schema=" + std::to_string(kCsvSchemaVersion) + " mode=" + to_string(config.mode) +
                      " columns=";
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_double(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string to_json_sidecar(const RunConfig& config, const RunResult& result) {
    ordered_json doc;
    doc["schema"] = kCsvSchemaVersion;
    doc["mode"] = to_string(config.mode);
    doc["config"] = config_echo(config);
    doc["config_text"] = to_config_text(config);
    doc["columns"] = result.table.columns;
    doc["rows"] = result.table.rows.size();
    doc["features"] = ordered_json::parse(result.features_json);
    if (config.format == OutputFormat::Json) {
        doc["data"] = result.table.rows;
    }
    return doc.dump(2) + "\n";
}

RunConfig config_from_sidecar(const std::string& json_text) {
    const ordered_json doc = ordered_json::parse(json_text);
    const ordered_json& echo = doc.at("config");
    std::string text;
    for (const auto& [key, value] : echo.items()) {
        if (value.is_string()) {
            text += key + " = " + value.get<std::string>() + "\n";
        }
    }
    for (const auto& [section, body] : echo.items()) {
        if (!body.is_object()) {
            continue;
        }
        text += "[" + section + "]\n";
        for (const auto& [key, value] : body.items()) {
            text += key + " = " + value.get<std::string>() + "\n";
        }
    }
    return parse_config(text);
}

std::string sidecar_path(const std::string& output_path) {
    const auto slash = output_path.find_last_of('/');
    const auto dot = output_path.find_last_of('.');
    if (dot == std::string::npos || (slash != std::string::npos && dot < slash)) {
        return output_path + ".json";
    }
    return output_path.substr(0, dot) + ".json";
}

int run(const RunConfig& config, std::ostream& diag) {
    RunResult result;
    try {
        result = execute(config);
    } catch (const NumericalError& e) {
        diag << "numerical error: " << e.what() << '\n';
        return kExitNumericalError;
    } catch (const ParameterError& e) {
        diag << "config error: field '" << e.field() << "': " << e.what() << '\n';
        return kExitConfigError;
    } catch (const std::invalid_argument& e) {
        diag << "config error: " << e.what() << '\n';
        return kExitConfigError;
    }

    auto write = [&](const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        f << body;
        if (!f) {
            diag << "cannot write " << path << '\n';
            return false;
        }
        return true;
    };
    const bool csv = config.format != OutputFormat::Json;
    const bool json = config.format != OutputFormat::Csv;
    const std::string json_path = config.format == OutputFormat::Json && config.output_path.ends_with(".json")
                                      ? config.output_path
                                      : sidecar_path(config.output_path);
    if (csv && !write(config.output_path, to_csv(config, result.table))) {
        return kExitConfigError;
    }
    if (json && !write(json_path, to_json_sidecar(config, result))) {
        return kExitConfigError;
    }
    return kExitOk;
}

}  // namespace cavmag
