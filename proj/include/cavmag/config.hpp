#pragma once

#include "cavmag/params.hpp"
#include "cavmag/spectra.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cavmag {

// Raised for malformed or invalid configuration. line() is 0 for semantic
// errors that are not tied to a particular line.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, int line, const std::string& what)
        : std::runtime_error(what), field_(std::move(field)), line_(line) {}
    const std::string& field() const noexcept { return field_; }
    int line() const noexcept { return line_; }

private:
    std::string field_;
    int line_;
};

enum class RunMode { EigSweep, ResponseSweep, ReflectionSweep, EpFind, AdiabaticCompare, Dynamics };
enum class OutputFormat { Csv, Json, Both };

std::string to_string(RunMode mode);
std::string to_string(OutputFormat format);
std::string to_string(SpectrumModel model);

struct SweepSpec {
    std::string variable;
    double min{0.0};
    double max{0.0};
    std::size_t points{0};
    std::size_t refine_points{0};  // extra points inserted into each ambiguous interval

    bool operator==(const SweepSpec&) const = default;
};

// Exactly one of amplitude or (power, frequency) is set.
struct DriveSpec {
    std::optional<double> amplitude;
    std::optional<double> power;      // W
    std::optional<double> frequency;  // rad/s
    double delta{0.0};

    double resolved_amplitude() const;

    bool operator==(const DriveSpec&) const = default;
};

struct DynamicsSpec {
    double t_end{100.0};
    double dt{0.01};
    std::size_t stride{1};
    double m1{0.0};  // initial magnon amplitudes; cavity starts slaved (or empty when both are 0)
    double m2{0.0};
    bool compare_adiabatic{false};

    bool operator==(const DynamicsSpec&) const = default;
};

struct RunConfig {
    RunMode mode{RunMode::EigSweep};
    SpectrumModel model{SpectrumModel::Full};
    SystemParams system{};
    std::optional<SweepSpec> sweep;
    DriveSpec drive{.amplitude = 1.0, .power = {}, .frequency = {}, .delta = 0.0};
    std::optional<DynamicsSpec> dynamics;
    std::string output_path{"cavmag_out.csv"};
    OutputFormat format{OutputFormat::Csv};
    bool refine_peaks{false};
    std::optional<double> kappa_hz;

    bool operator==(const RunConfig&) const = default;
};

// "section.key" (or "key" for top-level entries) -> value
using ConfigOverrides = std::map<std::string, std::string>;

// Parses the sectioned key = value format. Overrides replace or add entries
// before validation.
RunConfig parse_config(const std::string& text, const ConfigOverrides& overrides = {});

// Canonical text form; parse_config(to_config_text(c)) == c.
std::string to_config_text(const RunConfig& config);

// Formats a double with 17 significant digits.
std::string format_double(double value);

}  // namespace cavmag
