#pragma once

#include "cavmag/config.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace cavmag {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitNumericalError = 2;
inline constexpr int kCsvSchemaVersion = 1;

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

// Everything a run produces before it is written anywhere.
struct RunResult {
    Table table;
    std::string features_json;  // detected features (peaks, EPs, gaps) as a JSON object
};

// Evaluates the configured sweep. Throws NumericalError naming the failing
// sweep point.
RunResult execute(const RunConfig& config);

// "# schema=1 ..." comment line, header row, one row per point; LF endings,
// 17 significant digits.
std::string to_csv(const RunConfig& config, const Table& table);

// Sidecar document: config echo (sections of strings), canonical config
// text, and the features object.
std::string to_json_sidecar(const RunConfig& config, const RunResult& result);

// Rebuilds a RunConfig from the "config" object of a sidecar document.
RunConfig config_from_sidecar(const std::string& json_text);

// Path of the JSON sidecar for a given CSV output path (extension -> .json).
std::string sidecar_path(const std::string& output_path);

// Runs, writes outputs and reports problems to diag. Returns an exit code.
int run(const RunConfig& config, std::ostream& diag);

}  // namespace cavmag
