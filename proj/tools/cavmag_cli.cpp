#include "cavmag/run.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv) {
    CLI::App app{"Cavity-mediated magnon-magnon coupling: eigenvalue, response, scattering and dynamics sweeps"};

    std::string config_path;
    std::string output_path;
    std::string format;
    std::vector<std::string> sets;
    bool print_config = false;
    app.add_option("-c,--config", config_path, "Run configuration file")->required();
    app.add_option("-o,--output", output_path, "Output path (overrides [output] path)");
    app.add_option("-f,--format", format, "Output format (overrides [output] format)")
        ->check(CLI::IsMember({"csv", "json", "both"}));
    app.add_option("--set", sets, "Override a config entry, e.g. --set system.s=0.04 (repeatable)");
    app.add_flag("--print-config", print_config, "Print the validated configuration and exit");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cavmag::kExitConfigError;
    }

    std::ifstream in(config_path, std::ios::binary);
    if (!in) {
        std::cerr << "config error: cannot open " << config_path << '\n';
        return cavmag::kExitConfigError;
    }
    std::stringstream buf;
    buf << in.rdbuf();

    cavmag::ConfigOverrides overrides;
    for (const auto& s : sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos || eq == 0) {
            std::cerr << "config error: --set expects section.key=value, got '" << s << "'\n";
            return cavmag::kExitConfigError;
        }
        overrides[s.substr(0, eq)] = s.substr(eq + 1);
    }
    if (!output_path.empty()) {
        overrides["output.path"] = output_path;
    }
    if (!format.empty()) {
        overrides["output.format"] = format;
    }

    cavmag::RunConfig config;
    try {
        config = cavmag::parse_config(buf.str(), overrides);
    } catch (const cavmag::ConfigError& e) {
        std::cerr << "config error: field '" << e.field() << "': " << e.what() << '\n';
        return cavmag::kExitConfigError;
    }
    if (print_config) {
        std::cout << cavmag::to_config_text(config);
        return cavmag::kExitOk;
    }
    return cavmag::run(config, std::cerr);
}
