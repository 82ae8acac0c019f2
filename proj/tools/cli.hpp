#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab::cli {

enum ExitCode : int { ok = 0, usage = 2, failure = 3 };

struct Preset {
    std::string name;
    ModelParams params;
    std::string landmark;  // published reference values
};

/// fig1-I ... fig5-II (m = 1, lambda = 0.09) plus a nonrobust example.
const std::vector<Preset>& presets();
const Preset* find_preset(std::string_view name);

struct Scenario {
    std::string name;
    ModelParams params;
    GridSpec grid;
    Tolerances tol;
    int order = 0;
};

/// Shortest of the 12-significant-digit general forms; "inf"/"-inf"/"nan"
/// for non-finite values. Independent of the global locale.
std::string format_number(double value);

/// Locale-independent parse of a whole string; nullopt on trailing junk.
std::optional<double> parse_number(std::string_view text);

/// Entry point without the program name; returns the process exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace ruinlab::cli
