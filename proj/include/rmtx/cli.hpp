#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "rmtx/ensemble.hpp"
#include "rmtx/weights.hpp"

namespace rmtx::cli {

enum class Command { density, density_mc, smallest, smallest_mc, sop, jpdf_check, suite, split_test };

const char* command_name(Command c);

struct Grid {
    double lo = 0.0;
    double hi = 1.0;
    int points = 2;

    void validate() const;
    double at(int i) const { return lo + (hi - lo) * i / (points - 1); }
};

/// "lo:hi:points"; throws DomainError on malformed input.
Grid parse_grid(const std::string& text);
/// "lo:hi"
std::pair<double, double> parse_range(const std::string& text);

struct RunRequest {
    Command command = Command::density;
    TransitionParams params;
    std::optional<Grid> grid;
    std::optional<std::pair<double, double>> range;  // histogram range
    SamplerConfig mc;
    int bins = 60;
    int truncation_order = 2;
    std::string suite_name;
    bool a_explicit = false;  // suites use their own a-values unless --a was given
    std::string out_path;  // empty: CSV goes to the output stream
};

/// Shortest decimal string that parses back to the same double.
std::string format_double(double v);

/// Executes the request. Exit codes: 0 success, 2 domain error, 3 convergence error,
/// 4 validation failure. Tables and CSV go to `out`, diagnostics to `err`.
int run(const RunRequest& request, std::ostream& out, std::ostream& err);

/// Flag parsing front end used by the executable.
int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err);

}  // namespace rmtx::cli
