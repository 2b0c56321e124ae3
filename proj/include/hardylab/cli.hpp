#pragma once

// Command-line front end. One binary, subcommands norm, primitive, witness, blowup,
// family, perturb, scan and hardy-ineq; JSON or CSV on stdout or --out.

#include "hardylab/arc.hpp"

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace hardylab {

enum class OutputFormat { Json, Csv };

struct RunConfig {
    std::string command;
    std::string function;          ///< expression text; empty selects the command's default
    std::string g = "poly:1";      ///< perturb: the bounded function g
    double p = 1.0;
    std::vector<double> a;         ///< one or more exponents, entries may be inf
    std::optional<ArcSpec> arc;    ///< unset: command default
    int k_max = 16;
    double points_scale = 1.0;
    int n_arcs = 8;
    int m = 8;
    int halvings = 10;
    int terms = 0;                 ///< series length; 0 selects the command default
    bool of_primitive = false;     ///< scan: scan F(f) instead of f
    std::uint64_t seed = 1;
    std::string out;               ///< empty: stdout
    OutputFormat format = OutputFormat::Json;

    /// Throws std::invalid_argument on any out-of-range field.
    void validate() const;
    nlohmann::json to_json() const;
};

/// Exit codes of run().
inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_inconclusive = 2;

/// Parses argv (flags override a --config key=value file). Returns std::nullopt after
/// printing help or a parse error; exit_code then holds the code to return.
std::optional<RunConfig> parse_command_line(int argc, const char* const* argv, std::ostream& out,
                                            std::ostream& err, int& exit_code);

/// Validates the config and runs the command, writing the report to config.out or out.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace hardylab
