#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pimlab/conditions.hpp"
#include "pimlab/experiments.hpp"
#include "pimlab/solver.hpp"

namespace pimlab {

struct SimulationConfig {
    double horizon = 1.0;
    std::size_t stride = 10;
    InitialFamily family = InitialFamily::random_positive_fourier;
    double amplitude = 1.0;
    std::uint64_t seed = 1;
};

/// One document shared by every subcommand.
///
///   {
///     "operator":     {"domain_length": 100, "grid_points": 128, "modes": 128},
///     "delay":        {"r": 0.5, "m": 50},
///     "kernel":       {"M_xi": 8e-4, "plus_integral": 6e-5, "minus_integral": 1.8e-4}
///                  or {"M_xi": ..., "xi_plus": [...], "xi_minus": [...]},
///     "nonlinearity": {"kind": "nicholson", "p": 1}
///                  or {"kind": "bounded_custom", "M_b": ..., "L_b": ...},
///     "variant":      "full",
///     "conditions":   {"N": 1, "mu": 0.0015},
///     "simulation":   {"horizon": 25, "stride": 10, "family": "...", "amplitude": 1, "seed": 1},
///     "experiments":  {"trials": 100, "seed": 1, "horizon": 25, "family": "...", ...},
///     "synthesis":    {"plus_margin": 0.1, "minus_position": 0.5,
///                      "r_grid": {"min": 1e-3, "max": 10, "points": 60}, "xi_grid": {...}}
///   }
///
/// operator, delay, kernel and nonlinearity are required. Unknown keys are rejected.
struct RunConfig {
    ProblemSpec problem;
    std::size_t N = 1;
    std::optional<double> mu;
    SimulationConfig simulation;
    ExperimentConfig experiment;
    SynthesisOptions synthesis;
    std::string canonical;  // the parsed document re-serialized, for input echo
};

/// Throws ConfigError carrying the key path of the first problem found.
RunConfig parse_run_config(std::string_view text);
RunConfig load_run_config(const std::string& path);

}  // namespace pimlab
