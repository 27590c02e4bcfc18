#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "lk/common.hpp"
#include "lk/drivers.hpp"

namespace lk::cli {

// Schema violations and unusable values in the config file. Mapped to exit
// code 2 by the front-end; numerical failures map to 1.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

struct RunConfig {
    double T = 1.0;
    int grid = 400;
    int refine = 8;
    int N = 6;     // Taylor order
    int M = 3;     // Grunsky order
    int W = 6;     // word weight cap
    int N_tau = 8; // determinant truncation

    // polynomial driver specs: x0 real, x[k] complex, coefficients in t^j
    std::vector<double> x0_poly;
    std::vector<std::vector<Complex>> x_polys;

    // optional Herglotz Fourier block for the bridge command
    bool has_herglotz = false;
    std::vector<double> h_a0;
    std::vector<std::vector<double>> h_a;
    std::vector<std::vector<double>> h_b;

    std::vector<Complex> tvec;
    std::string out_dir = ".";
    double tol = 1e-6; // master verify tolerance scale
    std::uint64_t seed = 12345;
};

RunConfig parse_config_file(const std::string& path);
RunConfig parse_config_text(const std::string& text); // exposed for tests

DriverSet build_drivers(const RunConfig& cfg);

// Executes one command, writing artifacts into cfg.out_dir. Returns the
// process exit code (0 ok, 1 verify/consistency failure, 2 config error).
int run_command(const std::string& command, const RunConfig& cfg);

} // namespace lk::cli
