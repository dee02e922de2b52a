#pragma once

#include <cstdint>
#include <string>

#include "sb/errors.hpp"
#include "sb/green.hpp"
#include "sb/misiurewicz.hpp"
#include "sb/raster.hpp"
#include "sb/skew_family.hpp"
#include "sb/types.hpp"

namespace sb {

// chart window [u0, u1] x [v0, v1]
struct WindowSpec {
    double u0 = -1.0, u1 = 1.0, v0 = -1.0, v1 = 1.0;
    bool operator==(const WindowSpec&) const = default;
};

// One batch job: the command, where to write, and a parameter block.  Every
// field has a runnable default (the certified reference parameter), so a
// config file only names what it overrides.  Parsing is strict: unknown or
// ill-typed keys are errors, and parse -> serialize -> parse is exact.
struct JobConfig {
    JobConfig();  // fills the lambda block with the reference parameter

    std::string command;
    std::string out_dir = "out";
    std::uint64_t seed = 1;
    int workers = 1;

    // lambda block (a, alpha, beta, eps) plus the regular-map weight c
    Complex a, alpha, beta, eps;
    Complex c{1e-3, 0.0};
    int d = 2;

    double rho = 100.0;    // vertical cone parameter for certification jobs
    double aperture = 0.01;
    double slack = 1e-9;
    int grid = 40;
    int order = 8;         // averaging depth / period order
    int budget = 512;
    double tol = 1e-9;
    int starts = 48;       // Newton starts per axis for root sweeps

    std::string mode = "skew";        // "skew" | "base"
    std::string method = "periodic";  // "periodic" | "birkhoff"
    std::string fn = "lyapunov";      // raster function id
    std::string word = "(-)*";
    Complex at_z{0.0, 0.0};           // evaluation point for green jobs
    Complex at_w{0.0, 0.0};

    // slice chart: which lambda component the two real directions move
    std::string vary = "a";
    Complex dir1{1.0, 0.0};
    Complex dir2{0.0, 1.0};
    WindowSpec window;
    int nx = 128, ny = 128;

    // critical-orbit relation q^n(0) = q^m(0), or landing on a fixed point
    int rel_n = 4, rel_m = 0;
    bool rel_to_fixed = false;

    // exact rationals (as "p/q" text) for height jobs
    std::string rational_a = "2";
    std::string rational_w = "0";
    int height_cap_bits = 4096;

    // inputs for the report command: raster values CSV + parameter points CSV
    std::string density_path;
    std::string points_path;

    bool operator==(const JobConfig&) const = default;
};

// Strict parse; errors throw ConfigError naming the offending dotted key
// path, prefixed with `source` (a file name or other origin label).
JobConfig parse_job_config(const std::string& json_text,
                           const std::string& source = "config");
JobConfig load_job_config(const std::string& path);

// canonical form: sorted keys, two-space indent, trailing newline
std::string job_config_json(const JobConfig& cfg);

// typed views over the block; construction gates (|a| > 10, c != 0, slice
// geometry) fire here, not at parse time
SkewParams skew_params_from(const JobConfig& cfg);
RegularSkewMap regular_map_from(const JobConfig& cfg);
SliceSpec slice_from(const JobConfig& cfg);
RasterBudgets raster_budgets_from(const JobConfig& cfg);
RasterFn raster_fn_from(const JobConfig& cfg);
MisiurewiczRelation relation_from(const JobConfig& cfg);

// write via temp + rename so partial artifacts are never observable
void atomic_write_file(const std::string& path, const std::string& bytes);
std::string read_text_file(const std::string& path);

} // namespace sb
