#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "sb/errors.hpp"
#include "sb/skew_family.hpp"
#include "sb/types.hpp"
#include "sb/word.hpp"

namespace sb {

inline constexpr const char* kCodeVersion = "0.4.0";

// tangent vector in the (a, alpha, beta, eps) parameter space
struct ParamDir {
    Complex da{0.0, 0.0};
    Complex dalpha{0.0, 0.0};
    Complex dbeta{0.0, 0.0};
    Complex deps{0.0, 0.0};
};

// a raw parameter tuple; admissibility (|a| > 10 and friends) is checked by
// whatever gets constructed from it at evaluation time, not here
struct PixelParams {
    Complex a, alpha, beta, eps;
};

// Affine two-direction chart through an anchor: pixel (i, j) covers the
// parameter anchor + u*dir1 + v*dir2 with (u, v) on a grid over the window
// [u_lo, u_hi] x [v_lo, v_hi].  Directions are real: moving one pixel moves
// by a real multiple of a (complex) tangent vector, so dir1 = 1, dir2 = i
// in the a coordinate sweeps a complex-plane window.
class SliceSpec {
public:
    SliceSpec(const SkewParams& anchor, const ParamDir& d1, const ParamDir& d2,
              double u_lo, double u_hi, double v_lo, double v_hi, int nx, int ny);

    // base-family chart in the a plane only; no |a| gate so small-|a|
    // bifurcation windows are representable
    SliceSpec(Complex base_anchor, Complex da1, Complex da2, double u_lo,
              double u_hi, double v_lo, double v_hi, int nx, int ny);

    PixelParams at(int i, int j) const;

    double u_at(int i) const;
    double v_at(int j) const;
    double hx() const { return nx_ > 1 ? (u1_ - u0_) / (nx_ - 1) : 0.0; }
    double hy() const { return ny_ > 1 ? (v1_ - v0_) / (ny_ - 1) : 0.0; }

    bool base_only() const { return base_only_; }
    Complex anchor_a() const { return a_; }
    Complex anchor_alpha() const { return alpha_; }
    Complex anchor_beta() const { return beta_; }
    Complex anchor_eps() const { return eps_; }
    const ParamDir& dir1() const { return d1_; }
    const ParamDir& dir2() const { return d2_; }
    double u0() const { return u0_; }
    double u1() const { return u1_; }
    double v0() const { return v0_; }
    double v1() const { return v1_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }

private:
    void validate() const;

    Complex a_, alpha_, beta_, eps_;
    bool base_only_ = false;
    ParamDir d1_, d2_;
    double u0_, u1_, v0_, v1_;
    int nx_, ny_;
};

enum class RasterFn { lyapunov, green_at_point, residual_x_omega, g_on_critical };

std::string to_string(RasterFn fn);

// per-pixel evaluation knobs; which fields matter depends on the function
struct RasterBudgets {
    double tol = 1e-9;
    int budget = 400;
    int order = 6;             // averaging depth for the skew Lyapunov sum
    double c = 1e-3;           // fiber z^2 weight for regular-map evaluations
    Complex at_z{0.0, 0.0};    // evaluation point for green_at_point
    Complex at_w{0.0, 0.0};
    SymbolWord word{{}, {1}};  // target word for residual_x_omega
};

struct Raster {
    explicit Raster(const SliceSpec& s)
        : slice(s),
          values(static_cast<std::size_t>(s.nx()) * s.ny(), 0.0),
          mask(static_cast<std::size_t>(s.nx()) * s.ny(), 0) {}

    SliceSpec slice;
    std::vector<double> values;      // row-major, index j*nx + i
    std::vector<std::uint8_t> mask;  // 1 = pixel carries no value
    std::string fn_id;
    RasterBudgets budgets;
    std::uint64_t seed = 0;
    std::string code_version = kCodeVersion;

    std::size_t idx(int i, int j) const {
        return static_cast<std::size_t>(j) * slice.nx() + i;
    }
    double value(int i, int j) const { return values[idx(i, j)]; }
    bool is_masked(int i, int j) const { return mask[idx(i, j)] != 0; }
};

// Evaluates fn over the slice; per-pixel failures become mask entries and
// never abort the sweep.  Deterministic at fixed seed regardless of workers:
// each pixel draws from a child stream keyed by its index.
Raster raster_map(const SliceSpec& slice, RasterFn fn,
                  const RasterBudgets& budgets = {}, std::uint64_t seed = 1,
                  int workers = 1);

// 5-point finite-difference Laplacian of a raster, interior pixels only,
// floored at -1e-6 * (value scale) to absorb noise on plurisubharmonic input
Raster laplacian_density(const Raster& r);

struct DensityReport {
    double fraction_above_median = 0.0;
    double bin_discrepancy = 0.0;  // sup over 8x8 coarse bins
    int points_used = 0;
};

// How strongly a set of base parameters concentrates on high pixels of a
// density raster.  The slice must be a base-plane chart; points are complex
// a values inside the window.
DensityReport pcf_density_report(const Raster& density,
                                 const std::vector<Complex>& points);

struct ContourSegment {
    double x0, y0, x1, y1;  // (u, v) window coordinates
};

struct XOmegaLocus {
    Raster residual;
    double level = 0.0;  // the contoured |residual| level
    std::vector<ContourSegment> segments;
};

// |graph residual| raster for a word, plus a marching-squares contour at a
// small level relative to the typical residual (the zero set is a point set
// on a complex slice, so the contour rings each root)
XOmegaLocus x_omega_locus(const SliceSpec& slice, const SymbolWord& word,
                          const RasterBudgets& budgets = {},
                          std::uint64_t seed = 1);

// 16-bit big-endian P5 with the affine value map recorded in a JSON sidecar
// at path + ".json"; masked pixels write as 0
void write_raster_pgm(const Raster& r, const std::string& path);
std::string raster_sidecar_json(const Raster& r);
void write_contour_csv(const XOmegaLocus& locus, const std::string& path);

// Exact-value CSV: '#'-prefixed header lines carrying the chart, then one
// ix,iy,u,v,value,mask row per pixel with doubles at full precision.  Only
// base-plane charts can be read back (the report pipeline needs nothing
// else); reloading a skew-chart CSV raises ConfigError.
void write_raster_csv(const Raster& r, const std::string& path);
Raster read_raster_csv(const std::string& path);

} // namespace sb
