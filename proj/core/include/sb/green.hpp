#pragma once

#include <cstdint>
#include <vector>

#include "sb/skew_family.hpp"

namespace sb {

// Regular perturbation f(z,w) = (alpha z + eps w + beta z w + c z^2,
// a(w^2-1) + c w^2).  The leading forms (c z^2, (a+c) w^2) vanish only at the
// origin, so the escape rate is a genuine Green function of a regular
// polynomial endomorphism of C^2.
struct RegularSkewMap {
    SkewParams lam;
    Complex c;
    int d = 2;

    RegularSkewMap(SkewParams lam_, Complex c_) : lam(lam_), c(c_) {
        if (c == Complex(0.0, 0.0))
            throw DomainError("RegularSkewMap: c must be nonzero");
        if (std::abs(lam.a + c) < 1e-12)
            throw DomainError("RegularSkewMap: a + c = 0 degenerates the leading form");
    }

    SkewPoint apply(SkewPoint p) const {
        SkewPoint q = skew_apply(lam, p);
        return {q.z + c * p.z * p.z, q.w + c * p.w * p.w};
    }
};

struct GreenEvaluation {
    double value = 0.0;   // 0 when the orbit stayed bounded for the whole budget
    int iterations = 0;
    double tail_bound = 0.0;
    bool escaped = false;  // distinguishes verdict "bounded at this budget" from G=0
};

// Escape rate G(x) = lim d^{-n} log^+ ||f^n(x)||, computed in renormalized
// coordinates (unit vector + log scale) so deep escapes never overflow.  The
// iteration stops when the geometric tail bound drops below tol, or returns
// the bounded verdict after `budget` steps.
GreenEvaluation green(const RegularSkewMap& map, SkewPoint x, double tol,
                      int budget = 512);
GreenEvaluation green(const BaseParam& p, Complex w, double tol, int budget = 512);
GreenEvaluation green_base_raw(Complex a, Complex w, double tol, int budget = 512);

// successive approximants d^{-n} log ||f^n(x)|| for escaping x (empty if the
// orbit never escapes within the budget); used for Cauchy-rate checks
std::vector<double> green_approximants(const RegularSkewMap& map, SkewPoint x,
                                       int count);

// backward random orbits of the equilibrium measure (uniform branch choice,
// burn-in 50)
std::vector<Complex> equilibrium_samples(const BaseParam& p, int count,
                                         std::uint64_t seed);
std::vector<SkewPoint> equilibrium_samples(const SkewParams& lam, int count,
                                           std::uint64_t seed);
std::vector<SkewPoint> equilibrium_samples(const RegularSkewMap& map, int count,
                                           std::uint64_t seed);

struct SkewLyapunov {
    double L_sum = 0.0;
    double l_base = 0.0;
    double L_horizontal = 0.0;
};

// Exponent sum of the equilibrium measure.  For the unperturbed skew product
// the components come separately: the base exponent plus the average of
// log|alpha + beta w| over base equilibrium samples.
SkewLyapunov lyapunov_skew(const SkewParams& lam, int order, std::uint64_t seed);
// For the perturbed map: Birkhoff average of log|det Df| along forward orbits
// of equilibrium samples (L_sum only; the split is not defined here).
SkewLyapunov lyapunov_skew(const RegularSkewMap& map, int order,
                           std::uint64_t seed);

struct InfinityLyapunov {
    double sampled = 0.0;   // backward-orbit Birkhoff estimate
    double periodic = 0.0;  // log d + d^{-n} log|g^n(critical point)| estimate
};

// Lyapunov exponent of the induced map on the line at infinity,
// g([z:w]) = [beta z w + c z^2 : (a+c) w^2], i.e. u -> (c u^2 + beta u)/(a+c).
InfinityLyapunov line_at_infinity_lyapunov(const RegularSkewMap& map, int order,
                                           std::uint64_t seed);

enum class CriticalComponent {
    fiber_line,      // {w = 0}
    critical_curve,  // {z = -(alpha + beta w)/(2c)}
};

struct GridWindow {
    Complex center{0.0, 0.0};
    double halfwidth = 1.0;
    int n = 128;
};

// approximate integral of G against the slice critical measure on one finite
// critical component: restrict G to the parametrized curve, take the 5-point
// discrete Laplacian as the density, return (1/2pi) sum G * laplacian
double critical_slice_integral(const RegularSkewMap& map,
                               CriticalComponent component, GridWindow grid);

struct BedfordJonssonBudgets {
    int samples = 400;   // equilibrium samples for the direct exponent
    int orbit = 60;      // forward steps per sample
    int grid = 96;       // critical-integral grid resolution
    int infinity = 12;   // iterate count for the infinity exponent estimators
};

struct BedfordJonssonReport {
    double L_direct = 0.0;
    double decomposed = 0.0;  // log d + ell + integral
    double defect = 0.0;
    double ell = 0.0;
    double integral = 0.0;
};

// the exponent-sum decomposition L = log d + ell + int G dmu_c, assembled from
// the three independent estimators
BedfordJonssonReport bedford_jonsson_check(const RegularSkewMap& map,
                                           BedfordJonssonBudgets budgets = {},
                                           std::uint64_t seed = 1);

} // namespace sb
