#pragma once

#include <vector>

#include "sb/skew_family.hpp"

namespace sb {

// Resonance coordinates of the pair (chi_p, chi_r): t = log|chi_r|/log|chi_p|
// and theta = (Arg chi_r - t Arg chi_p)/2pi mod 1.  Rational independence of
// (1, t, theta) is the density condition on the multiplicative group generated
// by the two multipliers.
struct MultiplierRelation {
    double t = 0.0;
    double theta = 0.0;
};

MultiplierRelation multiplier_relation(Complex chi_p, Complex chi_r);
MultiplierRelation multiplier_relation(const SkewParams& lam);

struct IndependenceReport {
    double minimum = 0.0;  // smallest |p + q t + r theta| over the searched triples
    long p = 0, q = 0, r = 0;
};

// Exhaustive search for integer relations p + q t + r theta ~ 0 with
// max(|p|,|q|,|r|) <= coeff_bound.  Only relations involving t are searched
// (q >= 1; each +- pair of triples is reported once, smallest triple on ties);
// a pure p + r theta relation is visible on theta directly.  A large minimum
// is evidence (not proof) of independence.
IndependenceReport independence_report(double t, double theta, long coeff_bound);

// One entry of the multiplier map per base cycle: the cycle itself, the fiber
// affine return map, and det DF^m at the skew periodic point.
struct CycleMultiplier {
    std::vector<Complex> base_cycle;
    int period = 1;
    Complex fiber_slope;   // prod (alpha + beta w_i)
    Complex fiber_fixed;   // z with  F^m(z, w_0) = (z, w_0)
    Complex vertical;      // prod 2 a w_i
    Complex det;           // fiber_slope * vertical
};

// All cycles of the listed exact base periods (order: by period, then by the
// enumeration order of base_periodic_points, which is deterministic), each
// with the fiber data solved through the affine composition.
std::vector<CycleMultiplier> multiplier_map(const SkewParams& lam,
                                            const std::vector<int>& periods);

struct RankReport {
    std::vector<double> singular_values;  // descending
    int rank = 0;
    double ratio = 0.0;  // sigma_min / sigma_max over the first chart-dim values
};

// Finite-difference Jacobian of the multiplier map in the (alpha, beta, eps)
// chart at fixed a, using all cycles of period <= n; numeric rank at the
// threshold 1e-6 * sigma_max.
RankReport multiplier_jacobian_rank(const SkewParams& lam, int n);

// smallest distance to a multiplicative resonance chi_i = chi_1^{k1} chi_2^{k2}
// with 2 <= k1 + k2 <= maxdeg (and to the eigenvalue collision chi_1 = chi_2)
double resonance_margin(Complex chi1, Complex chi2, int maxdeg);

} // namespace sb
