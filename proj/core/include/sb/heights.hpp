#pragma once

#include <gmpxx.h>

#include "sb/errors.hpp"

namespace sb {

// Rational-coefficient models of the two families, for exact height
// arithmetic.  These deliberately do not carry the |a| > 10 hyperbolicity
// gate: canonical heights make sense for any nonzero a, and the interesting
// rational fixtures (exact fiber cycles) live at small a.
struct RationalBaseMap {
    mpq_class a;  // w -> a (w^2 - 1)
};

struct RationalSkewMapQ {
    mpq_class a, alpha, beta, eps;  // (z,w) -> (alpha z + eps w + beta z w, a(w^2-1))
};

struct RationalPoint {
    mpq_class z, w;
};

// naive Weil height log max(|p|, q) of p/q in lowest terms
double weil_height(const mpq_class& x);
// two-variable version after clearing to a common denominator:
// log max(|Z|, |W|, D)
double weil_height(const mpq_class& z, const mpq_class& w);

struct HeightResult {
    double estimate = 0.0;
    bool preperiodic = false;
    int iterations = 0;
    bool stayed_exact = true;  // whole run inside exact rational arithmetic
};

// Canonical height as the extrapolated limit of 2^{-n} h(f^n x).  The orbit
// is followed exactly in rational arithmetic with cycle detection (a cycle
// means preperiodic, height exactly 0); once numerators outgrow
// height_cap_bits the recurrence continues in floating point on cleared
// log-coordinates.  Stops after three consecutive increments below 1e-6 (a
// single one can be a Weil-height coincidence); throws BudgetExhausted if
// the budget runs out before either verdict.
HeightResult canonical_height_rational(const RationalBaseMap& map,
                                       const mpq_class& w0, int budget = 64,
                                       int height_cap_bits = 4096);
HeightResult canonical_height_rational(const RationalSkewMapQ& map,
                                       const RationalPoint& x0, int budget = 64,
                                       int height_cap_bits = 4096);

} // namespace sb
