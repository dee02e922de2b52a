#pragma once

#include <functional>

#include "sb/skew_family.hpp"

namespace sb {

// A graph {(g(w), w) : w in domain} transverse to the fibers, moving slowly in
// z (lipschitz_bound <= 1/rho makes it tangent to the vertical cone C_rho).
struct VerticalGraph {
    Disk domain;
    std::function<Complex(Complex)> eval;
    double lipschitz_bound = 0.0;
    double sup_bound = 0.0;  // sup |eval| over the domain
};

// Local unstable manifold of the saddle P as a vertical graph over
// D(-1, 1/2).  Fixed point of the slow-fiber transform
// T(g)(w') = (alpha + beta w) g(w) + eps w  with  w = g_-(w'); evaluation uses
// the analytically closed tail at the saddle, so each call walks the g_- chain
// only until it settles at w~.
VerticalGraph unstable_graph(const SkewParams& lam, double tol = 1e-10);

struct IntersectionResult {
    SkewPoint x;
    SymbolWord word;
    double residual_bound;  // truncation bound on |graph(w_x) - Lambda fiber|
    int depth;              // F^4 steps taken
};

// Locates a point of Gamma n Lambda(lambda) by the nested-image scheme: each
// step pushes the current piece through F^4 and keeps the sub-graph over the
// box V_j whose image z-range stays inside H_j, preferring the index that
// moves the fiber track least (lowest index on ties).  The word is closed
// with a minus tail; the fiber track is recomputed through the exact inverse
// chain, so the result double-checks against lambda_point of the same word.
IntersectionResult graph_blender_intersection(const SkewParams& lam,
                                              const VerticalGraph& graph, int j0,
                                              int maxdepth = 900);

// z(x_word) - W^u(w(x_word)); zero exactly when the coded point sits on the
// unstable graph.  Its zero set over parameter space is the hypersurface X_word.
Complex x_in_unstable_residual(const SkewParams& lam, const SymbolWord& word);

// Newton (secant-seeded, finite-difference derivative) root of the residual
// along a one-complex-parameter slice.  Returns zero or one root; failures to
// converge yield an empty list rather than an error.
std::vector<Complex> solve_X_omega(
    const std::function<SkewParams(Complex)>& slice, const SymbolWord& word,
    Complex seed);

} // namespace sb
