#include "sb/graphs.hpp"

#include <cmath>
#include <cstdint>

#include "sb/base_family.hpp"
#include "sb/errors.hpp"
#include "sb/ifs.hpp"

namespace sb {

VerticalGraph unstable_graph(const SkewParams& lam, double tol) {
    BaseParam bp = lam.base();
    SaddleInfo sad = saddle_point(lam);
    if (!sad.saddle)
        throw DegenerateError("unstable_graph: P(lambda) is not a saddle");
    const Complex wt = sad.p.w, zP = sad.p.z;
    const Complex alpha = lam.alpha, beta = lam.beta, eps = lam.eps;

    // Iterating the transform from the constant graph z_P adds one chain level
    // per pass, so the limit is the series g(w') = sum_k eps w_k P_{k-1} with
    // w_k the g_- orbit of w' and P_k = prod (alpha + beta w_j).  The chain
    // reaches the base fixed point at the base contraction rate ~1/(2|a|), and
    // from there the geometric tail sums to P_K z_P exactly.
    auto eval = [bp, wt, zP, alpha, beta, eps](Complex wp) {
        Complex S = 0.0, P = 1.0, w = wp;
        for (int k = 0; k < 80; ++k) {
            w = inverse_branch(bp, -1, w);
            S += eps * w * P;
            P *= alpha + beta * w;
            if (std::abs(w - wt) < 1e-15) break;
        }
        return S + P * zP;
    };

    VerticalGraph g;
    g.domain = Disk{Complex(-1.0, 0.0), 0.5};
    g.eval = eval;

    // Check the fixed-point equation T(g) = g on a net and record sup / Lip
    // estimates while we are at it.  The closed form satisfies the transform
    // to roundoff; anything above tol means the chain failed to settle.
    double res = 0.0, lip = 0.0, sup = std::abs(eval(g.domain.center));
    const int n = 48;
    for (int ring = 1; ring <= 3; ++ring) {
        double r = g.domain.radius * ring / 3.0;
        for (int k = 0; k < n; ++k) {
            Complex wp = g.domain.center + std::polar(r, 2.0 * pi * k / n);
            Complex w = inverse_branch(bp, -1, wp);
            Complex tw = (alpha + beta * w) * eval(w) + eps * w;
            res = std::max(res, std::abs(tw - eval(wp)));
            sup = std::max(sup, std::abs(eval(wp)));
            const double h = 1e-6;
            lip = std::max(lip, std::abs(eval(wp + h) - eval(wp - h)) / (2.0 * h));
        }
    }
    if (res > tol)
        throw ConvergenceError("unstable_graph: transform residual " +
                               std::to_string(res) + " above tolerance " +
                               std::to_string(tol));
    g.sup_bound = sup * (1.0 + 1e-9) + 1e-12;
    g.lipschitz_bound = lip * 1.5 + 1e-12;
    return g;
}

IntersectionResult graph_blender_intersection(const SkewParams& lam,
                                              const VerticalGraph& graph, int j0,
                                              int maxdepth) {
    if (j0 < 1 || j0 > 4)
        throw DomainError("graph_blender_intersection: box index " +
                          std::to_string(j0) + " outside 1..4");
    BaseParam bp = lam.base();
    BaseRegions reg = base_regions(bp);
    const Disk& box0 = reg.V_box[j0 - 1];
    if (!graph.domain.contains(box0))
        throw DomainError("graph_blender_intersection: graph domain does not cover V_" +
                          std::to_string(j0));
    {
        Complex z0 = graph.eval(box0.center);
        double rad0 = graph.lipschitz_bound * box0.radius;
        if (h_depth(j0, z0) < rad0)
            throw DomainError("graph_blender_intersection: graph range not inside H_" +
                              std::to_string(j0));
    }

    int s1 = 0, s2 = 0;
    BaseRegions::box_symbols(j0, s1, s2);
    std::vector<std::int8_t> sym{static_cast<std::int8_t>(s1),
                                 static_cast<std::int8_t>(s2)};

    // per-branch-pair contraction of the base inverse system; the coded point
    // at depth m is within 6 kappa^m / (1-kappa) of its limit
    const double kappa = sq(branch_derivative_sup(bp, 0.0, 3.0));
    auto base_tail = [kappa](std::size_t m) {
        return 6.0 * std::pow(kappa, static_cast<double>(m)) / (1.0 - kappa);
    };

    // Push the graph value at the coded surface point down the whole fiber
    // chain.  T is the deepest z value, rad transports the graph's variation
    // over the shrinking base box along with it, contr is the product of the
    // backward fiber contractions (governs the final residual).
    struct Track {
        Complex T;
        double rad = 0.0;
        double contr = 1.0;
        Complex w0;
    };
    auto track = [&](const std::vector<std::int8_t>& s) {
        const int m = static_cast<int>(s.size());
        std::vector<Complex> chain(static_cast<std::size_t>(m) + 1);
        chain[m] = 0.0;
        for (int k = m - 1; k >= 0; --k)
            chain[k] = branch_pair(bp, s[k], chain[k + 1]);
        Track t;
        t.w0 = chain[0];
        t.T = graph.eval(chain[0]);
        t.rad = graph.lipschitz_bound * 2.0 * base_tail(static_cast<std::size_t>(m));
        for (int k = 0; k < m; ++k) {
            Complex c1 = fiber_c1(lam, chain[k]);
            double ac1 = std::abs(c1);
            if (ac1 < 1e-9)
                throw DivisionError("graph_blender_intersection: fiber slope vanished");
            double dfw = std::abs(fiber_c1_dw(lam, chain[k])) * std::abs(t.T) +
                         std::abs(fiber_c0_dw(lam, chain[k]));
            double diam_k = 2.0 * base_tail(static_cast<std::size_t>(m - k));
            t.T = c1 * t.T + fiber_c0(lam, chain[k]);
            t.rad = ac1 * t.rad + 1.5 * dfw * diam_k;
            t.contr /= ac1;
        }
        return t;
    };

    // |graph(w0) - Lambda fiber of the infinite word| unwinds to
    // (|T_m| + |L_m|) * contr plus the effect of the tail choice and of the
    // surface point still moving; both tracks stay in D_2, hence the 8.
    auto residual_bound = [&](const Track& t, std::size_t m) {
        return 8.0 * t.contr + 2.0 * base_tail(m);
    };

    Track cur = track(sym);
    int depth = 1;
    const double target = 5e-9;
    while (residual_bound(cur, sym.size()) >= target) {
        if (depth >= maxdepth)
            throw DepthExhausted("graph_blender_intersection: depth cap " +
                                 std::to_string(maxdepth) +
                                 " hit with residual bound " +
                                 std::to_string(residual_bound(cur, sym.size())));
        int best = 0;
        double best_move = 0.0;
        Track best_track;
        for (int j = 1; j <= 4; ++j) {
            std::vector<std::int8_t> cand = sym;
            int t1 = 0, t2 = 0;
            BaseRegions::box_symbols(j, t1, t2);
            cand.push_back(static_cast<std::int8_t>(t1));
            cand.push_back(static_cast<std::int8_t>(t2));
            Track tr = track(cand);
            if (h_depth(j, tr.T) < tr.rad) continue;
            // keep the index whose image moves the track least; the ascending
            // loop with a strict comparison settles ties on the lowest index
            double move = std::abs(tr.T - cur.T);
            if (best == 0 || move < best_move - 1e-12) {
                best = j;
                best_move = move;
                best_track = tr;
            }
        }
        if (best == 0)
            throw CoverGap("graph_blender_intersection: no box admits the image "
                           "at depth " + std::to_string(depth));
        int t1 = 0, t2 = 0;
        BaseRegions::box_symbols(best, t1, t2);
        sym.push_back(static_cast<std::int8_t>(t1));
        sym.push_back(static_cast<std::int8_t>(t2));
        cur = best_track;
        ++depth;
    }

    IntersectionResult out;
    out.word.head = sym;
    out.word.block = {-1};
    out.x.w = cur.w0;
    out.x.z = graph.eval(cur.w0);
    out.residual_bound = residual_bound(cur, sym.size());
    out.depth = depth;
    return out;
}

Complex x_in_unstable_residual(const SkewParams& lam, const SymbolWord& word) {
    VerticalGraph g = unstable_graph(lam, 1e-8);
    CodedPoint cp = lambda_point(lam, word, 1600);
    if (!g.domain.contains(cp.x.w))
        throw DomainError("x_in_unstable_residual: coded base point outside the "
                          "unstable graph domain");
    return cp.x.z - g.eval(cp.x.w);
}

std::vector<Complex> solve_X_omega(
    const std::function<SkewParams(Complex)>& slice, const SymbolWord& word,
    Complex seed) {
    auto F = [&](Complex t) { return x_in_unstable_residual(slice(t), word); };
    std::vector<Complex> roots;
    try {
        Complex t = seed;
        Complex f = F(t);
        for (int it = 0; it < 60; ++it) {
            if (std::abs(f) < 1e-10) {
                roots.push_back(t);
                break;
            }
            double h = 1e-7 * (1.0 + std::abs(t));
            Complex df = (F(t + h) - F(t - h)) / (2.0 * h);
            if (std::abs(df) < 1e-14) break;
            Complex step = f / df;
            double cap = 0.5 * (1.0 + std::abs(t));
            if (std::abs(step) > cap) step *= cap / std::abs(step);
            t -= step;
            f = F(t);
        }
    } catch (const Error&) {
        // wandering out of the admissible parameter region or losing the
        // coding along the slice counts as "no root here", not a failure
    }
    return roots;
}

} // namespace sb
