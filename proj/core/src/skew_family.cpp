#include "sb/skew_family.hpp"

#include <cmath>

namespace sb {

SkewParams reference_blender_params() {
    double A = 0.01;
    Complex z8 = zeta8();
    return SkewParams(Complex(100.0, 0.0), (1.0 + A) * z8, 2.0 * A * z8, eps_ref());
}

std::vector<std::string> admissibility_violations(const HatParams& hat, double A) {
    std::vector<std::string> out;
    double ae = std::abs(hat.eps);
    if (!(ae > 1.0 / 20.0 && ae < 1.0 / 10.0))
        out.push_back("|eps| outside (1/20, 1/10)");
    if (!(std::abs(hat.alpha - hat.beta) < 1.0))
        out.push_back("|alpha - beta| >= 1");
    if (!(std::norm(hat.alpha) - std::norm(hat.beta) > 1.0 + A))
        out.push_back("|alpha|^2 - |beta|^2 <= 1 + A");
    return out;
}

SkewPoint skew_apply(const SkewParams& lam, SkewPoint p) {
    return {lam.alpha * p.z + lam.eps * p.w + lam.beta * p.z * p.w,
            q_apply(lam.a, p.w)};
}

SkewPoint skew_apply2(const SkewParams& lam, SkewPoint p) {
    return {fiber_c1(lam, p.w) * p.z + fiber_c0(lam, p.w),
            q_iterate(lam.a, p.w, 2)};
}

Complex fiber_c1(const SkewParams& lam, Complex w) {
    return (lam.alpha + lam.beta * w) * (lam.alpha + lam.beta * q_apply(lam.a, w));
}

Complex fiber_c0(const SkewParams& lam, Complex w) {
    Complex qw = q_apply(lam.a, w);
    return lam.eps * (lam.alpha * w + qw + lam.beta * w * qw);
}

Complex fiber_c1_dw(const SkewParams& lam, Complex w) {
    Complex qw = q_apply(lam.a, w);
    Complex dq = 2.0 * lam.a * w;
    return lam.beta * (lam.alpha + lam.beta * qw) +
           (lam.alpha + lam.beta * w) * lam.beta * dq;
}

Complex fiber_c0_dw(const SkewParams& lam, Complex w) {
    Complex qw = q_apply(lam.a, w);
    Complex dq = 2.0 * lam.a * w;
    return lam.eps * (lam.alpha + dq + lam.beta * qw + lam.beta * w * dq);
}

Jacobian2 skew_jacobian(const SkewParams& lam, SkewPoint p) {
    return {lam.alpha + lam.beta * p.w, lam.beta * p.z + lam.eps,
            Complex(0.0, 0.0), 2.0 * lam.a * p.w};
}

SaddleInfo saddle_point(const SkewParams& lam) {
    Complex wt = fixed_point_neg(lam.base());
    Complex denom = lam.alpha + lam.beta * wt - 1.0;
    if (std::abs(denom) < 1e-9)
        throw DegenerateError("saddle_point: alpha + beta*w~ too close to 1");
    SaddleInfo s;
    s.p = {-lam.eps * wt / denom, wt};
    s.chi_p = lam.alpha + lam.beta * wt;
    s.chi_vert = 2.0 * lam.a * wt;
    s.saddle = std::abs(s.chi_p) < 1.0 && std::abs(s.chi_vert) > 1.0;
    return s;
}

SkewCycle repelling_two_cycle(const SkewParams& lam) {
    PeriodicOrbit base = two_cycle(lam.base());
    Complex w0 = base.points[0], w1 = base.points[1];
    Complex A2 = (lam.alpha + lam.beta * w0) * (lam.alpha + lam.beta * w1);
    if (std::abs(1.0 - A2) < 1e-9)
        throw DegenerateError("repelling_two_cycle: fiber factor A_2 too close to 1");
    // fiber of F^2 over w0 is z -> A2 z + B2; accumulate B2 through one turn
    Complex B2 = lam.eps * ((lam.alpha + lam.beta * w1) * w0 + w1);
    Complex zr = B2 / (1.0 - A2);

    SkewCycle cyc;
    cyc.points = {{zr, w0}, skew_apply(lam, {zr, w0})};
    cyc.horizontal = A2;
    cyc.vertical = 4.0 * lam.a * lam.a * w0 * w1;
    cyc.chi_r = (std::abs(A2) <= std::abs(cyc.vertical)) ? A2 : cyc.vertical;
    return cyc;
}

CodedPoint lambda_point(const SkewParams& lam, const SymbolWord& word, int N) {
    if (N < 1) throw DomainError("lambda_point: need at least one inverse branch");
    BaseParam base = lam.base();

    // base backward chain: w_k realizes the first k symbols, deepest first
    std::vector<Complex> chain(N + 1);
    chain[N] = 0.0;
    for (int k = N - 1; k >= 0; --k)
        chain[k] = branch_pair(base, word.at(k), chain[k + 1]);

    // fiber backward: z_k = (z_{k+1} - c0(w_k)) / c1(w_k), seeded at 0.
    // The forward relation is z_{k+1} = c1(w_k) z_k + c0(w_k) over w-step
    // w_{k+1} = q^2(w_k) read along the chain toward the surface.
    Complex z = 0.0;
    double contraction = 1.0;
    for (int k = N - 1; k >= 0; --k) {
        Complex c1 = fiber_c1(lam, chain[k]);
        if (std::abs(c1) < 1e-9)
            throw DivisionError("lambda_point: fiber coefficient c1 below 1e-9");
        z = (z - fiber_c0(lam, chain[k])) / c1;
        contraction /= std::abs(c1);
    }
    // The seed error contracts by prod 1/|c1| through the fiber pullback; the
    // factor 4 covers the seed diameter plus the w-coupling of the fiber
    // coefficients in this regime.  Base truncation decays much faster.
    double m1 = branch_derivative_sup(base, Complex(0.0, 0.0), 3.0);
    double kappa = m1 * m1;
    double base_tail = 6.0 * std::pow(kappa, double(N)) / (1.0 - kappa);

    CodedPoint out;
    out.x = {z, chain[0]};
    out.bound = 4.0 * contraction + 10.0 * base_tail;
    return out;
}

} // namespace sb
