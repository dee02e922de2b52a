#include "sb/misiurewicz.hpp"

#include <algorithm>
#include <cmath>

namespace sb {

namespace {

constexpr double kEscapeBail = 1e100;

void check_relation(const MisiurewiczRelation& rel) {
    if (rel.n < 1 || rel.n > 10)
        throw DomainError("misiurewicz: n must be in [1, 10], got " +
                          std::to_string(rel.n));
    if (!rel.to_fixed && (rel.m < 0 || rel.m >= rel.n))
        throw DomainError("misiurewicz: need n > m >= 0");
}

// p_k = q_a^k(0) and its a-derivative; false when the orbit overflows
bool orbit(int n, int m, Complex a, Complex& pn, Complex& dpn, Complex& pm,
           Complex& dpm) {
    Complex p = 0.0, dp = 0.0;
    pm = 0.0;
    dpm = 0.0;
    for (int k = 1; k <= n; ++k) {
        const Complex p2 = p * p - 1.0;
        dp = p2 + 2.0 * a * p * dp;
        p = a * p2;
        if (std::abs(p) > kEscapeBail) return false;
        if (k == m) {
            pm = p;
            dpm = dp;
        }
    }
    pn = p;
    dpn = dp;
    return true;
}

} // namespace

void misiurewicz_relation_value(const MisiurewiczRelation& rel, Complex a,
                                Complex& value, Complex& derivative) {
    check_relation(rel);
    Complex pn, dpn, pm, dpm;
    if (!orbit(rel.n, rel.to_fixed ? 0 : rel.m, a, pn, dpn, pm, dpm)) {
        value = Complex(kEscapeBail, 0.0);
        derivative = Complex(0.0, 0.0);
        return;
    }
    if (rel.to_fixed) {
        // fixed points solve a w^2 - w - a = 0; substituting p_n clears the
        // square root and vanishes exactly when p_n is one of them
        value = a * pn * pn - pn - a;
        derivative = pn * pn + 2.0 * a * pn * dpn - dpn - 1.0;
    } else {
        value = pn - pm;
        derivative = dpn - dpm;
    }
}

namespace {

// |(q_a^P)'| along the cycle the critical orbit lands on
double landing_multiplier(const MisiurewiczRelation& rel, Complex a) {
    Complex z = 0.0;
    for (int k = 0; k < (rel.to_fixed ? rel.n : rel.m); ++k) z = a * (z * z - 1.0);
    if (rel.to_fixed) {
        const Complex disc = std::sqrt(1.0 + 4.0 * a * a);
        const Complex w1 = (1.0 + disc) / (2.0 * a);
        const Complex w2 = (1.0 - disc) / (2.0 * a);
        const Complex wf = std::abs(z - w1) < std::abs(z - w2) ? w1 : w2;
        return std::abs(2.0 * a * wf);
    }
    Complex mult = 1.0;
    for (int k = 0; k < rel.n - rel.m; ++k) {
        mult *= 2.0 * a * z;
        z = a * (z * z - 1.0);
    }
    return std::abs(mult);
}

} // namespace

std::vector<MisiurewiczRoot> misiurewicz_parameters(const MisiurewiczRelation& rel,
                                                    Complex window_lo,
                                                    Complex window_hi,
                                                    int starts_per_axis) {
    check_relation(rel);
    const double x0 = window_lo.real(), x1 = window_hi.real();
    const double y0 = window_lo.imag(), y1 = window_hi.imag();
    if (!(x1 > x0) || !(y1 > y0))
        throw GridError("misiurewicz: window must have positive area");
    if (starts_per_axis < 2)
        throw DomainError("misiurewicz: need at least 2 starts per axis");

    const double span = std::max(x1 - x0, y1 - y0);
    std::vector<MisiurewiczRoot> roots;

    for (int gy = 0; gy < starts_per_axis; ++gy) {
        for (int gx = 0; gx < starts_per_axis; ++gx) {
            Complex a(x0 + (x1 - x0) * (gx + 0.5) / starts_per_axis,
                      y0 + (y1 - y0) * (gy + 0.5) / starts_per_axis);
            // fixed points need a != 0; nudge starts off the origin
            if (std::abs(a) < 1e-8) a += Complex(1e-6, 1e-6);

            bool converged = false;
            Complex value, deriv;
            for (int it = 0; it < 60; ++it) {
                misiurewicz_relation_value(rel, a, value, deriv);
                if (std::abs(value) > 1e50 || std::abs(deriv) < 1e-300) break;
                const Complex step = value / deriv;
                a -= step;
                if (std::abs(a - Complex((x0 + x1) / 2, (y0 + y1) / 2)) > 10.0 * span)
                    break;
                if (std::abs(step) < 1e-13 * std::max(1.0, std::abs(a))) {
                    converged = true;
                    break;
                }
            }
            if (!converged) continue;
            // one polish pass, then freeze the residual
            misiurewicz_relation_value(rel, a, value, deriv);
            if (std::abs(deriv) > 1e-300) a -= value / deriv;
            misiurewicz_relation_value(rel, a, value, deriv);

            const double margin = 1e-9 * span;
            if (a.real() < x0 - margin || a.real() > x1 + margin ||
                a.imag() < y0 - margin || a.imag() > y1 + margin)
                continue;

            bool duplicate = false;
            for (auto& r : roots) {
                if (std::abs(r.a - a) < 1e-8) {
                    duplicate = true;
                    if (std::abs(value) < r.residual) {
                        r.a = a;
                        r.residual = std::abs(value);
                        r.transversality = deriv;
                    }
                    break;
                }
            }
            if (duplicate) continue;

            MisiurewiczRoot root;
            root.a = a;
            root.residual = std::abs(value);
            root.transversality = deriv;
            roots.push_back(root);
        }
    }

    for (auto& r : roots) {
        r.multiplier = landing_multiplier(rel, r.a);
        r.verified = r.residual < 1e-8 && r.multiplier > 1.0 + 1e-9 &&
                     std::abs(r.transversality) > 1e-14;
    }
    std::sort(roots.begin(), roots.end(), [](const auto& l, const auto& r) {
        if (l.a.real() != r.a.real()) return l.a.real() < r.a.real();
        return l.a.imag() < r.a.imag();
    });
    return roots;
}

} // namespace sb
