#include "sb/multipliers.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

#include "sb/base_family.hpp"
#include "sb/errors.hpp"

namespace sb {

MultiplierRelation multiplier_relation(Complex chi_p, Complex chi_r) {
    double mp = std::abs(chi_p);
    if (std::abs(mp - 1.0) < 1e-12)
        throw DegenerateError("multiplier_relation: |chi_p| = 1 within 1e-12");
    if (mp == 0.0)
        throw DegenerateError("multiplier_relation: chi_p = 0");
    MultiplierRelation rel;
    rel.t = std::log(std::abs(chi_r)) / std::log(mp);
    double th = (std::arg(chi_r) - rel.t * std::arg(chi_p)) / (2.0 * pi);
    th -= std::floor(th);
    if (th >= 1.0) th = 0.0;  // guard the floor rounding edge
    rel.theta = th;
    return rel;
}

MultiplierRelation multiplier_relation(const SkewParams& lam) {
    SaddleInfo s = saddle_point(lam);
    SkewCycle r = repelling_two_cycle(lam);
    return multiplier_relation(s.chi_p, r.chi_r);
}

IndependenceReport independence_report(double t, double theta, long coeff_bound) {
    if (coeff_bound < 1 || coeff_bound > 10000)
        throw DomainError("independence_report: coefficient bound outside 1..10^4");
    IndependenceReport best;
    best.minimum = std::numeric_limits<double>::infinity();
    // q >= 1: the (p,q,r) -> (-p,-q,-r) symmetry makes that a canonical choice,
    // and q = 0 rows carry no information about t.  Ties (frequent when theta
    // is rational, where whole lines of triples are exact zeros) go to the
    // smallest triple so the report is deterministic and primitive.
    auto better = [&](double v, long p, long q, long r) {
        if (v != best.minimum) return v < best.minimum;
        long mx = std::max({std::labs(p), q, std::labs(r)});
        long bx = std::max({std::labs(best.p), best.q, std::labs(best.r)});
        if (mx != bx) return mx < bx;
        if (q + std::labs(r) != best.q + std::labs(best.r))
            return q + std::labs(r) < best.q + std::labs(best.r);
        if (std::labs(r) != std::labs(best.r)) return std::labs(r) < std::labs(best.r);
        if (std::labs(p) != std::labs(best.p)) return std::labs(p) < std::labs(best.p);
        if (r != best.r) return r > best.r;
        return p > best.p;
    };
    for (long q = 1; q <= coeff_bound; ++q) {
        for (long r = -coeff_bound; r <= coeff_bound; ++r) {
            double x = q * t + r * theta;
            long p = std::clamp(std::lround(-x), -coeff_bound, coeff_bound);
            double v = std::abs(p + x);
            if (better(v, p, q, r)) {
                best.minimum = v;
                best.p = p;
                best.q = q;
                best.r = r;
            }
        }
    }
    return best;
}

std::vector<CycleMultiplier> multiplier_map(const SkewParams& lam,
                                            const std::vector<int>& periods) {
    BaseParam bp = lam.base();
    std::vector<CycleMultiplier> out;
    for (int n : periods) {
        if (n < 1 || n > 12)
            throw DomainError("multiplier_map: cycle period " + std::to_string(n) +
                              " outside 1..12");
        for (const PeriodicOrbit& orbit : base_periodic_points(bp, n)) {
            if (orbit.period != n) continue;
            CycleMultiplier cm;
            cm.base_cycle = orbit.points;
            cm.period = n;
            // fiber return map along the cycle: z -> slope z + shift
            Complex slope = 1.0, shift = 0.0, vert = 1.0;
            for (Complex w : orbit.points) {
                Complex c1 = lam.alpha + lam.beta * w;
                shift = c1 * shift + lam.eps * w;
                slope *= c1;
                vert *= 2.0 * lam.a * w;
            }
            cm.fiber_slope = slope;
            cm.vertical = vert;
            if (std::abs(1.0 - slope) < 1e-12)
                throw DegenerateError("multiplier_map: fiber return map is parabolic "
                                      "on a period-" + std::to_string(n) + " cycle");
            cm.fiber_fixed = shift / (1.0 - slope);
            cm.det = slope * vert;
            out.push_back(std::move(cm));
        }
    }
    return out;
}

RankReport multiplier_jacobian_rank(const SkewParams& lam, int n) {
    std::vector<int> periods;
    for (int k = 1; k <= n; ++k) periods.push_back(k);
    auto entries = [&](const SkewParams& p) {
        std::vector<Complex> v;
        for (const auto& cm : multiplier_map(p, periods)) v.push_back(cm.det);
        return v;
    };
    const double h = 1e-6;
    auto base_entries = entries(lam);
    const int m = static_cast<int>(base_entries.size());
    Eigen::MatrixXcd jac(m, 3);
    for (int dir = 0; dir < 3; ++dir) {
        auto shifted = [&](double delta) {
            SkewParams p = lam;
            if (dir == 0) p.alpha += delta;
            if (dir == 1) p.beta += delta;
            if (dir == 2) p.eps += delta;
            return entries(p);
        };
        auto plus = shifted(h), minus = shifted(-h);
        for (int i = 0; i < m; ++i)
            jac(i, dir) = (plus[i] - minus[i]) / (2.0 * h);
    }
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(jac);
    RankReport rep;
    for (int i = 0; i < svd.singularValues().size(); ++i)
        rep.singular_values.push_back(svd.singularValues()(i));
    double smax = rep.singular_values.empty() ? 0.0 : rep.singular_values.front();
    for (double s : rep.singular_values)
        if (smax > 0.0 && s > 1e-6 * smax) ++rep.rank;
    if (!rep.singular_values.empty() && smax > 0.0)
        rep.ratio = rep.singular_values.back() / smax;
    return rep;
}

double resonance_margin(Complex chi1, Complex chi2, int maxdeg) {
    double margin = std::abs(chi1 - chi2);
    Complex chi[2] = {chi1, chi2};
    for (int k1 = 0; k1 <= maxdeg; ++k1) {
        for (int k2 = 0; k2 + k1 <= maxdeg; ++k2) {
            if (k1 + k2 < 2) continue;
            Complex prod = std::pow(chi1, k1) * std::pow(chi2, k2);
            for (Complex c : chi) margin = std::min(margin, std::abs(c - prod));
        }
    }
    return margin;
}

} // namespace sb
