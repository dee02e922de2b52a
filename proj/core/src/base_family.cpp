#include "sb/base_family.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "sb/rng.hpp"

namespace sb {

namespace {

constexpr double kEscapeRadius = 1e100;

// true if `bits` is the smallest among its n-bit rotations (canonical necklace rep)
bool canonical_necklace(unsigned bits, int n) {
    unsigned rot = bits;
    for (int k = 1; k < n; ++k) {
        rot = ((rot >> 1) | (rot << (n - 1))) & ((1u << n) - 1u);
        if (rot < bits) return false;
    }
    return true;
}

// minimal p dividing n with rotation-by-p fixing the word
int necklace_period(unsigned bits, int n) {
    for (int p = 1; p < n; ++p) {
        if (n % p != 0) continue;
        unsigned rot = ((bits >> p) | (bits << (n - p))) & ((1u << n) - 1u);
        if (rot == bits) return p;
    }
    return n;
}

PeriodicOrbit::Kind classify(Complex multiplier) {
    double m = std::abs(multiplier);
    if (m > 1.0 + 1e-9) return PeriodicOrbit::Kind::repelling;
    if (m < 1.0 - 1e-9) return PeriodicOrbit::Kind::attracting;
    return PeriodicOrbit::Kind::indifferent;
}

} // namespace

Complex q_iterate(Complex a, Complex w, int n) {
    if (n < 0) throw DomainError("q_iterate: negative iterate count");
    for (int k = 0; k < n; ++k) {
        if (std::abs(w) > kEscapeRadius)
            return {std::numeric_limits<double>::infinity(), 0.0};
        w = q_apply(a, w);
    }
    return w;
}

Complex inverse_branch(const BaseParam& p, int sign, Complex w) {
    if (sign != 1 && sign != -1)
        throw DomainError("inverse_branch: sign must be +1 or -1");
    if (!(std::abs(w) < 3.0))
        throw DomainError("inverse_branch: argument outside D_3, |w| = " +
                          std::to_string(std::abs(w)));
    return double(sign) * std::sqrt(1.0 + w / p.a);
}

Complex branch_pair(const BaseParam& p, int sign, Complex w) {
    // symbol + is g_+ o g_-, symbol - is g_- o g_+
    return inverse_branch(p, sign, inverse_branch(p, -sign, w));
}

double branch_derivative_sup(const BaseParam& p, Complex center, double radius) {
    // |g'(w)| = 1 / (2|a| sqrt|1 + w/a|);  |1 + w/a| >= |1 + c/a| - r/|a| on D(c,r)
    double lo = std::abs(1.0 + center / p.a) - radius / std::abs(p.a);
    if (!(lo > 0.0))
        throw DomainError("branch_derivative_sup: disk reaches the branch point");
    return 1.0 / (2.0 * std::abs(p.a) * std::sqrt(lo));
}

void BaseRegions::box_symbols(int j, int& s1, int& s2) {
    switch (j) {
        case 1: s1 = +1; s2 = +1; return;
        case 2: s1 = +1; s2 = -1; return;
        case 3: s1 = -1; s2 = +1; return;
        case 4: s1 = -1; s2 = -1; return;
        default: throw DomainError("box index must be 1..4");
    }
}

bool BaseRegions::in_U(int sign, Complex w) const {
    BaseParam p(a);
    Complex qw = q_apply(a, w);
    if (!(std::abs(qw) < 3.0)) return false;
    // w lies in g_sign(D_3) exactly when the branch applied to q(w) returns w
    return std::abs(inverse_branch(p, sign, qw) - w) < 1e-9;
}

bool BaseRegions::in_V(int sign, Complex w) const {
    return in_U(sign, w) && in_U(-sign, q_apply(a, w));
}

bool BaseRegions::in_V_box(int j, Complex w) const {
    int s1 = 0, s2 = 0;
    box_symbols(j, s1, s2);
    return in_V(s1, w) && in_V(s2, q_iterate(a, w, 2));
}

BaseRegions base_regions(const BaseParam& p) {
    BaseRegions r;
    r.a = p.a;
    double absa = std::abs(p.a);
    // |g_s(w) - s| = |w/a| / |sqrt(1+w/a) + 1| <= (3/|a|) / (1 + sqrt(1 - 3/|a|))
    double rU = (3.0 / absa) / (1.0 + std::sqrt(1.0 - 3.0 / absa));
    r.U_plus = {Complex(1.0, 0.0), rU};
    r.U_minus = {Complex(-1.0, 0.0), rU};

    auto branch_image = [&](int s, const Disk& d) {
        Complex c = inverse_branch(p, s, d.center);
        double lip = branch_derivative_sup(p, d.center, d.radius);
        return d.lipschitz_image(c, lip);
    };
    r.V_plus = branch_image(+1, r.U_minus);
    r.V_minus = branch_image(-1, r.U_plus);

    for (int j = 1; j <= 4; ++j) {
        int s1 = 0, s2 = 0;
        BaseRegions::box_symbols(j, s1, s2);
        const Disk& inner = (s2 == 1) ? r.V_plus : r.V_minus;
        // V_j = B_{s1}(V_{s2}) = g_{s1}(g_{-s1}(V_{s2}))
        Disk mid = branch_image(-s1, inner);
        r.V_box[j - 1] = branch_image(s1, mid);
    }
    return r;
}

Complex fixed_point_neg(const BaseParam& p) {
    // roots of a w^2 - w - a: w = (1 +- sqrt(1+4a^2)) / (2a)
    Complex s = std::sqrt(1.0 + 4.0 * p.a * p.a);
    double tol = 3.0 / std::abs(p.a);
    for (Complex w : {(1.0 + s) / (2.0 * p.a), (1.0 - s) / (2.0 * p.a)}) {
        if (std::abs(w + 1.0) < tol) return w;
    }
    throw BranchError("fixed_point_neg: no root inside D(-1, 3/|a|)");
}

PeriodicOrbit two_cycle(const BaseParam& p) {
    // second factor of q^2(w) - w: a^2 w^2 + a w + 1 - a^2
    Complex s = std::sqrt(4.0 * p.a * p.a - 3.0);
    Complex cand0 = (-1.0 - s) / (2.0 * p.a);
    Complex cand1 = (-1.0 + s) / (2.0 * p.a);
    double tol = 3.0 / std::abs(p.a);
    Complex w0;
    if (std::abs(cand0 + 1.0) < tol)
        w0 = cand0;
    else if (std::abs(cand1 + 1.0) < tol)
        w0 = cand1;
    else
        throw ConvergenceError("two_cycle: no candidate near -1");

    // Newton polish on q^2(w) - w
    bool ok = false;
    for (int it = 0; it < 100; ++it) {
        Complex w1 = q_apply(p, w0);
        Complex f = q_apply(p, w1) - w0;
        Complex df = 4.0 * p.a * p.a * w0 * w1 - 1.0;
        Complex step = f / df;
        w0 -= step;
        if (std::abs(step) < 1e-13) { ok = true; break; }
    }
    if (!ok) throw ConvergenceError("two_cycle: Newton did not settle in 100 steps");

    PeriodicOrbit orbit;
    orbit.period = 2;
    Complex w1 = q_apply(p, w0);
    orbit.points = {w0, w1};
    orbit.multiplier = 4.0 * p.a * p.a * w0 * w1;
    orbit.kind = classify(orbit.multiplier);
    return orbit;
}

CantorPoint cantor_point(const BaseParam& p, const SymbolWord& word, int N) {
    if (N < 1) throw DomainError("cantor_point: need at least one branch pair");
    Complex w = 0.0;
    for (int k = N - 1; k >= 0; --k) w = branch_pair(p, word.at(k), w);
    double m1 = branch_derivative_sup(p, Complex(0.0, 0.0), 3.0);
    double kappa = m1 * m1;  // contraction of one branch pair on D_3
    CantorPoint out;
    out.value = w;
    out.error_bound = 6.0 * std::pow(kappa, double(N)) / (1.0 - kappa);
    return out;
}

std::vector<PeriodicOrbit> base_periodic_points(const BaseParam& p, int n) {
    if (n < 1 || n > 12)
        throw DomainError("base_periodic_points: period must be in 1..12");

    std::vector<PeriodicOrbit> orbits;
    unsigned total = 1u << n;
    for (unsigned bits = 0; bits < total; ++bits) {
        if (!canonical_necklace(bits, n)) continue;

        // signs of the one-step coding; bit k set means symbol +
        std::vector<int> sign(n);
        for (int k = 0; k < n; ++k) sign[k] = (bits >> k) & 1u ? +1 : -1;

        // fixed point of g_{s_0} o ... o g_{s_{n-1}} by plain contraction
        Complex w = 0.0;
        for (int pass = 0; pass < 200; ++pass) {
            Complex prev = w;
            for (int k = n - 1; k >= 0; --k) w = inverse_branch(p, sign[k], w);
            if (std::abs(w - prev) < 1e-13) break;
        }

        // Newton polish on q^n(w) - w with (q^n)' = prod 2 a w_k
        for (int it = 0; it < 50; ++it) {
            Complex x = w, dq = 1.0;
            for (int k = 0; k < n; ++k) {
                dq *= 2.0 * p.a * x;
                x = q_apply(p, x);
            }
            Complex step = (x - w) / (dq - 1.0);
            w -= step;
            if (std::abs(step) < 1e-14) break;
        }
        // Backward-error gate: the forward residual is amplified by the
        // multiplier (about (2|a|)^n), so a raw threshold would be
        // unattainable in doubles from n=4 on.  Bound the *position* error
        // res/|multiplier - 1| instead.
        {
            Complex x = w, dq = 1.0;
            for (int k = 0; k < n; ++k) {
                dq *= 2.0 * p.a * x;
                x = q_apply(p, x);
            }
            const double res = std::abs(x - w);
            const double scale = std::max(1.0, std::abs(dq - 1.0));
            if (res > 1e-8 * scale)
                throw RootSolverError("base_periodic_points: residual above scaled 1e-8 for word " +
                                      std::to_string(bits));
        }

        int period = necklace_period(bits, n);
        PeriodicOrbit orbit;
        orbit.period = period;
        orbit.points.reserve(period);
        // Populate the orbit from the shifted words, not by forward
        // iteration: q expands by ~2|a| per step, so a forward orbit loses
        // all accuracy within a few steps while each backward solve is
        // machine-exact.
        Complex mult = 1.0;
        for (int shift = 0; shift < period; ++shift) {
            Complex x = (shift == 0) ? w : Complex(0.0);
            if (shift != 0) {
                for (int pass = 0; pass < 200; ++pass) {
                    Complex prev = x;
                    for (int k = n - 1; k >= 0; --k)
                        x = inverse_branch(p, sign[(k + shift) % n], x);
                    if (std::abs(x - prev) < 1e-13) break;
                }
            }
            orbit.points.push_back(x);
            mult *= 2.0 * p.a * x;
        }
        orbit.multiplier = mult;
        orbit.kind = classify(mult);
        orbits.push_back(std::move(orbit));
    }
    return orbits;
}

double base_lyapunov(const BaseParam& p, LyapunovMethod method, int order,
                     std::uint64_t seed) {
    if (method == LyapunovMethod::periodic) {
        auto orbits = base_periodic_points(p, order);
        // each orbit of exact period q contributes q roots, each with
        // log|(q^n)'| / n = log|mult| / q, so the orbit total is log|mult|
        double sum = 0.0;
        for (const auto& o : orbits) sum += std::log(std::abs(o.multiplier));
        return sum / double(1u << order);
    }

    if (order < 1) throw DomainError("base_lyapunov: sample count must be positive");
    // backward orbit with uniform branch choice equidistributes for the
    // measure of maximal entropy; average log|q'| along it
    Rng rng(seed);
    Complex w = 0.5;
    for (int k = 0; k < 50; ++k) w = inverse_branch(p, rng.next_sign(), w);
    double sum = 0.0;
    for (int k = 0; k < order; ++k) {
        sum += std::log(std::abs(2.0 * p.a * w));
        w = inverse_branch(p, rng.next_sign(), w);
    }
    return sum / double(order);
}

} // namespace sb
