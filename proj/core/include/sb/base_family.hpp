#pragma once

#include <cstdint>
#include <vector>

#include "sb/disk.hpp"
#include "sb/errors.hpp"
#include "sb/types.hpp"
#include "sb/word.hpp"

namespace sb {

// Quadratic base family q_a(w) = a(w^2 - 1).
//
// The Cantor-set machinery (inverse branches, nested regions, codings) is only
// valid for |a| > 10, which BaseParam enforces at construction.  Plain forward
// iteration is useful for any nonzero a (heights, parameter-plane scans), so
// q_apply / q_iterate also come in free-standing overloads on a raw parameter.
struct BaseParam {
    Complex a;

    explicit BaseParam(Complex a_) : a(a_) {
        if (!(std::abs(a) > 10.0))
            throw DomainError("BaseParam: need |a| > 10, got |a| = " +
                              std::to_string(std::abs(a)));
    }
};

inline Complex q_apply(Complex a, Complex w) { return a * (w * w - 1.0); }
inline Complex q_apply(const BaseParam& p, Complex w) { return q_apply(p.a, w); }

// n-fold iteration; n = 0 is the identity.  Escaped orbits saturate to
// infinity instead of producing NaNs from inf*0 cancellations.
Complex q_iterate(Complex a, Complex w, int n);
inline Complex q_iterate(const BaseParam& p, Complex w, int n) {
    return q_iterate(p.a, w, n);
}

// derivative q_a'(w) = 2aw
inline Complex q_derivative(Complex a, Complex w) { return 2.0 * a * w; }

// Inverse branch g_sign(w) = sign * sqrt(1 + w/a), defined on D_3.  The
// argument 1 + w/a stays in D(1, 3/|a|), far from the negative axis, so the
// principal square root is the right branch everywhere.
Complex inverse_branch(const BaseParam& p, int sign, Complex w);

// Branch pair of the second iterate: symbol +1 is g_+ o g_- (lands in V_+),
// symbol -1 is g_- o g_+ (lands in V_-).
Complex branch_pair(const BaseParam& p, int sign, Complex w);

// sup of |g_pm'| over the disk D(center, radius), from
// g'(w) = 1/(2a sqrt(1 + w/a))
double branch_derivative_sup(const BaseParam& p, Complex center, double radius);

// Nested neighborhoods of the two Julia clusters.
//
//   U_pm = g_pm(D_3),   D(+-1, 1/|a|) c U_pm c D(+-1, 3/|a|)
//   V_pm = g_pm(U_mp),  closure(V_pm) c U_pm
//   V_1 = q^-2(V_+) n V_+   V_2 = q^-2(V_-) n V_+
//   V_3 = q^-2(V_+) n V_-   V_4 = q^-2(V_-) n V_-
//
// Membership predicates are exact (branch recomputation); the Disk fields are
// certified outer enclosures used when a region must be covered or sampled.
struct BaseRegions {
    Complex a;
    Disk U_plus, U_minus;
    Disk V_plus, V_minus;
    Disk V_box[4];  // enclosures of V_1..V_4, index j-1

    bool in_U(int sign, Complex w) const;
    bool in_V(int sign, Complex w) const;
    bool in_V_box(int j, Complex w) const;  // j in 1..4

    // symbol pair of box j for the second iterate:  V_1 = (+,+), V_2 = (+,-),
    // V_3 = (-,+), V_4 = (-,-); first symbol = current side, second = side of q^2(w)
    static void box_symbols(int j, int& s1, int& s2);
};

BaseRegions base_regions(const BaseParam& p);

// fixed point w~(a) = (1 - sqrt(1+4a^2))/(2a), the one inside D(-1, 3/|a|)
Complex fixed_point_neg(const BaseParam& p);

struct PeriodicOrbit {
    std::vector<Complex> points;  // one full cycle, length = period
    int period = 1;
    Complex multiplier{0.0, 0.0};  // derivative of q^period along the cycle
    enum class Kind { repelling, attracting, indifferent } kind = Kind::repelling;
};

// the unique 2-cycle (w_0, w_1) with w_0 in V_-, w_1 in V_+
PeriodicOrbit two_cycle(const BaseParam& p);

struct CantorPoint {
    Complex value;
    double error_bound;  // rigorous: 6 * kappa^N with kappa = sup|B'| on D_3
};

// point of the Cantor set E(a) coded by `word`, from N composed branch pairs
CantorPoint cantor_point(const BaseParam& p, const SymbolWord& word, int N);

// All 2^n roots of q^n(w) = w, grouped into orbits with exact period.
// Each root is found as the fixed point of the inverse-branch composition of
// its one-step coding and then Newton-polished; residual target 1e-8.
std::vector<PeriodicOrbit> base_periodic_points(const BaseParam& p, int n);

enum class LyapunovMethod { periodic, birkhoff };

// Base Lyapunov exponent.  periodic: average of log|(q^n)'|/n over all 2^n
// period-n points (order = n <= 12).  birkhoff: average of log|q'| along a
// backward random orbit (order = sample count, burn-in 50).
double base_lyapunov(const BaseParam& p, LyapunovMethod method, int order,
                     std::uint64_t seed);

} // namespace sb
