#pragma once

#include "sb/base_family.hpp"
#include "sb/types.hpp"
#include "sb/word.hpp"

namespace sb {

// Parameters (alpha, beta, epsilon) of the fiber map alone; the limiting IFS
// at a = infinity only sees these.
struct HatParams {
    Complex alpha{0.0, 0.0};
    Complex beta{0.0, 0.0};
    Complex eps{0.0, 0.0};
};

// Full parameter of F_lambda(z,w) = (alpha z + eps w + beta z w, a(w^2 - 1)).
struct SkewParams {
    Complex a;
    Complex alpha, beta, eps;

    SkewParams(Complex a_, Complex alpha_, Complex beta_, Complex eps_)
        : a(a_), alpha(alpha_), beta(beta_), eps(eps_) {
        BaseParam check(a);  // enforces |a| > 10
        (void)check;
    }

    BaseParam base() const { return BaseParam(a); }
    HatParams hat() const { return {alpha, beta, eps}; }
};

// the reference parameter of the certified blender: a=100, alpha=(1+A)zeta,
// beta=2Azeta, eps=eps_ref with A=0.01
SkewParams reference_blender_params();

// aperture-A admissibility of the fiber parameters: 1/20 < |eps| < 1/10,
// |alpha - beta| < 1, |alpha|^2 - |beta|^2 > 1 + A.  Returns the list of
// violated conditions, empty when admissible.
std::vector<std::string> admissibility_violations(const HatParams& hat, double A);

struct SkewPoint {
    Complex z{0.0, 0.0};
    Complex w{0.0, 0.0};
};

SkewPoint skew_apply(const SkewParams& lam, SkewPoint p);

// closed-form second iterate (fiber part affine in z over the base)
SkewPoint skew_apply2(const SkewParams& lam, SkewPoint p);

// fiber coefficients of the second iterate, z' = c1(w) z + c0(w), and their
// w-derivatives (used by cone estimates)
Complex fiber_c1(const SkewParams& lam, Complex w);
Complex fiber_c0(const SkewParams& lam, Complex w);
Complex fiber_c1_dw(const SkewParams& lam, Complex w);
Complex fiber_c0_dw(const SkewParams& lam, Complex w);

// Jacobian of F at p; lower-left entry is identically zero (skew product)
struct Jacobian2 {
    Complex dz_dz, dz_dw;
    Complex dw_dz, dw_dw;
};
Jacobian2 skew_jacobian(const SkewParams& lam, SkewPoint p);

struct SaddleInfo {
    SkewPoint p;
    Complex chi_p;     // horizontal multiplier alpha + beta w~
    Complex chi_vert;  // vertical multiplier 2 a w~
    bool saddle;       // |chi_p| < 1 < |chi_vert|
};

// fixed point P(lambda) = (-eps w~ / (alpha + beta w~ - 1), w~)
SaddleInfo saddle_point(const SkewParams& lam);

struct SkewCycle {
    std::vector<SkewPoint> points;
    int period = 2;
    Complex horizontal;  // fiber multiplier A_2 = (alpha+beta w_0)(alpha+beta w_1)
    Complex vertical;    // base multiplier 4 a^2 w_0 w_1
    Complex chi_r;       // eigenvalue of DF^2 at r of smallest modulus
};

// the repelling 2-cycle r(lambda) over the base 2-cycle
SkewCycle repelling_two_cycle(const SkewParams& lam);

struct CodedPoint {
    SkewPoint x;
    double bound;  // truncation error bound for both coordinates
};

// Point of the hyperbolic set Lambda(lambda) coded by `word`, from N inverse
// branches of F^2: base branch pair per symbol, fiber branch
// z = (z' - c0(w)) / c1(w).
CodedPoint lambda_point(const SkewParams& lam, const SymbolWord& word, int N);

} // namespace sb
