#pragma once

#include <vector>

#include "sb/errors.hpp"
#include "sb/types.hpp"

namespace sb {

// critical-orbit collision q_a^n(0) = q_a^m(0) as a polynomial relation in a,
// or landing on a fixed point of q_a when to_fixed is set (m ignored there,
// the fixed-point equation is cleared to polynomial form)
struct MisiurewiczRelation {
    int n = 1;
    int m = 0;
    bool to_fixed = false;
};

struct MisiurewiczRoot {
    Complex a;
    double residual = 0.0;   // |relation value| after polishing
    Complex transversality;  // parameter derivative of the relation at the root
    double multiplier = 0.0; // |multiplier of the landing cycle|
    bool verified = false;   // small residual and repelling landing cycle
};

// evaluates the relation and its parameter derivative by orbit recurrence
// (coefficients of q_a^n(0) are never formed; degree 2^n - 1 would overflow)
void misiurewicz_relation_value(const MisiurewiczRelation& rel, Complex a,
                                Complex& value, Complex& derivative);

// Multi-start Newton over the window, deduplicated and polished.  Starts that
// fail to converge or leave the window are dropped, never thrown.  Verified
// roots have residual < 1e-8 and a repelling landing cycle, which excludes
// centers (there the critical orbit is periodic and the multiplier vanishes).
std::vector<MisiurewiczRoot> misiurewicz_parameters(const MisiurewiczRelation& rel,
                                                    Complex window_lo,
                                                    Complex window_hi,
                                                    int starts_per_axis = 48);

} // namespace sb
