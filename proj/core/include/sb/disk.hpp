#pragma once

#include <algorithm>
#include <cmath>

#include "sb/types.hpp"

namespace sb {

// Closed disk in the complex plane.  Used both as a plain region and as a
// one-step enclosure: affine images are exact, nonlinear images go through
// a supremum bound on the derivative supplied by the caller.
struct Disk {
    Complex center{0.0, 0.0};
    double radius = 0.0;

    bool contains(Complex z, double slack = 0.0) const {
        return std::abs(z - center) <= radius - slack;
    }
    bool contains(const Disk& other, double slack = 0.0) const {
        return std::abs(other.center - center) + other.radius <= radius - slack;
    }
    // signed distance from z to the boundary; positive inside
    double depth(Complex z) const { return radius - std::abs(z - center); }

    Disk inflate(double by) const { return {center, radius + by}; }

    // exact image under z -> m*z + t
    Disk affine_image(Complex m, Complex t) const {
        return {m * center + t, std::abs(m) * radius};
    }

    // enclosure of f(D) given f(center) and a sup bound for |f'| on D
    Disk lipschitz_image(Complex f_center, double deriv_sup) const {
        return {f_center, deriv_sup * radius};
    }
};

} // namespace sb
