#pragma once

#include <array>

#include "sb/certificate.hpp"
#include "sb/disk.hpp"
#include "sb/skew_family.hpp"
#include "sb/types.hpp"
#include "sb/word.hpp"

namespace sb {

// affine map z -> m z + b on the complex line
struct Affine {
    Complex m{1.0, 0.0};
    Complex b{0.0, 0.0};

    Complex operator()(Complex z) const { return m * z + b; }

    // composition (f.after(g))(z) = f(g(z))
    Affine after(const Affine& g) const { return {m * g.m, m * g.b + b}; }

    Disk image(const Disk& d) const { return d.affine_image(m, b); }

    // fixed point m z + b = z; valid away from m = 1
    Complex fixed_point() const { return b / (1.0 - m); }
};

// mu = (alpha^2 - beta^2)^{-1} of the fiber parameters
Complex ifs_mu(const HatParams& hat);

// Limit branches ell_pm(z) = mu z + nu_pm with nu_pm = mu eps (beta +- (1-alpha)),
// the a -> infinity limit of the inverse fiber branches.  The boundary case
// |alpha^2 - beta^2| = 1 is allowed (the reference parameter zeta sits exactly
// there); only an actually expanding mu is rejected.
std::pair<Affine, Affine> ifs_maps(const HatParams& hat);

// z_omega = eps mu (beta/(1-mu) + (1-alpha) h_omega(mu)) with
// h_omega(mu) = sum omega_n mu^n summed in closed form over head + periodic block
Complex ifs_limit_point(const HatParams& hat, const SymbolWord& word);

// forward maps phi^pm(z) = (alpha^2-beta^2) z - eps (beta +- (1-alpha)) and the
// four second-level compositions phi_1..phi_4 (same symbol order as V_1..V_4:
// phi_1 = phi^+ o phi^+, phi_2 = phi^- o phi^+, phi_3 = phi^+ o phi^-,
// phi_4 = phi^- o phi^-)
struct PhiMaps {
    Affine plus, minus;
    std::array<Affine, 4> second;  // phi_1..phi_4 at index j-1
};
PhiMaps phi_maps(const HatParams& hat);

// Covering regions H_j = D_{4/3} union { z in D_2 : |arg(z zeta^{-(2j-1)})| < pi/3 },
// sector centers at the odd eighth roots of unity.  h_depth is the signed
// euclidean distance into H_j (positive inside).
double h_depth(int j, Complex z);
bool in_H(int j, Complex z);

// second-level inverse compositions ell_{s1} o ell_{s2}, the inverses of
// phi_1..phi_4, indexed like the phi (and V) boxes
std::array<Affine, 4> ifs_second_level(const HatParams& hat);

// For each region index j, the second-level map whose attracting fixed point
// sits in sector j (angular nearest-match).  With expansion ~1 and small
// translations the pairing is stable; at the reference parameters it is
// (1,2,4,3).
std::array<int, 4> h_pairing(const HatParams& hat);

// Certifies the covering structure of the limiting IFS:
//   - sector_union_covers_D2: D_2 = union H_j (boundary net, angular margin)
//   - unit_disk_in_intersection: closure(D_1) inside every H_j
//   - aperture_admissibility: the aperture-A parameter region, with closed
//     boundary so the corner parameter alpha = zeta qualifies
//   - ifs_image_containment: closure(ell_j(H_j)) inside D_2 for the paired
//     second-level inverse branches, by pushing an exact finite disk cover of
//     H_j through the affine maps
// `slack` is the margin each geometric check must clear.  Failures are
// recorded in the certificate, not thrown.
//
// The forward images phi_j(H_j) stay inside D_2 only for apertures below
// roughly 0.004 (at A = 0.01 the slope |alpha^2-beta^2|^2 ~ 1.04 pushes the
// radius-2 sector corners out: 2*1.0398 - 0.071 > 2).  The inverse branches
// are the maps that generate the attractor and contract whenever the aperture
// condition holds, so containment is certified for them.
BlenderCertificate certify_ifs_covering(const HatParams& hat, double aperture,
                                        double slack = 1e-9);

// the finite disk cover of H_j used by check (iii); exposed for reuse and tests
std::vector<Disk> h_cover(int j, double pitch = 0.008);

} // namespace sb
