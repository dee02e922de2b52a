#pragma once

#include "sb/certificate.hpp"
#include "sb/skew_family.hpp"

namespace sb {

// Sampling density for the certification grids.  Radial and angular step
// counts both scale with n, and doubling n refines every net in place (the
// coarse nodes stay in the fine net), so margins of sampled infima are
// monotone under refinement.
struct GridSpec {
    int n = 40;
};

// Certifies the blender structure of F^2 over D_R x (V_+ u V_-), R = 100,
// with vertical cone parameter rho.  Checks, in order:
//
//   cone_contraction   DF^2 maps C_rho into a strictly thinner cone over the
//                      tracking universe |z| <= 2.5 (the greedy scheme keeps
//                      fiber tracks inside D_2)
//   injectivity        fiber slope c1(w) bounded away from zero; base second
//                      iterate injective on each box (branch round trip plus
//                      disjoint U enclosures)
//   expansion          smallest singular value of DF^2 above 1 + aperture on
//                      the full D_R universe
//   surjective_cover   closure(D_R x U_pm) inside F^2(D_R x V_pm): the base
//                      chain q^2(V_s) = q(U_-s) = D_3 is exact, the fiber
//                      affine map covers D_R with room |c1| R - |c0| - R
//   ifs_proximity      sup |F^4 fiber - phi_j| on D_2 x V_j below the image
//                      containment margin eta of the limiting IFS covering
//   H_covering         the limiting IFS covering certificate itself (margin =
//                      its smallest check margin; quantities are merged in)
//
// Failures are recorded in the returned certificate rather than thrown; only
// a base strength |a| below the hyperbolicity threshold is a caller error.
BlenderCertificate certify_blender(const SkewParams& lam, double rho,
                                   GridSpec grid = {});

} // namespace sb
