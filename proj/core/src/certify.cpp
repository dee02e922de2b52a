#include "sb/certify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <vector>

#include "sb/base_family.hpp"
#include "sb/errors.hpp"
#include "sb/ifs.hpp"

namespace sb {

namespace {

constexpr double kUniverseRadius = 100.0;  // D_R in the blender statement
constexpr double kTrackRadius = 2.5;       // cone check universe; tracks live in D_2
constexpr double kAperture = 0.01;

// nested polar net over a closed disk: radial fractions i/n, 4n angles;
// doubling n keeps every coarse node, so sampled infima can only shrink
std::vector<Complex> disk_net(const Disk& d, int n) {
    std::vector<Complex> pts;
    pts.reserve(static_cast<std::size_t>(n) * 4 * n + 1);
    pts.push_back(d.center);
    for (int i = 1; i <= n; ++i) {
        double r = d.radius * i / n;
        for (int k = 0; k < 4 * n; ++k)
            pts.push_back(d.center + std::polar(r, 2.0 * pi * k / (4 * n)));
    }
    return pts;
}

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

} // namespace

BlenderCertificate certify_blender(const SkewParams& lam, double rho,
                                   GridSpec grid) {
    if (std::abs(lam.a) < 99.0)
        throw DomainError("certify_blender: |a| = " + fmt(std::abs(lam.a)) +
                          " below the certified strength threshold 99");
    if (!(rho > 0.0))
        throw DomainError("certify_blender: cone parameter must be positive");
    if (grid.n < 4) throw DomainError("certify_blender: grid too coarse");

    BaseParam bp = lam.base();
    BaseRegions reg = base_regions(bp);
    const Complex a = lam.a;

    // the limiting-IFS covering fragment runs first: its image containment
    // margin is the slack eta that the proximity check must beat
    BlenderCertificate sub = certify_ifs_covering(lam.hat(), kAperture);
    double eta = 0.0;
    if (const CertCheck* c = sub.find("ifs_image_containment")) eta = c->margin;

    std::vector<Complex> side_net;
    {
        auto p = disk_net(reg.V_plus, grid.n);
        auto m = disk_net(reg.V_minus, grid.n);
        side_net = p;
        side_net.insert(side_net.end(), m.begin(), m.end());
    }

    BlenderCertificate cert;

    // (1) vertical cones |dz| <= |dw|/rho map into a strictly thinner cone:
    // the image aperture is (|c1|/rho + |J12|)/|(q^2)'|, and |J12| over the
    // tracking disk is |c1'| R_track + |c0'| exactly (affine in z)
    {
        double worst = std::numeric_limits<double>::infinity();
        for (Complex w : side_net) {
            Complex q2d = 4.0 * a * a * w * q_apply(bp, w);
            double j12 = std::abs(fiber_c1_dw(lam, w)) * kTrackRadius +
                         std::abs(fiber_c0_dw(lam, w));
            double rho_img = std::abs(q2d) / (std::abs(fiber_c1(lam, w)) / rho + j12);
            worst = std::min(worst, rho_img);
        }
        CertCheck c;
        c.name = "cone_contraction";
        c.margin = worst / rho - 1.0;
        c.pass = c.margin > 0.0;
        c.rigor = "sampled";
        c.detail = "image cone parameter >= " + fmt(worst) + " against rho = " + fmt(rho);
        cert.checks.push_back(c);
        cert.quantities.emplace_back("cone_rho_image", worst);
    }

    // (2) injectivity of F^2 on each D_R x V_j: the fiber map is affine with
    // slope c1(w) != 0, and the base second iterate inverts through its own
    // branch pair (round trip at sampled points, U enclosures disjoint)
    {
        double min_c1 = std::numeric_limits<double>::infinity();
        for (Complex w : side_net)
            min_c1 = std::min(min_c1, std::abs(fiber_c1(lam, w)));
        double separation =
            std::abs(reg.U_plus.center - reg.U_minus.center) - reg.U_plus.radius -
            reg.U_minus.radius;
        double round_trip = 0.0;
        for (int j = 1; j <= 4; ++j) {
            int s1 = 0, s2 = 0;
            BaseRegions::box_symbols(j, s1, s2);
            for (Complex w : disk_net(reg.V_box[j - 1], grid.n / 2)) {
                Complex back = branch_pair(bp, s1, q_iterate(bp, w, 2));
                round_trip = std::max(round_trip, std::abs(back - w));
            }
        }
        CertCheck c;
        c.name = "injectivity";
        c.margin = std::min(min_c1, separation);
        c.pass = c.margin > 0.0 && round_trip < 1e-9;
        c.rigor = "sampled";
        c.detail = "min |c1| = " + fmt(min_c1) + ", U separation = " +
                   fmt(separation) + ", branch round trip = " + fmt(round_trip);
        cert.checks.push_back(c);
        cert.quantities.emplace_back("min_fiber_slope", min_c1);
    }

    // (3) uniform expansion: smallest singular value of the triangular
    // DF^2 = [[c1, J12], [0, (q^2)']] above 1 + aperture everywhere on D_R;
    // J12 takes its sup over |z| <= R, the worst case for sigma_min
    {
        double min_sigma = std::numeric_limits<double>::infinity();
        for (Complex w : side_net) {
            double A = std::abs(fiber_c1(lam, w));
            double B = std::abs(fiber_c1_dw(lam, w)) * kUniverseRadius +
                       std::abs(fiber_c0_dw(lam, w));
            double D = std::abs(4.0 * a * a * w * q_apply(bp, w));
            double t = A * A + B * B + D * D;
            double det = A * D;
            double s2 = 0.5 * (t - std::sqrt(std::max(t * t - 4.0 * det * det, 0.0)));
            min_sigma = std::min(min_sigma, std::sqrt(std::max(s2, 0.0)));
        }
        CertCheck c;
        c.name = "expansion";
        c.margin = min_sigma - (1.0 + kAperture);
        c.pass = c.margin > 0.0;
        c.rigor = "sampled";
        c.detail = "min singular value " + fmt(min_sigma) + " vs 1 + A = " +
                   fmt(1.0 + kAperture);
        cert.checks.push_back(c);
        cert.quantities.emplace_back("min_singular_value", min_sigma);
    }

    // (4) closure(D_R x U_pm) inside F^2(D_R x V_pm).  Base part is an exact
    // chain: q^2(V_s) = q(U_-s) = D_3, which contains the closed U enclosures
    // with room 3 - (1 + r_U).  Fiber part: the affine image of |z| <= R is a
    // disk of radius |c1| R about c0, covering D_R with room (|c1|-1)R - |c0|.
    {
        double r_u = std::max(reg.U_plus.radius, reg.U_minus.radius);
        double base_room = 3.0 - (1.0 + r_u);
        double fiber_room = std::numeric_limits<double>::infinity();
        for (Complex w : side_net) {
            double room = (std::abs(fiber_c1(lam, w)) - 1.0) * kUniverseRadius -
                          std::abs(fiber_c0(lam, w));
            fiber_room = std::min(fiber_room, room);
        }
        CertCheck c;
        c.name = "surjective_cover";
        c.margin = std::min(base_room, fiber_room);
        c.pass = c.margin > 0.0;
        c.rigor = "sampled";
        c.detail = "base room " + fmt(base_room) + " (exact chain), fiber room " +
                   fmt(fiber_room);
        cert.checks.push_back(c);
    }

    // (5) the F^4 fiber action is affine over the base, so its deviation from
    // phi_j over |z| <= 2 is |slope - m_j| * 2 + |const - b_j| pointwise in w;
    // it must stay below the IFS image containment slack eta
    {
        PhiMaps phi = phi_maps(lam.hat());
        double dev = 0.0;
        for (int j = 1; j <= 4; ++j) {
            const Affine& pj = phi.second[j - 1];
            for (Complex w : disk_net(reg.V_box[j - 1], grid.n)) {
                Complex w2 = q_iterate(bp, w, 2);
                Complex slope4 = fiber_c1(lam, w2) * fiber_c1(lam, w);
                Complex const4 = fiber_c1(lam, w2) * fiber_c0(lam, w) + fiber_c0(lam, w2);
                dev = std::max(dev, std::abs(slope4 - pj.m) * 2.0 +
                                        std::abs(const4 - pj.b));
            }
        }
        CertCheck c;
        c.name = "ifs_proximity";
        c.margin = eta - dev;
        c.pass = c.margin > 0.0;
        c.rigor = "sampled";
        c.detail = "sup |F^4 - phi_j| = " + fmt(dev) + " vs slack eta = " + fmt(eta);
        cert.checks.push_back(c);
        cert.quantities.emplace_back("proximity_sup", dev);
    }

    // (6) the limiting IFS covering certificate, folded into one line
    {
        CertCheck c;
        c.name = "H_covering";
        c.pass = sub.pass;
        c.margin = std::numeric_limits<double>::infinity();
        for (const auto& s : sub.checks) {
            c.margin = std::min(c.margin, s.margin);
            if (!s.pass && c.detail.empty()) c.detail = s.name + ": " + s.detail;
        }
        if (c.detail.empty()) c.detail = "all covering sub-checks hold";
        c.rigor = "exact-disk";
        cert.checks.push_back(c);
    }

    cert.quantities.emplace_back("rho", rho);
    cert.quantities.emplace_back("universe_radius", kUniverseRadius);
    cert.quantities.emplace_back("track_radius", kTrackRadius);
    cert.quantities.emplace_back("aperture", kAperture);
    for (const auto& q : sub.quantities) cert.quantities.push_back(q);
    cert.finish();
    return cert;
}

} // namespace sb
