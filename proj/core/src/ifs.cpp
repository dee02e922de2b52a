#include "sb/ifs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace sb {

namespace {

double wrap_angle(double t) { return std::remainder(t, 2.0 * pi); }

double sector_center(int j) { return (2.0 * j - 1.0) * pi / 4.0; }

// euclidean distance from p to the segment [A, B]
double segment_dist(Complex p, Complex A, Complex B) {
    Complex AB = B - A;
    double len2 = std::norm(AB);
    double t = len2 > 0.0 ? std::clamp(((p - A) * std::conj(AB)).real() / len2, 0.0, 1.0)
                          : 0.0;
    return std::abs(p - (A + t * AB));
}

// distance to the closed sector {|z| <= 2, |arg(z) - theta_j| <= pi/3}
double sector_dist(int j, Complex z) {
    double r = std::abs(z);
    if (r == 0.0) return 0.0;
    double d = std::abs(wrap_angle(std::arg(z) - sector_center(j)));
    if (d <= pi / 3.0) return std::max(0.0, r - 2.0);
    Complex e1 = std::polar(2.0, sector_center(j) + pi / 3.0);
    Complex e2 = std::polar(2.0, sector_center(j) - pi / 3.0);
    return std::min(segment_dist(z, Complex(0.0, 0.0), e1),
                    segment_dist(z, Complex(0.0, 0.0), e2));
}

// euclidean distance to the closed region H_j (0 when inside)
double h_dist(int j, Complex z) {
    double to_disk = std::max(0.0, std::abs(z) - 4.0 / 3.0);
    return std::min(to_disk, sector_dist(j, z));
}

} // namespace

Complex ifs_mu(const HatParams& hat) {
    return 1.0 / (hat.alpha * hat.alpha - hat.beta * hat.beta);
}

std::pair<Affine, Affine> ifs_maps(const HatParams& hat) {
    Complex det = hat.alpha * hat.alpha - hat.beta * hat.beta;
    // the reference fiber parameter alpha = zeta has |det| = 1 exactly, so the
    // boundary is admitted; only genuinely expanding mu is rejected
    if (std::abs(det) < 1.0 - 1e-12)
        throw DegenerateError("ifs_maps: |alpha^2 - beta^2| < 1, limit branches expand");
    Complex mu = 1.0 / det;
    Affine plus{mu, mu * hat.eps * (hat.beta + (1.0 - hat.alpha))};
    Affine minus{mu, mu * hat.eps * (hat.beta - (1.0 - hat.alpha))};
    return {plus, minus};
}

Complex ifs_limit_point(const HatParams& hat, const SymbolWord& word) {
    auto maps = ifs_maps(hat);
    Complex mu = maps.first.m;
    if (std::abs(1.0 - mu) < 1e-9)
        throw DegenerateError("ifs_limit_point: mu resonant at 1");

    // h_omega(mu) = sum_{n>=0} omega_n mu^n: finite head, geometric block tail
    Complex h = 0.0, mupow = 1.0;
    for (int n = 0; n < int(word.head.size()); ++n) {
        h += double(word.head[n]) * mupow;
        mupow *= mu;
    }
    Complex block = 0.0, bpow = 1.0;
    for (int k = 0; k < int(word.block.size()); ++k) {
        block += double(word.block[k]) * bpow;
        bpow *= mu;
    }
    // bpow is now mu^period
    if (std::abs(1.0 - bpow) < 1e-9)
        throw DegenerateError("ifs_limit_point: mu^period resonant at 1");
    h += mupow * block / (1.0 - bpow);

    return hat.eps * mu * (hat.beta / (1.0 - mu) + (1.0 - hat.alpha) * h);
}

PhiMaps phi_maps(const HatParams& hat) {
    Complex det = hat.alpha * hat.alpha - hat.beta * hat.beta;
    Affine plus{det, -hat.eps * (hat.beta + (1.0 - hat.alpha))};
    Affine minus{det, -hat.eps * (hat.beta - (1.0 - hat.alpha))};
    PhiMaps out;
    out.plus = plus;
    out.minus = minus;
    // phi_j = phi^{s2} o phi^{s1} with (s1, s2) the symbol pair of box j
    out.second[0] = plus.after(plus);
    out.second[1] = minus.after(plus);
    out.second[2] = plus.after(minus);
    out.second[3] = minus.after(minus);
    return out;
}

double h_depth(int j, Complex z) {
    double r = std::abs(z);
    double disk_depth = 4.0 / 3.0 - r;
    if (r == 0.0) return disk_depth;
    double d = std::abs(wrap_angle(std::arg(z) - sector_center(j)));
    // signed distance to the wedge boundary rays; beyond pi/3 + pi/2 the apex
    // dominates and -r is the honest bound
    double ray = (d < pi / 3.0 + pi / 2.0) ? r * std::sin(pi / 3.0 - d) : -r;
    double sector_depth = std::min(2.0 - r, ray);
    return std::max(disk_depth, sector_depth);
}

bool in_H(int j, Complex z) { return h_depth(j, z) > 0.0; }

std::vector<Disk> h_cover(int j, double pitch) {
    // Square grid of centers kept whenever they sit within one pitch of H_j;
    // radius = pitch then guarantees the union contains H_j (nearest grid
    // point to any x in H_j is within pitch/sqrt(2) and is itself kept) while
    // sticking out by at most 2*pitch.
    std::vector<Disk> cover;
    int n = int(std::ceil(4.4 / pitch));
    for (int iy = 0; iy <= n; ++iy) {
        for (int ix = 0; ix <= n; ++ix) {
            Complex c(-2.2 + ix * pitch, -2.2 + iy * pitch);
            if (h_dist(j, c) <= pitch + 1e-12) cover.push_back({c, pitch});
        }
    }
    return cover;
}

std::array<Affine, 4> ifs_second_level(const HatParams& hat) {
    auto [lp, lm] = ifs_maps(hat);
    // inverse of phi_j = phi^{s2} o phi^{s1} is ell_{s1} o ell_{s2}
    return {lp.after(lp), lp.after(lm), lm.after(lp), lm.after(lm)};
}

std::array<int, 4> h_pairing(const HatParams& hat) {
    auto ell = ifs_second_level(hat);
    std::array<int, 4> pairing{};
    std::array<bool, 4> used{};
    for (int j = 1; j <= 4; ++j) {
        double best = 1e9;
        int pick = -1;
        for (int k = 0; k < 4; ++k) {
            if (used[k]) continue;
            Complex fp = ell[k].fixed_point();
            double d = std::abs(wrap_angle(std::arg(fp) - sector_center(j)));
            if (d < best) { best = d; pick = k; }
        }
        pairing[j - 1] = pick;
        used[pick] = true;
    }
    return pairing;
}

BlenderCertificate certify_ifs_covering(const HatParams& hat, double aperture,
                                        double slack) {
    BlenderCertificate cert;
    cert.quantities.emplace_back("aperture", aperture);

    // (i) closure(D_2) in the union of the H_j.  On |z| = 2 membership is
    // purely angular (the sectors reach the boundary radius), so the margin is
    // the euclidean clearance to the nearest sector edge at radius 2.
    {
        const int net = 4096;
        double margin = 1e9;
        for (int k = 0; k < net; ++k) {
            double theta = 2.0 * pi * k / net;
            double best = -1e9;
            for (int j = 1; j <= 4; ++j) {
                double d = std::abs(wrap_angle(theta - sector_center(j)));
                best = std::max(best, 2.0 * std::sin(pi / 3.0 - d));
            }
            margin = std::min(margin, best);
        }
        cert.checks.push_back({"sector_union_covers_D2", margin > slack, margin,
                               "sampled",
                               "angular clearance on the radius-2 net; radial "
                               "coverage holds by construction"});
    }

    // (ii) closure(D_1) in the intersection of the H_j: net on |z| = 1, worst j
    {
        const int net = 2048;
        double margin = 1e9;
        for (int k = 0; k < net; ++k) {
            Complex z = std::polar(1.0, 2.0 * pi * k / net);
            for (int j = 1; j <= 4; ++j) margin = std::min(margin, h_depth(j, z));
        }
        cert.checks.push_back(
            {"unit_disk_in_intersection", margin > slack, margin, "sampled", ""});
    }

    // aperture-A parameter region, closed at the boundary so the corner
    // parameter (alpha = zeta, A = 0) qualifies
    {
        double m_eps = std::min(std::abs(hat.eps) - 1.0 / 20.0,
                                1.0 / 10.0 - std::abs(hat.eps));
        double m_ab = 1.0 - std::abs(hat.alpha - hat.beta);
        double m_exp = std::norm(hat.alpha) - std::norm(hat.beta) - (1.0 + aperture);
        double margin = std::min({m_eps, m_ab, m_exp});
        std::string detail;
        if (margin <= -1e-9) {
            std::ostringstream os;
            if (m_eps <= -1e-9) os << "|eps| outside (1/20, 1/10); ";
            if (m_ab <= -1e-9) os << "|alpha-beta| above 1; ";
            if (m_exp <= -1e-9) os << "|alpha|^2-|beta|^2 below 1+A; ";
            detail = os.str();
        }
        cert.checks.push_back(
            {"aperture_admissibility", margin > -1e-9, margin, "sampled", detail});
    }

    // closure(ell_j(H_j)) inside D_2 via the exact disk cover, with the
    // attractor-aligned pairing of second-level inverse branches
    {
        auto ell = ifs_second_level(hat);
        auto pairing = h_pairing(hat);
        double margin = 1e9;
        std::string first_bad;
        for (int j = 1; j <= 4; ++j) {
            const Affine& map = ell[pairing[j - 1]];
            for (const Disk& d : h_cover(j)) {
                Disk im = map.image(d);
                double m = 2.0 - (std::abs(im.center) + im.radius);
                if (m < margin) {
                    margin = m;
                    if (m <= slack && first_bad.empty()) {
                        std::ostringstream os;
                        os << "ell over H_" << j << " pushes disk at ("
                           << d.center.real() << ", " << d.center.imag()
                           << ") r=" << d.radius << " out of D_2 by " << -m;
                        first_bad = os.str();
                    }
                }
            }
        }
        cert.checks.push_back(
            {"ifs_image_containment", margin > slack, margin, "exact-disk", first_bad});

        // governing corner quantities for reporting: the extreme points of the
        // sector arcs pushed through their paired inverse branch
        double corner = 0.0, shift = 0.0;
        for (int j = 1; j <= 4; ++j) {
            const Affine& map = ell[pairing[j - 1]];
            for (double s : {-1.0, 1.0}) {
                Complex zc = std::polar(2.0, sector_center(j) + s * pi / 3.0);
                corner = std::max(corner, std::abs(map(zc)));
            }
            shift = std::max(shift, std::abs(map.b));
        }
        cert.quantities.emplace_back("governing_corner_modulus", corner);
        cert.quantities.emplace_back("translation_max", shift);
    }

    cert.finish();
    return cert;
}

} // namespace sb
