#include "sb/raster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "sb/config.hpp"
#include "sb/graphs.hpp"
#include "sb/green.hpp"
#include "sb/parallel.hpp"
#include "sb/rng.hpp"

namespace sb {

namespace {

// real-linear independence of two tangent vectors, viewed over R^8
void require_independent(const ParamDir& d1, const ParamDir& d2) {
    auto dot = [](const ParamDir& x, const ParamDir& y) {
        return x.da.real() * y.da.real() + x.da.imag() * y.da.imag() +
               x.dalpha.real() * y.dalpha.real() + x.dalpha.imag() * y.dalpha.imag() +
               x.dbeta.real() * y.dbeta.real() + x.dbeta.imag() * y.dbeta.imag() +
               x.deps.real() * y.deps.real() + x.deps.imag() * y.deps.imag();
    };
    const double n1 = dot(d1, d1), n2 = dot(d2, d2), cross = dot(d1, d2);
    if (n1 <= 0.0 || n2 <= 0.0)
        throw DegenerateError("slice: a direction vector is zero");
    if (n1 * n2 - cross * cross <= 1e-12 * n1 * n2)
        throw DegenerateError("slice: direction vectors are parallel");
}

} // namespace

SliceSpec::SliceSpec(const SkewParams& anchor, const ParamDir& d1,
                     const ParamDir& d2, double u_lo, double u_hi, double v_lo,
                     double v_hi, int nx, int ny)
    : a_(anchor.a), alpha_(anchor.alpha), beta_(anchor.beta), eps_(anchor.eps),
      base_only_(false), d1_(d1), d2_(d2), u0_(u_lo), u1_(u_hi), v0_(v_lo),
      v1_(v_hi), nx_(nx), ny_(ny) {
    validate();
}

SliceSpec::SliceSpec(Complex base_anchor, Complex da1, Complex da2, double u_lo,
                     double u_hi, double v_lo, double v_hi, int nx, int ny)
    : a_(base_anchor), alpha_(0.0), beta_(0.0), eps_(0.0), base_only_(true),
      d1_{da1, 0.0, 0.0, 0.0}, d2_{da2, 0.0, 0.0, 0.0}, u0_(u_lo), u1_(u_hi),
      v0_(v_lo), v1_(v_hi), nx_(nx), ny_(ny) {
    validate();
}

void SliceSpec::validate() const {
    require_independent(d1_, d2_);
    if (nx_ < 1 || ny_ < 1)
        throw GridError("slice: resolution must be at least 1x1");
    if (!(u1_ >= u0_) || !(v1_ >= v0_))
        throw GridError("slice: window is inverted");
    if ((nx_ > 1 && !(u1_ > u0_)) || (ny_ > 1 && !(v1_ > v0_)))
        throw GridError("slice: window collapses but resolution exceeds 1");
}

double SliceSpec::u_at(int i) const {
    return nx_ > 1 ? u0_ + (u1_ - u0_) * i / (nx_ - 1) : u0_;
}

double SliceSpec::v_at(int j) const {
    return ny_ > 1 ? v0_ + (v1_ - v0_) * j / (ny_ - 1) : v0_;
}

PixelParams SliceSpec::at(int i, int j) const {
    const double u = u_at(i), v = v_at(j);
    return {a_ + u * d1_.da + v * d2_.da, alpha_ + u * d1_.dalpha + v * d2_.dalpha,
            beta_ + u * d1_.dbeta + v * d2_.dbeta, eps_ + u * d1_.deps + v * d2_.deps};
}

std::string to_string(RasterFn fn) {
    switch (fn) {
        case RasterFn::lyapunov: return "lyapunov";
        case RasterFn::green_at_point: return "green_at_point";
        case RasterFn::residual_x_omega: return "residual_x_omega";
        case RasterFn::g_on_critical: return "g_on_critical";
    }
    throw DomainError("raster: unknown function id");
}

namespace {

double eval_pixel(RasterFn fn, bool base_only, const RasterBudgets& b,
                  const PixelParams& p, std::uint64_t pixel_seed) {
    switch (fn) {
        case RasterFn::lyapunov:
            if (base_only)
                return std::log(2.0) + green_base_raw(p.a, 0.0, b.tol, b.budget).value;
            return lyapunov_skew(SkewParams(p.a, p.alpha, p.beta, p.eps), b.order,
                                 pixel_seed)
                .L_sum;
        case RasterFn::green_at_point:
            if (base_only) return green_base_raw(p.a, b.at_w, b.tol, b.budget).value;
            return green(RegularSkewMap(SkewParams(p.a, p.alpha, p.beta, p.eps),
                                        Complex(b.c, 0.0)),
                         {b.at_z, b.at_w}, b.tol, b.budget)
                .value;
        case RasterFn::residual_x_omega:
            return std::abs(
                x_in_unstable_residual(SkewParams(p.a, p.alpha, p.beta, p.eps), b.word));
        case RasterFn::g_on_critical: {
            if (base_only) return green_base_raw(p.a, 0.0, b.tol, b.budget).value;
            RegularSkewMap map(SkewParams(p.a, p.alpha, p.beta, p.eps),
                               Complex(b.c, 0.0));
            const Complex zc = -p.alpha / (2.0 * map.c);  // fiber-critical over w = 0
            return green(map, {zc, 0.0}, b.tol, b.budget).value;
        }
    }
    throw DomainError("raster: unknown function id");
}

} // namespace

Raster raster_map(const SliceSpec& slice, RasterFn fn, const RasterBudgets& budgets,
                  std::uint64_t seed, int workers) {
    Raster r(slice);
    r.fn_id = to_string(fn);
    r.budgets = budgets;
    r.seed = seed;
    const int nx = slice.nx();
    const std::size_t total = static_cast<std::size_t>(nx) * slice.ny();
    parallel_for(total, workers < 1 ? 1u : static_cast<unsigned>(workers),
                 [&](std::size_t k) {
                     const int i = static_cast<int>(k % nx);
                     const int j = static_cast<int>(k / nx);
                     const std::uint64_t pixel_seed = Rng::child(seed, k).next_u64();
                     try {
                         r.values[k] =
                             eval_pixel(fn, slice.base_only(), budgets,
                                        slice.at(i, j), pixel_seed);
                     } catch (const Error&) {
                         r.values[k] = 0.0;
                         r.mask[k] = 1;
                     }
                 });
    return r;
}

Raster laplacian_density(const Raster& r) {
    const int nx = r.slice.nx(), ny = r.slice.ny();
    if (nx < 3 || ny < 3)
        throw GridError("laplacian_density: need at least 3x3 pixels");
    const double hx = r.slice.hx(), hy = r.slice.hy();

    double scale = 0.0;
    for (std::size_t k = 0; k < r.values.size(); ++k)
        if (!r.mask[k]) scale = std::max(scale, std::abs(r.values[k]));
    const double floor = -1e-6 * std::max(scale, 1e-300);

    Raster out(r.slice);
    out.fn_id = "laplacian(" + r.fn_id + ")";
    out.budgets = r.budgets;
    out.seed = r.seed;
    std::fill(out.mask.begin(), out.mask.end(), std::uint8_t(1));
    for (int j = 1; j + 1 < ny; ++j) {
        for (int i = 1; i + 1 < nx; ++i) {
            if (r.is_masked(i, j) || r.is_masked(i - 1, j) || r.is_masked(i + 1, j) ||
                r.is_masked(i, j - 1) || r.is_masked(i, j + 1))
                continue;
            const double c = r.value(i, j);
            const double lap = (r.value(i + 1, j) + r.value(i - 1, j) - 2.0 * c) /
                                   (hx * hx) +
                               (r.value(i, j + 1) + r.value(i, j - 1) - 2.0 * c) /
                                   (hy * hy);
            out.values[out.idx(i, j)] = std::max(lap, floor);
            out.mask[out.idx(i, j)] = 0;
        }
    }
    return out;
}

DensityReport pcf_density_report(const Raster& density,
                                 const std::vector<Complex>& points) {
    if (points.empty()) throw EmptyInput("pcf_density_report: no points");
    const SliceSpec& s = density.slice;
    if (!s.base_only())
        throw GridError("pcf_density_report: base-plane slice required");
    const Complex d1 = s.dir1().da, d2 = s.dir2().da;
    const double det = d1.real() * d2.imag() - d2.real() * d1.imag();
    if (std::abs(det) < 1e-14)
        throw GridError("pcf_density_report: directions do not span the a plane");

    std::vector<double> vals;
    vals.reserve(density.values.size());
    for (std::size_t k = 0; k < density.values.size(); ++k)
        if (!density.mask[k]) vals.push_back(density.values[k]);
    if (vals.empty()) throw EmptyInput("pcf_density_report: fully masked raster");
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    const double median = vals[vals.size() / 2];

    const double uspan = std::max(s.u1() - s.u0(), 1e-300);
    const double vspan = std::max(s.v1() - s.v0(), 1e-300);
    auto bin_of = [&](double u, double v) {
        const int bu = std::min(7, std::max(0, static_cast<int>((u - s.u0()) / uspan * 8)));
        const int bv = std::min(7, std::max(0, static_cast<int>((v - s.v0()) / vspan * 8)));
        return bu + 8 * bv;
    };

    double mass[64] = {};
    double total_mass = 0.0;
    for (int j = 0; j < s.ny(); ++j)
        for (int i = 0; i < s.nx(); ++i) {
            if (density.is_masked(i, j)) continue;
            const double m = std::max(density.value(i, j), 0.0);
            mass[bin_of(s.u_at(i), s.v_at(j))] += m;
            total_mass += m;
        }

    const double slack = 1e-9 * std::max(uspan, vspan);
    int above = 0;
    double emp[64] = {};
    for (const Complex& a : points) {
        const Complex rhs = a - s.anchor_a();
        const double u = (d2.imag() * rhs.real() - d2.real() * rhs.imag()) / det;
        const double v = (-d1.imag() * rhs.real() + d1.real() * rhs.imag()) / det;
        if (u < s.u0() - slack || u > s.u1() + slack || v < s.v0() - slack ||
            v > s.v1() + slack)
            throw GridError("pcf_density_report: point outside the raster window");
        const int i = s.nx() > 1
                          ? std::min(s.nx() - 1,
                                     std::max(0, static_cast<int>(std::lround(
                                                     (u - s.u0()) / s.hx()))))
                          : 0;
        const int j = s.ny() > 1
                          ? std::min(s.ny() - 1,
                                     std::max(0, static_cast<int>(std::lround(
                                                     (v - s.v0()) / s.hy()))))
                          : 0;
        emp[bin_of(u, v)] += 1.0;
        if (!density.is_masked(i, j) && density.value(i, j) > median) ++above;
    }

    DensityReport rep;
    rep.points_used = static_cast<int>(points.size());
    rep.fraction_above_median = static_cast<double>(above) / points.size();
    for (int b = 0; b < 64; ++b) {
        const double pm = total_mass > 0.0 ? mass[b] / total_mass : 0.0;
        rep.bin_discrepancy =
            std::max(rep.bin_discrepancy, std::abs(emp[b] / points.size() - pm));
    }
    return rep;
}

namespace {

struct Corner {
    double u, v, f;
};

// linear zero crossing between two stencil corners
void emit(std::vector<ContourSegment>& out, const Corner& a1, const Corner& b1,
          const Corner& a2, const Corner& b2) {
    auto cross = [](const Corner& a, const Corner& b) {
        const double den = a.f - b.f;
        const double t = (den == 0.0) ? 0.5 : a.f / den;
        return std::pair<double, double>{a.u + t * (b.u - a.u), a.v + t * (b.v - a.v)};
    };
    const auto p = cross(a1, b1);
    const auto q = cross(a2, b2);
    out.push_back({p.first, p.second, q.first, q.second});
}

} // namespace

XOmegaLocus x_omega_locus(const SliceSpec& slice, const SymbolWord& word,
                          const RasterBudgets& budgets, std::uint64_t seed) {
    RasterBudgets b = budgets;
    b.word = word;
    XOmegaLocus locus{raster_map(slice, RasterFn::residual_x_omega, b, seed), 0.0, {}};
    const Raster& r = locus.residual;

    // Contour level: the residual only touches zero at isolated roots, so the
    // ring radius around a root is level / |gradient|.  The median difference
    // between adjacent pixels estimates |gradient| * pixel, and 0.75 of it
    // keeps the ring inside one pixel while the sub-level disk still always
    // captures a pixel center (0.75 > sqrt(2)/2).
    std::vector<double> vals, grads;
    for (std::size_t k = 0; k < r.values.size(); ++k)
        if (!r.mask[k]) vals.push_back(r.values[k]);
    if (vals.empty()) return locus;  // fully masked slice: no contour to extract
    for (int j = 0; j < slice.ny(); ++j)
        for (int i = 0; i + 1 < slice.nx(); ++i)
            if (!r.is_masked(i, j) && !r.is_masked(i + 1, j))
                grads.push_back(std::abs(r.value(i + 1, j) - r.value(i, j)));
    for (int j = 0; j + 1 < slice.ny(); ++j)
        for (int i = 0; i < slice.nx(); ++i)
            if (!r.is_masked(i, j) && !r.is_masked(i, j + 1))
                grads.push_back(std::abs(r.value(i, j + 1) - r.value(i, j)));
    std::nth_element(vals.begin(), vals.begin() + vals.size() / 2, vals.end());
    const double med = vals[vals.size() / 2];
    double level = 0.1 * med;
    if (!grads.empty()) {
        std::nth_element(grads.begin(), grads.begin() + grads.size() / 2, grads.end());
        level = std::min(level, 0.75 * grads[grads.size() / 2]);
    }
    locus.level = std::max(1e-12, level);

    const int nx = slice.nx(), ny = slice.ny();
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            if (r.is_masked(i, j) || r.is_masked(i + 1, j) || r.is_masked(i, j + 1) ||
                r.is_masked(i + 1, j + 1))
                continue;
            const Corner c0{slice.u_at(i), slice.v_at(j), r.value(i, j) - locus.level};
            const Corner c1{slice.u_at(i + 1), slice.v_at(j),
                            r.value(i + 1, j) - locus.level};
            const Corner c2{slice.u_at(i + 1), slice.v_at(j + 1),
                            r.value(i + 1, j + 1) - locus.level};
            const Corner c3{slice.u_at(i), slice.v_at(j + 1),
                            r.value(i, j + 1) - locus.level};
            const int code = (c0.f < 0 ? 1 : 0) | (c1.f < 0 ? 2 : 0) |
                             (c2.f < 0 ? 4 : 0) | (c3.f < 0 ? 8 : 0);
            auto& segs = locus.segments;
            switch (code) {
                case 0: case 15: break;
                case 1: emit(segs, c3, c0, c0, c1); break;
                case 2: emit(segs, c0, c1, c1, c2); break;
                case 3: emit(segs, c3, c0, c1, c2); break;
                case 4: emit(segs, c1, c2, c2, c3); break;
                case 6: emit(segs, c0, c1, c2, c3); break;
                case 7: emit(segs, c3, c0, c2, c3); break;
                case 8: emit(segs, c2, c3, c3, c0); break;
                case 9: emit(segs, c0, c1, c2, c3); break;
                case 11: emit(segs, c1, c2, c2, c3); break;
                case 12: emit(segs, c3, c0, c1, c2); break;
                case 13: emit(segs, c0, c1, c1, c2); break;
                case 14: emit(segs, c3, c0, c0, c1); break;
                case 5: case 10: {
                    // saddle: split by the cell-center sign
                    const double center = 0.25 * (c0.f + c1.f + c2.f + c3.f);
                    const bool diag_inside = (center < 0) == (code == 5);
                    if (diag_inside) {
                        emit(segs, c0, c1, c1, c2);
                        emit(segs, c2, c3, c3, c0);
                    } else {
                        emit(segs, c3, c0, c0, c1);
                        emit(segs, c1, c2, c2, c3);
                    }
                    break;
                }
            }
        }
    }
    return locus;
}

namespace {

nlohmann::json complex_json(Complex z) {
    return nlohmann::json::array({z.real(), z.imag()});
}

nlohmann::json dir_json(const ParamDir& d) {
    nlohmann::json j;
    j["da"] = complex_json(d.da);
    j["dalpha"] = complex_json(d.dalpha);
    j["dbeta"] = complex_json(d.dbeta);
    j["deps"] = complex_json(d.deps);
    return j;
}

} // namespace

std::string raster_sidecar_json(const Raster& r) {
    double vmin = 0.0, vmax = 0.0;
    bool any = false;
    std::size_t masked = 0;
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        if (r.mask[k]) {
            ++masked;
            continue;
        }
        if (!any) {
            vmin = vmax = r.values[k];
            any = true;
        } else {
            vmin = std::min(vmin, r.values[k]);
            vmax = std::max(vmax, r.values[k]);
        }
    }

    nlohmann::json j;
    j["fn"] = r.fn_id;
    j["code_version"] = r.code_version;
    j["seed"] = r.seed;
    j["mask_count"] = masked;
    j["value_min"] = vmin;
    j["value_max"] = vmax;
    j["budgets"]["tol"] = r.budgets.tol;
    j["budgets"]["budget"] = r.budgets.budget;
    j["budgets"]["order"] = r.budgets.order;
    j["budgets"]["c"] = r.budgets.c;
    j["budgets"]["at"] = nlohmann::json::array({r.budgets.at_z.real(),
                                                r.budgets.at_z.imag(),
                                                r.budgets.at_w.real(),
                                                r.budgets.at_w.imag()});
    j["budgets"]["word"] = format_word(r.budgets.word);
    j["slice"]["anchor"] =
        nlohmann::json::array({complex_json(r.slice.anchor_a()),
                               complex_json(r.slice.anchor_alpha()),
                               complex_json(r.slice.anchor_beta()),
                               complex_json(r.slice.anchor_eps())});
    j["slice"]["base_only"] = r.slice.base_only();
    j["slice"]["dir1"] = dir_json(r.slice.dir1());
    j["slice"]["dir2"] = dir_json(r.slice.dir2());
    j["slice"]["window"] = nlohmann::json::array(
        {r.slice.u0(), r.slice.u1(), r.slice.v0(), r.slice.v1()});
    j["slice"]["nx"] = r.slice.nx();
    j["slice"]["ny"] = r.slice.ny();
    return j.dump(2) + "\n";
}

void write_raster_pgm(const Raster& r, const std::string& path) {
    double vmin = 0.0, vmax = 0.0;
    bool any = false;
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        if (r.mask[k]) continue;
        if (!any) {
            vmin = vmax = r.values[k];
            any = true;
        } else {
            vmin = std::min(vmin, r.values[k]);
            vmax = std::max(vmax, r.values[k]);
        }
    }
    if (!any) throw EmptyInput("write_raster_pgm: raster has no unmasked pixels");
    const double range = vmax - vmin;

    std::string bytes = "P5\n" + std::to_string(r.slice.nx()) + " " +
                        std::to_string(r.slice.ny()) + "\n65535\n";
    bytes.reserve(bytes.size() + 2 * r.values.size());
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        unsigned level = 0;
        if (!r.mask[k] && range > 0.0) {
            const double t = (r.values[k] - vmin) / range;
            level = static_cast<unsigned>(
                std::lround(std::min(1.0, std::max(0.0, t)) * 65535.0));
        }
        bytes.push_back(static_cast<char>((level >> 8) & 0xff));
        bytes.push_back(static_cast<char>(level & 0xff));
    }
    atomic_write_file(path, bytes);
    atomic_write_file(path + ".json", raster_sidecar_json(r));
}

void write_contour_csv(const XOmegaLocus& locus, const std::string& path) {
    std::string csv = "segment,x,y\n";
    char line[96];
    for (std::size_t s = 0; s < locus.segments.size(); ++s) {
        const ContourSegment& seg = locus.segments[s];
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", s, seg.x0, seg.y0);
        csv += line;
        std::snprintf(line, sizeof line, "%zu,%.17g,%.17g\n", s, seg.x1, seg.y1);
        csv += line;
    }
    atomic_write_file(path, csv);
}

void write_raster_csv(const Raster& r, const std::string& path) {
    std::string csv = "# raster-csv 1\n";
    char line[320];
    std::snprintf(line, sizeof line, "# fn %s seed %llu version %s\n",
                  r.fn_id.empty() ? "?" : r.fn_id.c_str(),
                  static_cast<unsigned long long>(r.seed), r.code_version.c_str());
    csv += line;
    if (r.slice.base_only()) {
        std::snprintf(line, sizeof line,
                      "# base %.17g %.17g %.17g %.17g %.17g %.17g "
                      "%.17g %.17g %.17g %.17g %d %d\n",
                      r.slice.anchor_a().real(), r.slice.anchor_a().imag(),
                      r.slice.dir1().da.real(), r.slice.dir1().da.imag(),
                      r.slice.dir2().da.real(), r.slice.dir2().da.imag(),
                      r.slice.u0(), r.slice.u1(), r.slice.v0(), r.slice.v1(),
                      r.slice.nx(), r.slice.ny());
    } else {
        std::snprintf(line, sizeof line, "# skew %d %d\n", r.slice.nx(),
                      r.slice.ny());
    }
    csv += line;
    csv += "ix,iy,u,v,value,mask\n";
    for (int j = 0; j < r.slice.ny(); ++j) {
        for (int i = 0; i < r.slice.nx(); ++i) {
            std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g,%.17g,%d\n", i,
                          j, r.slice.u_at(i), r.slice.v_at(j), r.value(i, j),
                          r.is_masked(i, j) ? 1 : 0);
            csv += line;
        }
    }
    atomic_write_file(path, csv);
}

Raster read_raster_csv(const std::string& path) {
    const std::string text = read_text_file(path);

    double ar = 0, ai = 0, d1r = 0, d1i = 0, d2r = 0, d2i = 0;
    double u0 = 0, u1 = 0, v0 = 0, v1 = 0;
    int nx = 0, ny = 0;
    char fn[128] = "?", ver[64] = "?";
    unsigned long long seed = 0;
    bool have_chart = false;

    std::vector<std::pair<std::size_t, double>> cells;  // (index, value)
    std::vector<std::pair<std::size_t, int>> masks;

    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (std::sscanf(line.c_str(),
                            "# base %lf %lf %lf %lf %lf %lf %lf %lf %lf %lf %d %d",
                            &ar, &ai, &d1r, &d1i, &d2r, &d2i, &u0, &u1, &v0, &v1,
                            &nx, &ny) == 12)
                have_chart = true;
            else if (line.rfind("# skew", 0) == 0)
                throw ConfigError(path +
                                  ": only base-plane raster CSVs can be reloaded");
            else
                std::sscanf(line.c_str(), "# fn %127s seed %llu version %63s",
                            fn, &seed, ver);
            continue;
        }
        int i, j, m;
        double u, v, val;
        if (std::sscanf(line.c_str(), "%d,%d,%lf,%lf,%lf,%d", &i, &j, &u, &v,
                        &val, &m) != 6)
            continue;  // header row
        if (!have_chart)
            throw ConfigError(path + ": pixel rows before the chart header");
        if (i < 0 || i >= nx || j < 0 || j >= ny)
            throw ConfigError(path + ": pixel index outside the declared grid");
        const std::size_t k = static_cast<std::size_t>(j) * nx + i;
        cells.emplace_back(k, val);
        masks.emplace_back(k, m);
    }
    if (!have_chart) throw ConfigError(path + ": missing chart header line");
    if (cells.size() != static_cast<std::size_t>(nx) * ny)
        throw ConfigError(path + ": expected " + std::to_string(std::size_t(nx) * ny) +
                          " pixel rows, got " + std::to_string(cells.size()));

    SliceSpec slice(Complex(ar, ai), Complex(d1r, d1i), Complex(d2r, d2i), u0,
                    u1, v0, v1, nx, ny);
    Raster r(slice);
    r.fn_id = fn;
    r.seed = seed;
    r.code_version = ver;
    for (std::size_t t = 0; t < cells.size(); ++t) {
        r.values[cells[t].first] = cells[t].second;
        r.mask[masks[t].first] = masks[t].second ? 1 : 0;
    }
    return r;
}

} // namespace sb
