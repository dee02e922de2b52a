#include "commands.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

#include <json.hpp>

#include "sb/assumptions.hpp"
#include "sb/base_family.hpp"
#include "sb/certify.hpp"
#include "sb/errors.hpp"
#include "sb/green.hpp"
#include "sb/heights.hpp"
#include "sb/ifs.hpp"
#include "sb/misiurewicz.hpp"
#include "sb/oracle_store.hpp"
#include "sb/raster.hpp"
#include "sb/word.hpp"

namespace sbtool {
namespace {

using nlohmann::json;
using namespace sb;

std::string out_path(const JobConfig& cfg, const std::string& name) {
    return cfg.out_dir + "/" + name;
}

// every numeric result in a report travels with the knob that bounds it
json num(double value, const char* bound_key, const json& bound) {
    json j;
    j["value"] = value;
    j[bound_key] = bound;
    return j;
}

struct ReportClock {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    }
};

json base_report(const JobConfig& cfg) {
    json rep;
    rep["tool_version"] = kCodeVersion;
    rep["inputs"] = json::parse(job_config_json(cfg));
    rep["results"] = json::object();
    rep["warnings"] = json::array();
    rep["timings"] = json::object();
    return rep;
}

void write_report(json& rep, const JobConfig& cfg, const ReportClock& clock) {
    rep["timings"]["total_seconds"] = clock.seconds();
    atomic_write_file(out_path(cfg, "report.json"), rep.dump(2) + "\n");
}

json certificate_json(const BlenderCertificate& cert) {
    json j;
    j["code_version"] = kCodeVersion;
    j["pass"] = cert.pass;
    j["checks"] = json::array();
    for (const auto& c : cert.checks) {
        json e;
        e["name"] = c.name;
        e["pass"] = c.pass;
        e["margin"] = c.margin;
        e["rigor"] = c.rigor;
        e["detail"] = c.detail;
        j["checks"].push_back(e);
    }
    j["quantities"] = json::object();
    for (const auto& [k, v] : cert.quantities) j["quantities"][k] = v;
    return j;
}

int emit_certificate(const BlenderCertificate& cert, const JobConfig& cfg,
                     json& rep, const ReportClock& clock) {
    atomic_write_file(out_path(cfg, "certificate.json"),
                      certificate_json(cert).dump(2) + "\n");

    double worst = std::numeric_limits<double>::infinity();
    std::string first_fail;
    for (const auto& c : cert.checks) {
        worst = std::min(worst, c.margin);
        if (!c.pass && first_fail.empty()) first_fail = c.name;
        std::printf("  [%s] %-34s margin % .3e\n", c.pass ? " ok " : "FAIL",
                    c.name.c_str(), c.margin);
    }
    rep["results"]["pass"] = cert.pass;
    rep["results"]["checks"] = cert.checks.size();
    rep["results"]["min_margin"] = num(worst, "gate", 0.0);
    if (!first_fail.empty()) rep["results"]["first_failure"] = first_fail;
    write_report(rep, cfg, clock);

    if (!cert.pass) {
        std::fprintf(stderr, "certification failed: %s\n", first_fail.c_str());
        return 2;
    }
    std::printf("certificate: pass (%zu checks)\n", cert.checks.size());
    return 0;
}

int cmd_certify_blender(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    BlenderCertificate cert =
        certify_blender(skew_params_from(cfg), cfg.rho, GridSpec{cfg.grid});
    rep["timings"]["certify_seconds"] = clock.seconds();
    return emit_certificate(cert, cfg, rep, clock);
}

int cmd_ifs(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    HatParams hat{cfg.alpha, cfg.beta, cfg.eps};
    BlenderCertificate cert = certify_ifs_covering(hat, cfg.aperture, cfg.slack);
    rep["timings"]["certify_seconds"] = clock.seconds();
    return emit_certificate(cert, cfg, rep, clock);
}

int cmd_periodic(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    const BaseParam p(cfg.a);
    const auto orbits = base_periodic_points(p, cfg.order);
    rep["timings"]["solve_seconds"] = clock.seconds();

    std::string csv =
        "period,kind,point_re,point_im,multiplier_re,multiplier_im,abs_multiplier\n";
    char line[256];
    std::size_t points = 0;
    double min_mult = std::numeric_limits<double>::infinity();
    for (const auto& o : orbits) {
        const char* kind = o.kind == PeriodicOrbit::Kind::repelling ? "repelling"
                           : o.kind == PeriodicOrbit::Kind::attracting
                               ? "attracting"
                               : "indifferent";
        min_mult = std::min(min_mult, std::abs(o.multiplier));
        for (const Complex& w : o.points) {
            std::snprintf(line, sizeof line, "%d,%s,%.17g,%.17g,%.17g,%.17g,%.17g\n",
                          o.period, kind, w.real(), w.imag(), o.multiplier.real(),
                          o.multiplier.imag(), std::abs(o.multiplier));
            csv += line;
            ++points;
        }
    }
    atomic_write_file(out_path(cfg, "orbits.csv"), csv);

    rep["results"]["orbits"] = orbits.size();
    rep["results"]["points"] = points;
    rep["results"]["min_abs_multiplier"] = num(min_mult, "residual_gate", 1e-8);
    write_report(rep, cfg, clock);
    std::printf("periodic: %zu orbits, %zu points of period %d (min |mult| %.6g)\n",
                orbits.size(), points, cfg.order, min_mult);
    return 0;
}

int cmd_lyapunov(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    if (cfg.mode == "base") {
        const BaseParam p(cfg.a);
        const LyapunovMethod m = cfg.method == "periodic" ? LyapunovMethod::periodic
                                                          : LyapunovMethod::birkhoff;
        const double L = base_lyapunov(p, m, cfg.order, cfg.seed);
        rep["results"]["exponent"] = num(L, "order", cfg.order);
        rep["results"]["method"] = cfg.method;
        std::printf("lyapunov (base, %s, order %d): %.12g\n", cfg.method.c_str(),
                    cfg.order, L);
    } else {
        const SkewLyapunov s = lyapunov_skew(skew_params_from(cfg), cfg.order, cfg.seed);
        rep["results"]["L_sum"] = num(s.L_sum, "order", cfg.order);
        rep["results"]["l_base"] = num(s.l_base, "order", cfg.order);
        rep["results"]["L_horizontal"] = num(s.L_horizontal, "order", cfg.order);
        std::printf("lyapunov (skew, order %d): L_sum %.12g = base %.12g + horizontal %.12g\n",
                    cfg.order, s.L_sum, s.l_base, s.L_horizontal);
    }
    rep["timings"]["average_seconds"] = clock.seconds();
    write_report(rep, cfg, clock);
    return 0;
}

int cmd_green(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    GreenEvaluation g;
    if (cfg.mode == "base") {
        g = green(BaseParam(cfg.a), cfg.at_w, cfg.tol, cfg.budget);
    } else {
        g = green(regular_map_from(cfg), SkewPoint{cfg.at_z, cfg.at_w}, cfg.tol,
                  cfg.budget);
    }
    rep["timings"]["evaluate_seconds"] = clock.seconds();
    rep["results"]["green"] = num(g.value, "bound", g.tail_bound);
    rep["results"]["iterations"] = g.iterations;
    rep["results"]["escaped"] = g.escaped;
    write_report(rep, cfg, clock);
    std::printf("green (%s): %.12g (tail bound %.3g, %d iterations)\n",
                cfg.mode.c_str(), g.value, g.tail_bound, g.iterations);
    return 0;
}

int cmd_height(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    mpq_class a(cfg.rational_a), w0(cfg.rational_w);
    a.canonicalize();
    w0.canonicalize();
    const RationalBaseMap map{a};
    const HeightResult h =
        canonical_height_rational(map, w0, cfg.budget, cfg.height_cap_bits);
    rep["timings"]["orbit_seconds"] = clock.seconds();
    rep["results"]["height"] = num(h.estimate, "tol", 1e-6);
    rep["results"]["preperiodic"] = h.preperiodic;
    rep["results"]["iterations"] = h.iterations;
    rep["results"]["stayed_exact"] = h.stayed_exact;
    write_report(rep, cfg, clock);
    std::printf("height of %s under a = %s: %.12g%s (%d iterations)\n",
                cfg.rational_w.c_str(), cfg.rational_a.c_str(), h.estimate,
                h.preperiodic ? " [preperiodic]" : "", h.iterations);
    return 0;
}

int cmd_raster(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    const SliceSpec slice = slice_from(cfg);
    const RasterBudgets budgets = raster_budgets_from(cfg);
    const RasterFn fn = raster_fn_from(cfg);

    if (fn == RasterFn::residual_x_omega) {
        const XOmegaLocus locus = x_omega_locus(slice, budgets.word, budgets, cfg.seed);
        rep["timings"]["evaluate_seconds"] = clock.seconds();
        write_raster_pgm(locus.residual, out_path(cfg, "raster.pgm"));
        write_raster_csv(locus.residual, out_path(cfg, "values.csv"));
        write_contour_csv(locus, out_path(cfg, "contours.csv"));
        rep["results"]["segments"] = locus.segments.size();
        rep["results"]["contour_level"] = num(locus.level, "tol", budgets.tol);
        write_report(rep, cfg, clock);
        std::printf("raster (residual_x_omega %dx%d): %zu contour segments at level %.3g\n",
                    slice.nx(), slice.ny(), locus.segments.size(), locus.level);
        return 0;
    }

    const Raster r = raster_map(slice, fn, budgets, cfg.seed, cfg.workers);
    rep["timings"]["evaluate_seconds"] = clock.seconds();
    write_raster_pgm(r, out_path(cfg, "raster.pgm"));
    write_raster_csv(r, out_path(cfg, "values.csv"));

    std::size_t masked = 0;
    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (std::size_t k = 0; k < r.values.size(); ++k) {
        if (r.mask[k]) {
            ++masked;
            continue;
        }
        vmin = std::min(vmin, r.values[k]);
        vmax = std::max(vmax, r.values[k]);
    }

    // the finite-difference density raster rides along so the report command
    // can stay a pure statistics pass
    if (slice.nx() >= 3 && slice.ny() >= 3 && masked < r.values.size()) {
        write_raster_csv(laplacian_density(r), out_path(cfg, "density.csv"));
    } else {
        rep["warnings"].push_back("grid too small or fully masked, density.csv skipped");
    }

    rep["results"]["pixels"] = r.values.size();
    rep["results"]["masked"] = masked;
    rep["results"]["value_min"] = num(vmin, "tol", budgets.tol);
    rep["results"]["value_max"] = num(vmax, "tol", budgets.tol);
    write_report(rep, cfg, clock);
    std::printf("raster (%s %dx%d): values in [%.6g, %.6g], %zu masked\n",
                to_string(fn).c_str(), slice.nx(), slice.ny(), vmin, vmax, masked);
    return 0;
}

int cmd_misiurewicz(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    const MisiurewiczRelation rel = relation_from(cfg);
    const Complex lo(cfg.window.u0, cfg.window.v0);
    const Complex hi(cfg.window.u1, cfg.window.v1);
    const auto roots = misiurewicz_parameters(rel, lo, hi, cfg.starts);
    rep["timings"]["solve_seconds"] = clock.seconds();

    std::string csv =
        "a_re,a_im,residual,transversality,multiplier_re,multiplier_im,verified\n";
    char line[256];
    std::size_t verified = 0;
    double max_res = 0.0;
    for (const auto& r : roots) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d\n",
                      r.a.real(), r.a.imag(), r.residual, r.transversality,
                      r.multiplier.real(), r.multiplier.imag(), r.verified ? 1 : 0);
        csv += line;
        if (r.verified) ++verified;
        max_res = std::max(max_res, r.residual);
    }
    atomic_write_file(out_path(cfg, "roots.csv"), csv);

    rep["results"]["roots"] = roots.size();
    rep["results"]["verified"] = verified;
    rep["results"]["max_residual"] = num(max_res, "bound", 1e-8);
    write_report(rep, cfg, clock);
    const std::string target = rel.to_fixed ? "fixed" : "m=" + std::to_string(rel.m);
    std::printf("misiurewicz (n=%d, %s): %zu roots in window, %zu verified\n",
                rel.n, target.c_str(), roots.size(), verified);
    return 0;
}

int cmd_assumptions(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    const auto items = check_assumptions(skew_params_from(cfg), cfg.d, cfg.c, cfg.seed);
    rep["timings"]["check_seconds"] = clock.seconds();

    json arr = json::array();
    int failures = 0;
    for (const auto& it : items) {
        json e;
        e["index"] = it.index;
        e["title"] = it.title;
        e["status"] = to_string(it.status);
        e["margin"] = num(it.margin, "gate", 0.0);
        e["detail"] = it.detail;
        arr.push_back(e);
        const char* tag = it.status == AssumptionStatus::pass          ? " ok "
                          : it.status == AssumptionStatus::not_checkable ? " -- "
                                                                         : "FAIL";
        std::printf("  [%s] %2d %-44s margin % .3e\n", tag, it.index,
                    it.title.c_str(), it.margin);
        if (it.status == AssumptionStatus::fail) ++failures;
    }
    rep["results"]["items"] = arr;
    rep["results"]["failures"] = failures;
    write_report(rep, cfg, clock);

    if (failures > 0) {
        for (const auto& it : items)
            if (it.status == AssumptionStatus::fail) {
                std::fprintf(stderr, "assumption check failed: item %d (%s)\n",
                             it.index, it.title.c_str());
                break;
            }
        return 2;
    }
    std::printf("assumptions: all checkable items pass\n");
    return 0;
}

std::vector<Complex> read_points_csv(const std::string& path) {
    const std::string text = read_text_file(path);
    std::vector<Complex> pts;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        const std::string line = text.substr(pos, eol - pos);
        pos = eol + 1;
        if (line.empty() || line[0] == '#') continue;
        double x, y;
        if (std::sscanf(line.c_str(), "%lf,%lf", &x, &y) == 2)
            pts.emplace_back(x, y);  // header rows simply fail the scan
    }
    if (pts.empty()) throw EmptyInput(path + ": no numeric point rows");
    return pts;
}

int cmd_report(const JobConfig& cfg, json& rep, const ReportClock& clock) {
    if (cfg.density_path.empty() || cfg.points_path.empty())
        throw ConfigError(
            "report: params.inputs.density and params.inputs.points are required");
    const Raster density = read_raster_csv(cfg.density_path);
    const std::vector<Complex> points = read_points_csv(cfg.points_path);
    const DensityReport dr = pcf_density_report(density, points);
    rep["timings"]["statistics_seconds"] = clock.seconds();

    rep["results"]["fraction_above_median"] =
        num(dr.fraction_above_median, "sample_count", dr.points_used);
    rep["results"]["bin_discrepancy"] = num(dr.bin_discrepancy, "bins", 64);
    rep["results"]["points_used"] = dr.points_used;
    write_report(rep, cfg, clock);
    std::printf("report: %d points, fraction above median %.4f, bin discrepancy %.4f\n",
                dr.points_used, dr.fraction_above_median, dr.bin_discrepancy);
    return 0;
}

} // namespace

int run_command(const JobConfig& cfg) {
    ReportClock clock;
    std::filesystem::create_directories(cfg.out_dir);
    json rep = base_report(cfg);

    if (cfg.command == "certify-blender") return cmd_certify_blender(cfg, rep, clock);
    if (cfg.command == "ifs") return cmd_ifs(cfg, rep, clock);
    if (cfg.command == "periodic") return cmd_periodic(cfg, rep, clock);
    if (cfg.command == "lyapunov") return cmd_lyapunov(cfg, rep, clock);
    if (cfg.command == "green") return cmd_green(cfg, rep, clock);
    if (cfg.command == "height") return cmd_height(cfg, rep, clock);
    if (cfg.command == "raster") return cmd_raster(cfg, rep, clock);
    if (cfg.command == "misiurewicz") return cmd_misiurewicz(cfg, rep, clock);
    if (cfg.command == "assumptions") return cmd_assumptions(cfg, rep, clock);
    if (cfg.command == "report") return cmd_report(cfg, rep, clock);
    throw ConfigError("unknown command: " + cfg.command);
}

int run_pin(const std::vector<std::string>& ids, bool all, bool compare_mode,
            bool list, const std::string& store_path) {
    if (list) {
        for (const auto& e : oracle_registry())
            std::printf("  %-28s bound %-8.1e %s\n", e.id.c_str(), e.bound,
                        e.description.c_str());
        return 0;
    }
    std::vector<std::string> targets = ids;
    if (all) {
        targets.clear();
        for (const auto& e : oracle_registry()) targets.push_back(e.id);
    }
    if (targets.empty())
        throw ConfigError("pin: name oracle ids, or use --all or --list");

    OracleStore store(store_path);
    if (compare_mode) {
        for (const auto& id : targets) {
            store.compare(id);
            std::printf("  ok  %s\n", id.c_str());
        }
        std::printf("compare: %zu oracle values match the store\n", targets.size());
        return 0;
    }
    for (const auto& id : targets) {
        store.pin(id);
        std::printf("  pinned  %s\n", id.c_str());
    }
    const std::string dir = std::filesystem::path(store_path).parent_path().string();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    store.save();
    std::printf("pin: %zu values stored in %s\n", targets.size(), store_path.c_str());
    return 0;
}

} // namespace sbtool
