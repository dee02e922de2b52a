#include "sb/oracle_store.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>

#include <json.hpp>

#include "sb/base_family.hpp"
#include "sb/config.hpp"
#include "sb/green.hpp"
#include "sb/heights.hpp"
#include "sb/ifs.hpp"
#include "sb/misiurewicz.hpp"
#include "sb/multipliers.hpp"
#include "sb/raster.hpp"
#include "sb/word.hpp"

namespace sb {

namespace {

using nlohmann::json;

HatParams hat_one() {
    const Complex zeta = std::polar(1.0, pi / 4);
    return {zeta, Complex(0.0), 1.0 / (20.0 * (zeta - 1.0))};
}

std::vector<double> flat(Complex z) { return {z.real(), z.imag()}; }

// 2^-n log|w_n| for the orbit of w0 under w -> a (w^2 - 1), real a, w0 real.
// Plain doubles until the orbit is huge, then a log recurrence; by then the
// -1 correction is far below double precision.  Independent of the nested
// green/height code, which squares the tolerance per step instead.
double log_orbit_limit(double a, double w0, int n) {
    double w = w0;
    int k = 0;
    while (k < n && std::abs(w) < 1e100) {
        w = a * (w * w - 1.0);
        ++k;
    }
    double l = std::log(std::abs(w));
    const double la = std::log(std::abs(a));
    for (; k < n; ++k) l = la + 2.0 * l;
    return std::ldexp(l, -n);
}

std::vector<OracleEntry> build_registry() {
    std::vector<OracleEntry> reg;

    reg.push_back({"base/cantor-alternating",
                   "alternating-coded Cantor point at a=100 vs direct 60-fold "
                   "branch composition",
                   1e-12,
                   [] {
                       // symbol + codes the pair g_+ o g_-, symbol - the pair
                       // g_- o g_+; expand the word by hand into 60 single
                       // branches and compose them innermost first
                       const BaseParam p{Complex(100.0)};
                       Complex w = 0.0;
                       for (int k = 59; k >= 0; --k) {
                           const int sigma = (k / 2) % 2 == 0 ? +1 : -1;
                           w = inverse_branch(p, k % 2 == 0 ? sigma : -sigma, w);
                       }
                       return flat(w);
                   },
                   [] {
                       const BaseParam p{Complex(100.0)};
                       return flat(cantor_point(p, parse_word("(+-)*"), 30).value);
                   }});

    reg.push_back({"base/lyapunov-cross",
                   "periodic-orbit Lyapunov exponent at a=100 vs a Birkhoff "
                   "average along an independent backward orbit",
                   1e-2,
                   [] {
                       // backward random orbit of the inverse branches; the
                       // exponent is the average of log|q'| = log|2 a w|
                       const BaseParam p{Complex(100.0)};
                       std::mt19937_64 rng(7);
                       Complex w = 0.3;
                       for (int k = 0; k < 50; ++k)
                           w = inverse_branch(p, rng() & 1 ? +1 : -1, w);
                       double sum = 0.0;
                       const int n = 20000;
                       for (int k = 0; k < n; ++k) {
                           sum += std::log(std::abs(2.0 * p.a * w));
                           w = inverse_branch(p, rng() & 1 ? +1 : -1, w);
                       }
                       return std::vector<double>{sum / n};
                   },
                   [] {
                       const BaseParam p{Complex(100.0)};
                       return std::vector<double>{
                           base_lyapunov(p, LyapunovMethod::periodic, 8, 1)};
                   }});

    reg.push_back({"green/base-g00",
                   "escape-rate value G(0) at a=100 vs the log-orbit limit "
                   "2^-n log|w_n|",
                   1e-9,
                   [] { return std::vector<double>{log_orbit_limit(100.0, 0.0, 40)}; },
                   [] {
                       const BaseParam p{Complex(100.0)};
                       return std::vector<double>{green(p, Complex(0.0), 1e-12, 500).value};
                   }});

    reg.push_back({"heights/h0-a2",
                   "canonical height of w=0 at a=2 vs the log-orbit limit",
                   1e-6,
                   [] { return std::vector<double>{log_orbit_limit(2.0, 0.0, 40)}; },
                   [] {
                       const RationalBaseMap map{mpq_class(2)};
                       return std::vector<double>{
                           canonical_height_rational(map, mpq_class(0)).estimate};
                   }});

    reg.push_back({"ifs/fixed-point-all-plus",
                   "model-IFS fixed point of the plus branch at the tangency "
                   "parameter vs the closed form (1+i)/40",
                   1e-12,
                   [] { return std::vector<double>{0.025, 0.025}; },
                   [] { return flat(ifs_limit_point(hat_one(), parse_word("(+)*"))); }});

    reg.push_back({"ifs/phi1-coefficients",
                   "second-level map phi_1 at the tangency parameter vs the "
                   "closed form z -> -z + (1+i)/20",
                   1e-12,
                   [] { return std::vector<double>{-1.0, 0.0, 0.05, 0.05}; },
                   [] {
                       const Affine f = phi_maps(hat_one()).second[0];
                       return std::vector<double>{f.m.real(), f.m.imag(),
                                                  f.b.real(), f.b.imag()};
                   }});

    reg.push_back({"misiurewicz/sqrt2-to-fixed",
                   "root of the n=2 critical-orbit-to-fixed-point relation "
                   "near sqrt(2) vs the closed form",
                   1e-8,
                   [] { return std::vector<double>{std::sqrt(2.0), 0.0}; },
                   [] {
                       const auto roots = misiurewicz_parameters(
                           {2, 0, true}, Complex(1.0, -0.5), Complex(2.0, 0.5), 8);
                       const double target = std::sqrt(2.0);
                       Complex best(1e9, 1e9);
                       for (const auto& r : roots)
                           if (std::abs(r.a - target) < std::abs(best - target))
                               best = r.a;
                       return flat(best);
                   }});

    reg.push_back({"multipliers/irrational-pair",
                   "smallest |p + q t + r theta| for (t, theta) = (sqrt 2, 1/3) "
                   "at bound 100 vs a plain exhaustive scan",
                   1e-12,
                   [] {
                       const double t = std::sqrt(2.0), th = 1.0 / 3.0;
                       double best = std::numeric_limits<double>::infinity();
                       for (long q = 1; q <= 100; ++q)
                           for (long r = -100; r <= 100; ++r)
                               for (long p = -100; p <= 100; ++p)
                                   best = std::min(best,
                                                   std::abs(p + q * t + r * th));
                       return std::vector<double>{best};
                   },
                   [] {
                       return std::vector<double>{
                           independence_report(std::sqrt(2.0), 1.0 / 3.0, 100).minimum};
                   }});

    return reg;
}

std::string diff_detail(const std::vector<double>& a, const std::vector<double>& b,
                        double bound) {
    double worst = 0.0;
    std::size_t at = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = std::abs(a[i] - b[i]);
        if (d > worst) { worst = d; at = i; }
    }
    return "differ by " + std::to_string(worst) + " at component " +
           std::to_string(at) + " (bound " + std::to_string(bound) + ")";
}

bool within(const std::vector<double>& a, const std::vector<double>& b, double bound) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!(std::abs(a[i] - b[i]) <= bound)) return false;
    return true;
}

} // namespace

const std::vector<OracleEntry>& oracle_registry() {
    static const std::vector<OracleEntry> reg = build_registry();
    return reg;
}

const OracleEntry* find_oracle(const std::string& id) {
    for (const auto& e : oracle_registry())
        if (e.id == id) return &e;
    return nullptr;
}

OracleStore::OracleStore(std::string path) : path_(std::move(path)) {
    std::string text;
    try {
        text = read_text_file(path_);
    } catch (const ConfigError&) {
        return;  // no file yet: empty store
    }
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(path_ + ": " + e.what());
    }
    if (!doc.is_object() || !doc.contains("oracles") || !doc["oracles"].is_object())
        throw ConfigError(path_ + ": expected an object with an \"oracles\" map");
    for (const auto& [id, rec] : doc["oracles"].items()) {
        if (!rec.is_object() || !rec.contains("values") || !rec["values"].is_array() ||
            !rec.contains("bound"))
            throw ConfigError(path_ + ": " + id + ": expected values and bound");
        Pinned p;
        for (const auto& v : rec["values"]) {
            if (!v.is_number())
                throw ConfigError(path_ + ": " + id + ": values must be numbers");
            p.values.push_back(v.get<double>());
        }
        p.bound = rec["bound"].get<double>();
        if (rec.contains("description")) p.description = rec["description"].get<std::string>();
        pinned_[id] = std::move(p);
    }
}

std::vector<std::string> OracleStore::pinned_ids() const {
    std::vector<std::string> out;
    for (const auto& [id, p] : pinned_) out.push_back(id);
    return out;
}

void OracleStore::pin(const std::string& id) {
    const OracleEntry* e = find_oracle(id);
    if (!e) throw ConfigError("unknown oracle id: " + id);
    const std::vector<double> want = e->oracle();
    const std::vector<double> got = e->main();
    if (want.size() != got.size())
        throw OracleMismatch(id + ": routes returned " + std::to_string(want.size()) +
                             " vs " + std::to_string(got.size()) + " values");
    if (!within(want, got, e->bound))
        throw OracleMismatch(id + ": implementation and oracle " +
                             diff_detail(want, got, e->bound));
    pinned_[id] = Pinned{want, e->bound, e->description};
}

void OracleStore::pin_all() {
    for (const auto& e : oracle_registry()) pin(e.id);
}

void OracleStore::compare(const std::string& id) const {
    if (pinned_.empty())
        throw EmptyInput("oracle store at " + path_ +
                         " has no pinned values; run the pin command first");
    const auto it = pinned_.find(id);
    if (it == pinned_.end())
        throw EmptyInput(id + " is not pinned in " + path_ +
                         "; run the pin command first");
    const OracleEntry* e = find_oracle(id);
    if (!e) throw ConfigError("unknown oracle id: " + id);
    const std::vector<double> got = e->main();
    if (got.size() != it->second.values.size())
        throw OracleMismatch(id + ": pinned " + std::to_string(it->second.values.size()) +
                             " values, recomputed " + std::to_string(got.size()));
    if (!within(it->second.values, got, it->second.bound))
        throw OracleMismatch(id + ": recomputed value and pinned record " +
                             diff_detail(it->second.values, got, it->second.bound));
}

void OracleStore::compare_all() const {
    for (const auto& e : oracle_registry()) compare(e.id);
}

void OracleStore::save() const {
    json doc;
    doc["code_version"] = kCodeVersion;
    doc["oracles"] = json::object();
    for (const auto& [id, p] : pinned_) {
        json rec;
        rec["values"] = p.values;
        rec["bound"] = p.bound;
        rec["description"] = p.description;
        doc["oracles"][id] = rec;
    }
    atomic_write_file(path_, doc.dump(2) + "\n");
}

} // namespace sb
