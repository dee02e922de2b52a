#include "sb/config.hpp"

#include <json.hpp>

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "sb/word.hpp"

namespace sb {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& src, const std::string& key,
                       const std::string& what) {
    throw ConfigError(src + ": " + key + ": " + what);
}

std::string join(const char* prefix, const std::string& key) {
    return *prefix ? std::string(prefix) + "." + key : key;
}

void check_keys(const json& obj, const char* prefix, const std::string& src,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) fail(src, join(prefix, it.key()), "unknown key");
    }
}

double get_num(const json& o, const char* prefix, const char* key, double dflt,
               const std::string& src) {
    auto it = o.find(key);
    if (it == o.end()) return dflt;
    if (!it->is_number()) fail(src, join(prefix, key), "expected a number");
    return it->get<double>();
}

long long get_int(const json& o, const char* prefix, const char* key,
                  long long dflt, const std::string& src) {
    auto it = o.find(key);
    if (it == o.end()) return dflt;
    if (!it->is_number_integer()) fail(src, join(prefix, key), "expected an integer");
    return it->get<long long>();
}

std::string get_str(const json& o, const char* prefix, const char* key,
                    const std::string& dflt, const std::string& src) {
    auto it = o.find(key);
    if (it == o.end()) return dflt;
    if (!it->is_string()) fail(src, join(prefix, key), "expected a string");
    return it->get<std::string>();
}

bool get_bool(const json& o, const char* prefix, const char* key, bool dflt,
              const std::string& src) {
    auto it = o.find(key);
    if (it == o.end()) return dflt;
    if (!it->is_boolean()) fail(src, join(prefix, key), "expected a boolean");
    return it->get<bool>();
}

Complex get_complex(const json& o, const char* prefix, const char* key,
                    Complex dflt, const std::string& src) {
    auto it = o.find(key);
    if (it == o.end()) return dflt;
    if (!it->is_array() || it->size() != 2 || !(*it)[0].is_number() ||
        !(*it)[1].is_number())
        fail(src, join(prefix, key), "expected [re, im]");
    return {(*it)[0].get<double>(), (*it)[1].get<double>()};
}

json cpx(Complex z) { return json::array({z.real(), z.imag()}); }

bool one_of(const std::string& v, std::initializer_list<const char*> opts) {
    for (const char* o : opts)
        if (v == o) return true;
    return false;
}

// "p/q" with optional sign, decimal digits, nonzero denominator
void check_rational(const std::string& s, const char* key, const std::string& src) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
    std::size_t digits = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
    if (digits == 0) fail(src, join("params.rational", key), "expected \"p\" or \"p/q\"");
    if (i == s.size()) return;
    if (s[i] != '/') fail(src, join("params.rational", key), "expected \"p\" or \"p/q\"");
    ++i;
    std::size_t den_start = i, nonzero = 0;
    while (i < s.size() && s[i] >= '0' && s[i] <= '9') {
        if (s[i] != '0') ++nonzero;
        ++i;
    }
    if (i == den_start || i != s.size() || nonzero == 0)
        fail(src, join("params.rational", key), "denominator must be a nonzero integer");
}

} // namespace

JobConfig::JobConfig() {
    const SkewParams ref = reference_blender_params();
    a = ref.a;
    alpha = ref.alpha;
    beta = ref.beta;
    eps = ref.eps;
}

JobConfig parse_job_config(const std::string& json_text, const std::string& source) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError(source + ": top level must be an object");
    check_keys(root, "", source, {"command", "out", "params", "seed", "workers"});

    JobConfig cfg;

    auto cit = root.find("command");
    if (cit == root.end()) fail(source, "command", "missing");
    if (!cit->is_string()) fail(source, "command", "expected a string");
    cfg.command = cit->get<std::string>();
    if (!one_of(cfg.command, {"certify-blender", "ifs", "periodic", "lyapunov",
                              "green", "height", "raster", "misiurewicz",
                              "assumptions", "report"}))
        fail(source, "command", "unknown command \"" + cfg.command + "\"");

    cfg.out_dir = get_str(root, "", "out", cfg.out_dir, source);
    if (auto it = root.find("seed"); it != root.end()) {
        if (!it->is_number_integer() ||
            (!it->is_number_unsigned() && it->get<long long>() < 0))
            fail(source, "seed", "expected a nonnegative integer");
        cfg.seed = it->get<std::uint64_t>();
    }
    const long long workers = get_int(root, "", "workers", cfg.workers, source);
    if (workers < 1 || workers > 4096) fail(source, "workers", "must be in 1..4096");
    cfg.workers = static_cast<int>(workers);

    static const json no_params = json::object();
    const json& P = root.contains("params") ? root.at("params") : no_params;
    if (!P.is_object()) fail(source, "params", "expected an object");
    check_keys(P, "params", source,
               {"aperture", "budget", "c", "d", "fn", "grid", "height_cap_bits",
                "inputs", "lambda", "method", "mode", "order", "point", "rational",
                "relation", "rho", "slack", "slice", "starts", "tol", "word"});

    if (auto it = P.find("lambda"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.lambda", "expected an object");
        check_keys(*it, "params.lambda", source, {"a", "alpha", "beta", "eps"});
        cfg.a = get_complex(*it, "params.lambda", "a", cfg.a, source);
        cfg.alpha = get_complex(*it, "params.lambda", "alpha", cfg.alpha, source);
        cfg.beta = get_complex(*it, "params.lambda", "beta", cfg.beta, source);
        cfg.eps = get_complex(*it, "params.lambda", "eps", cfg.eps, source);
    }
    cfg.c = get_complex(P, "params", "c", cfg.c, source);

    const long long d = get_int(P, "params", "d", cfg.d, source);
    if (d < 2 || d > 64) fail(source, "params.d", "must be in 2..64");
    cfg.d = static_cast<int>(d);

    cfg.rho = get_num(P, "params", "rho", cfg.rho, source);
    if (!(cfg.rho > 1.0)) fail(source, "params.rho", "must exceed 1");
    cfg.aperture = get_num(P, "params", "aperture", cfg.aperture, source);
    if (cfg.aperture < 0.0) fail(source, "params.aperture", "must be nonnegative");
    cfg.slack = get_num(P, "params", "slack", cfg.slack, source);
    if (cfg.slack < 0.0) fail(source, "params.slack", "must be nonnegative");
    cfg.tol = get_num(P, "params", "tol", cfg.tol, source);
    if (!(cfg.tol > 0.0)) fail(source, "params.tol", "must be positive");

    const long long grid = get_int(P, "params", "grid", cfg.grid, source);
    if (grid < 2 || grid > 100000) fail(source, "params.grid", "must be in 2..100000");
    cfg.grid = static_cast<int>(grid);
    const long long order = get_int(P, "params", "order", cfg.order, source);
    if (order < 1 || order > 1000000)
        fail(source, "params.order", "must be in 1..1000000");
    cfg.order = static_cast<int>(order);
    const long long budget = get_int(P, "params", "budget", cfg.budget, source);
    if (budget < 1 || budget > 100000000)
        fail(source, "params.budget", "must be in 1..100000000");
    cfg.budget = static_cast<int>(budget);
    const long long starts = get_int(P, "params", "starts", cfg.starts, source);
    if (starts < 1 || starts > 4096) fail(source, "params.starts", "must be in 1..4096");
    cfg.starts = static_cast<int>(starts);

    cfg.mode = get_str(P, "params", "mode", cfg.mode, source);
    if (!one_of(cfg.mode, {"skew", "base"}))
        fail(source, "params.mode", "expected \"skew\" or \"base\"");
    cfg.method = get_str(P, "params", "method", cfg.method, source);
    if (!one_of(cfg.method, {"periodic", "birkhoff"}))
        fail(source, "params.method", "expected \"periodic\" or \"birkhoff\"");
    cfg.fn = get_str(P, "params", "fn", cfg.fn, source);
    if (!one_of(cfg.fn, {"lyapunov", "green_at_point", "residual_x_omega",
                         "g_on_critical"}))
        fail(source, "params.fn", "unknown raster function \"" + cfg.fn + "\"");

    cfg.word = get_str(P, "params", "word", cfg.word, source);
    try {
        (void)parse_word(cfg.word);
    } catch (const DomainError& e) {
        fail(source, "params.word", e.what());
    }

    if (auto it = P.find("point"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.point", "expected an object");
        check_keys(*it, "params.point", source, {"z", "w"});
        cfg.at_z = get_complex(*it, "params.point", "z", cfg.at_z, source);
        cfg.at_w = get_complex(*it, "params.point", "w", cfg.at_w, source);
    }

    if (auto it = P.find("slice"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.slice", "expected an object");
        check_keys(*it, "params.slice", source,
                   {"d1", "d2", "resolution", "vary", "window"});
        cfg.vary = get_str(*it, "params.slice", "vary", cfg.vary, source);
        if (!one_of(cfg.vary, {"a", "alpha", "beta", "eps"}))
            fail(source, "params.slice.vary", "expected a lambda component name");
        cfg.dir1 = get_complex(*it, "params.slice", "d1", cfg.dir1, source);
        cfg.dir2 = get_complex(*it, "params.slice", "d2", cfg.dir2, source);
        if (auto w = it->find("window"); w != it->end()) {
            if (!w->is_object()) fail(source, "params.slice.window", "expected an object");
            check_keys(*w, "params.slice.window", source, {"u", "v"});
            auto read_pair = [&](const char* key, double& lo, double& hi) {
                auto p = w->find(key);
                if (p == w->end()) return;
                if (!p->is_array() || p->size() != 2 || !(*p)[0].is_number() ||
                    !(*p)[1].is_number())
                    fail(source, join("params.slice.window", key), "expected [lo, hi]");
                lo = (*p)[0].get<double>();
                hi = (*p)[1].get<double>();
                if (!(hi >= lo))
                    fail(source, join("params.slice.window", key), "window is inverted");
            };
            read_pair("u", cfg.window.u0, cfg.window.u1);
            read_pair("v", cfg.window.v0, cfg.window.v1);
        }
        if (auto r = it->find("resolution"); r != it->end()) {
            if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number_integer() ||
                !(*r)[1].is_number_integer())
                fail(source, "params.slice.resolution", "expected [nx, ny]");
            const long long nx = (*r)[0].get<long long>();
            const long long ny = (*r)[1].get<long long>();
            if (nx < 1 || ny < 1 || nx > 8192 || ny > 8192)
                fail(source, "params.slice.resolution", "must be in 1..8192 per axis");
            cfg.nx = static_cast<int>(nx);
            cfg.ny = static_cast<int>(ny);
        }
    }
    if (cfg.mode == "base" && cfg.vary != "a")
        fail(source, "params.slice.vary",
             "base-mode slices move the base parameter only");

    if (auto it = P.find("relation"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.relation", "expected an object");
        check_keys(*it, "params.relation", source, {"n", "m", "to_fixed"});
        const long long n = get_int(*it, "params.relation", "n", cfg.rel_n, source);
        const long long m = get_int(*it, "params.relation", "m", cfg.rel_m, source);
        if (n < 1 || n > 20) fail(source, "params.relation.n", "must be in 1..20");
        if (m < 0) fail(source, "params.relation.m", "must be nonnegative");
        cfg.rel_n = static_cast<int>(n);
        cfg.rel_m = static_cast<int>(m);
        cfg.rel_to_fixed =
            get_bool(*it, "params.relation", "to_fixed", cfg.rel_to_fixed, source);
        if (!cfg.rel_to_fixed && !(cfg.rel_n > cfg.rel_m))
            fail(source, "params.relation", "needs n > m (or to_fixed)");
    }

    if (auto it = P.find("rational"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.rational", "expected an object");
        check_keys(*it, "params.rational", source, {"a", "w"});
        cfg.rational_a = get_str(*it, "params.rational", "a", cfg.rational_a, source);
        cfg.rational_w = get_str(*it, "params.rational", "w", cfg.rational_w, source);
        check_rational(cfg.rational_a, "a", source);
        check_rational(cfg.rational_w, "w", source);
    }
    const long long cap = get_int(P, "params", "height_cap_bits", cfg.height_cap_bits,
                                  source);
    if (cap < 64 || cap > 1048576)
        fail(source, "params.height_cap_bits", "must be in 64..1048576");
    cfg.height_cap_bits = static_cast<int>(cap);

    if (auto it = P.find("inputs"); it != P.end()) {
        if (!it->is_object()) fail(source, "params.inputs", "expected an object");
        check_keys(*it, "params.inputs", source, {"density", "points"});
        cfg.density_path = get_str(*it, "params.inputs", "density", cfg.density_path,
                                   source);
        cfg.points_path = get_str(*it, "params.inputs", "points", cfg.points_path,
                                  source);
    }

    return cfg;
}

JobConfig load_job_config(const std::string& path) {
    return parse_job_config(read_text_file(path), path);
}

std::string job_config_json(const JobConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["out"] = cfg.out_dir;
    j["seed"] = cfg.seed;
    j["workers"] = cfg.workers;
    json& p = j["params"];
    p["lambda"]["a"] = cpx(cfg.a);
    p["lambda"]["alpha"] = cpx(cfg.alpha);
    p["lambda"]["beta"] = cpx(cfg.beta);
    p["lambda"]["eps"] = cpx(cfg.eps);
    p["c"] = cpx(cfg.c);
    p["d"] = cfg.d;
    p["rho"] = cfg.rho;
    p["aperture"] = cfg.aperture;
    p["slack"] = cfg.slack;
    p["grid"] = cfg.grid;
    p["order"] = cfg.order;
    p["budget"] = cfg.budget;
    p["tol"] = cfg.tol;
    p["starts"] = cfg.starts;
    p["mode"] = cfg.mode;
    p["method"] = cfg.method;
    p["fn"] = cfg.fn;
    p["word"] = cfg.word;
    p["point"]["z"] = cpx(cfg.at_z);
    p["point"]["w"] = cpx(cfg.at_w);
    p["slice"]["vary"] = cfg.vary;
    p["slice"]["d1"] = cpx(cfg.dir1);
    p["slice"]["d2"] = cpx(cfg.dir2);
    p["slice"]["window"]["u"] = json::array({cfg.window.u0, cfg.window.u1});
    p["slice"]["window"]["v"] = json::array({cfg.window.v0, cfg.window.v1});
    p["slice"]["resolution"] = json::array({cfg.nx, cfg.ny});
    p["relation"]["n"] = cfg.rel_n;
    p["relation"]["m"] = cfg.rel_m;
    p["relation"]["to_fixed"] = cfg.rel_to_fixed;
    p["rational"]["a"] = cfg.rational_a;
    p["rational"]["w"] = cfg.rational_w;
    p["height_cap_bits"] = cfg.height_cap_bits;
    p["inputs"]["density"] = cfg.density_path;
    p["inputs"]["points"] = cfg.points_path;
    return j.dump(2) + "\n";
}

SkewParams skew_params_from(const JobConfig& cfg) {
    return SkewParams(cfg.a, cfg.alpha, cfg.beta, cfg.eps);
}

RegularSkewMap regular_map_from(const JobConfig& cfg) {
    return RegularSkewMap(skew_params_from(cfg), cfg.c);
}

SliceSpec slice_from(const JobConfig& cfg) {
    if (cfg.mode == "base")
        return SliceSpec(cfg.a, cfg.dir1, cfg.dir2, cfg.window.u0, cfg.window.u1,
                         cfg.window.v0, cfg.window.v1, cfg.nx, cfg.ny);
    ParamDir d1, d2;
    if (cfg.vary == "a") {
        d1.da = cfg.dir1;
        d2.da = cfg.dir2;
    } else if (cfg.vary == "alpha") {
        d1.dalpha = cfg.dir1;
        d2.dalpha = cfg.dir2;
    } else if (cfg.vary == "beta") {
        d1.dbeta = cfg.dir1;
        d2.dbeta = cfg.dir2;
    } else {
        d1.deps = cfg.dir1;
        d2.deps = cfg.dir2;
    }
    return SliceSpec(skew_params_from(cfg), d1, d2, cfg.window.u0, cfg.window.u1,
                     cfg.window.v0, cfg.window.v1, cfg.nx, cfg.ny);
}

RasterBudgets raster_budgets_from(const JobConfig& cfg) {
    if (cfg.c.imag() != 0.0)
        throw ConfigError("params.c: raster jobs take a real perturbation weight");
    RasterBudgets b;
    b.tol = cfg.tol;
    b.budget = cfg.budget;
    b.order = cfg.order;
    b.c = cfg.c.real();
    b.at_z = cfg.at_z;
    b.at_w = cfg.at_w;
    b.word = parse_word(cfg.word);
    return b;
}

RasterFn raster_fn_from(const JobConfig& cfg) {
    if (cfg.fn == "lyapunov") return RasterFn::lyapunov;
    if (cfg.fn == "green_at_point") return RasterFn::green_at_point;
    if (cfg.fn == "residual_x_omega") return RasterFn::residual_x_omega;
    if (cfg.fn == "g_on_critical") return RasterFn::g_on_critical;
    throw ConfigError("params.fn: unknown raster function \"" + cfg.fn + "\"");
}

MisiurewiczRelation relation_from(const JobConfig& cfg) {
    return {cfg.rel_n, cfg.rel_m, cfg.rel_to_fixed};
}

void atomic_write_file(const std::string& path, const std::string& bytes) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ConfigError("cannot open " + tmp + " for writing");
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        out.flush();
        if (!out) throw ConfigError("short write to " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw ConfigError("cannot move " + tmp + " into place: " +
                          std::strerror(errno));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace sb
