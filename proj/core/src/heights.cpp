#include "sb/heights.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace sb {

namespace {

double log_mpz(const mpz_class& n) {
    // log|n| robust for arbitrary size (mpz_get_d overflows past ~2^1024)
    if (n == 0) return -std::numeric_limits<double>::infinity();
    signed long exp2;
    const double d = mpz_get_d_2exp(&exp2, n.get_mpz_t());
    return std::log(std::abs(d)) + static_cast<double>(exp2) * std::log(2.0);
}

std::size_t bits(const mpz_class& n) {
    return mpz_sizeinbase(n.get_mpz_t(), 2);
}

// double value of a rational that may be far outside double range; returns
// the sign times exp(clamped log), which is only used while |log| < 345
double to_double_via_logs(const mpq_class& x) {
    if (x == 0) return 0.0;
    const double l = log_mpz(mpq_class(x).get_num()) - log_mpz(mpq_class(x).get_den());
    const double v = std::exp(std::min(std::max(l, -700.0), 700.0));
    return sgn(x) < 0 ? -v : v;
}

constexpr double kIncrementTol = 1e-6;
constexpr double kDoubleCeiling = 1e150;

// factor n into (divisor, multiplicity) pairs by trial division; a composite
// leftover is kept as one pseudo-prime, which is fine for valuation tracking
// as long as it stays coprime to the other basis elements
std::vector<std::pair<mpz_class, int>> trial_factor(mpz_class n) {
    std::vector<std::pair<mpz_class, int>> out;
    n = abs(n);
    if (n <= 1) return out;
    for (unsigned long d = 2; d <= 1000000ul; d = (d == 2 ? 3 : d + 2)) {
        if (mpz_cmp_ui(n.get_mpz_t(), d * d) < 0) break;
        if (mpz_divisible_ui_p(n.get_mpz_t(), d)) {
            mpz_class m(d);
            int e = static_cast<int>(
                mpz_remove(n.get_mpz_t(), n.get_mpz_t(), m.get_mpz_t()));
            out.emplace_back(m, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

// Denominator bookkeeping for the floating continuation of the base map.
// With w = W/D reduced and a = p/q, one step gives W' = p(W^2 - D^2),
// D' = q D^2 before reduction.  Any divisor m of D is coprime to W, so
// W^2 - D^2 = W^2 (mod m) is a unit mod m; hence once m sits inside D its
// exponent follows a closed recurrence: v' = v_m(q) + 2v for m | q,
// v' = max(2v - v_m(p), 0) for m | p, v' = 2v for m coprime to pq.  The
// only guess is first entry of a q-divisor (assumed at full strength),
// which can only overestimate, keeping the estimate nonnegative.
struct DenominatorModel {
    struct Term {
        double log_m;
        double vq, vp;  // multiplicity of m in den(a), num(a); one is 0
        double e;       // current exponent in the reduced denominator
    };
    std::vector<Term> terms;
    double log_rest = 0.0;  // inert part of the handoff denominator

    DenominatorModel(const mpq_class& a, const mpz_class& d0) {
        mpz_class rest(d0);
        auto add = [&](const mpz_class& m, int mult, bool in_q) {
            Term t;
            t.log_m = log_mpz(m);
            t.vq = in_q ? mult : 0;
            t.vp = in_q ? 0 : mult;
            t.e = static_cast<double>(
                mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), m.get_mpz_t()));
            terms.push_back(t);
        };
        for (const auto& [m, mult] : trial_factor(mpq_class(a).get_den())) add(m, mult, true);
        for (const auto& [m, mult] : trial_factor(mpq_class(a).get_num())) add(m, mult, false);
        log_rest = log_mpz(rest);
    }

    void step() {
        for (auto& t : terms) {
            if (t.vq > 0)
                t.e = (t.e >= 1.0) ? t.vq + 2.0 * t.e : t.vq;
            else
                t.e = std::max(2.0 * t.e - t.vp, 0.0);
        }
        log_rest *= 2.0;
    }

    double log_den() const {
        double s = log_rest;
        for (const auto& t : terms) s += t.e * t.log_m;
        return s;
    }
};

} // namespace

double weil_height(const mpq_class& x) {
    mpq_class c(x);
    c.canonicalize();
    return std::max(log_mpz(c.get_num()), log_mpz(c.get_den()));
}

double weil_height(const mpq_class& z, const mpq_class& w) {
    mpq_class zc(z), wc(w);
    zc.canonicalize();
    wc.canonicalize();
    mpz_class d;
    mpz_lcm(d.get_mpz_t(), zc.get_den().get_mpz_t(), wc.get_den().get_mpz_t());
    const mpz_class zn = zc.get_num() * (d / zc.get_den());
    const mpz_class wn = wc.get_num() * (d / wc.get_den());
    return std::max({log_mpz(zn), log_mpz(wn), log_mpz(d)});
}

HeightResult canonical_height_rational(const RationalBaseMap& map,
                                       const mpq_class& w0, int budget,
                                       int height_cap_bits) {
    if (map.a == 0) throw DomainError("canonical_height_rational: a = 0 is not degree 2");
    if (budget < 2) throw DomainError("canonical_height_rational: budget too small");

    mpq_class w(w0);
    w.canonicalize();
    std::vector<mpq_class> seen;
    double g_prev = 0.0;
    bool have_prev = false;
    int small_run = 0;  // consecutive sub-tolerance increments
    int n = 0;

    // A single small increment is not convergence: Weil heights can agree
    // by coincidence early in an orbit (3/5 -> -24/25 has equal heights),
    // so demand three consecutive small increments.  A near-zero estimate
    // on an exact orbit is withheld too: the point is almost certainly
    // preperiodic and iterating further lets the cycle close.
    const std::size_t cap = static_cast<std::size_t>(std::max(height_cap_bits, 64));
    while (n < budget) {
        for (const auto& s : seen)
            if (s == w) return {0.0, true, n, true};
        const double g = std::ldexp(weil_height(w), -n);
        if (have_prev) small_run = (std::abs(g - g_prev) < kIncrementTol) ? small_run + 1 : 0;
        if (small_run >= 3 && g >= kIncrementTol) return {g, false, n, true};
        g_prev = g;
        have_prev = true;
        if (bits(w.get_num()) > cap || bits(w.get_den()) > cap) break;
        seen.push_back(w);
        w = map.a * (w * w - 1);
        w.canonicalize();
        ++n;
    }
    if (n >= budget)
        throw BudgetExhausted("canonical_height_rational: inconclusive at budget " +
                              std::to_string(budget));

    // floating continuation on the value and a factored denominator model;
    // the first float g lands at the same n as the last exact one, so the
    // comparison state is reset rather than treating it as a new step
    const double log_q = log_mpz(mpq_class(map.a).get_den());
    const double log_p = log_mpz(mpq_class(map.a).get_num());
    DenominatorModel dens(map.a, w.get_den());
    double wd = to_double_via_logs(w);
    double lw = (w == 0) ? -1e18 : (log_mpz(w.get_num()) - log_mpz(w.get_den()));
    const double ad = (sgn(map.a) < 0 ? -1.0 : 1.0) *
                      std::exp(std::min(log_p - log_q, 700.0));
    have_prev = false;
    small_run = 0;
    while (n < budget) {
        const double h = dens.log_den() + std::max(lw, 0.0);
        const double g = std::ldexp(h, -n);
        if (have_prev) small_run = (std::abs(g - g_prev) < kIncrementTol) ? small_run + 1 : 0;
        if (small_run >= 3) return {std::max(g, 0.0), false, n, false};
        g_prev = g;
        have_prev = true;
        if (std::abs(wd) < kDoubleCeiling) {
            wd = ad * (wd * wd - 1.0);
            lw = (wd == 0.0) ? -1e18 : std::log(std::abs(wd));
        } else {
            lw = (log_p - log_q) + 2.0 * lw;  // the -1 is below 1e-300 relative
        }
        dens.step();
        ++n;
    }
    throw BudgetExhausted("canonical_height_rational: inconclusive at budget " +
                          std::to_string(budget));
}

HeightResult canonical_height_rational(const RationalSkewMapQ& map,
                                       const RationalPoint& x0, int budget,
                                       int height_cap_bits) {
    if (map.a == 0) throw DomainError("canonical_height_rational: a = 0 is not degree 2");
    if (budget < 2) throw DomainError("canonical_height_rational: budget too small");

    mpq_class z(x0.z), w(x0.w);
    z.canonicalize();
    w.canonicalize();
    std::vector<std::pair<mpq_class, mpq_class>> seen;
    double g_prev = 0.0;
    bool have_prev = false;
    int small_run = 0;
    int n = 0;
    const std::size_t cap = static_cast<std::size_t>(std::max(height_cap_bits, 64));

    while (n < budget) {
        for (const auto& s : seen)
            if (s.first == z && s.second == w) return {0.0, true, n, true};
        const double g = std::ldexp(weil_height(z, w), -n);
        if (have_prev) small_run = (std::abs(g - g_prev) < kIncrementTol) ? small_run + 1 : 0;
        if (small_run >= 3 && g >= kIncrementTol) return {g, false, n, true};
        g_prev = g;
        have_prev = true;
        const std::size_t top = std::max(
            {bits(z.get_num()), bits(z.get_den()), bits(w.get_num()), bits(w.get_den())});
        if (top > cap) break;
        seen.emplace_back(z, w);
        const mpq_class znext = map.alpha * z + map.eps * w + map.beta * z * w;
        w = map.a * (w * w - 1);
        z = znext;
        z.canonicalize();
        w.canonicalize();
        ++n;
    }
    if (n >= budget)
        throw BudgetExhausted("canonical_height_rational: inconclusive at budget " +
                              std::to_string(budget));

    // Common cleared denominator: with z = Z/D, w = W/D the image needs
    // D' = q0 D^2 where q0 = lcm of the coefficient denominators.  Unlike
    // the base map there is no clean per-prime reduction law for the pair,
    // so uncounted gcds can make this an overestimate; the fiber direction
    // is subordinate to w in the limit, which keeps the bias one-sided.
    mpz_class q0z;
    mpz_lcm(q0z.get_mpz_t(), mpq_class(map.alpha).get_den().get_mpz_t(),
            mpq_class(map.eps).get_den().get_mpz_t());
    mpz_lcm(q0z.get_mpz_t(), q0z.get_mpz_t(), mpq_class(map.beta).get_den().get_mpz_t());
    mpz_lcm(q0z.get_mpz_t(), q0z.get_mpz_t(), mpq_class(map.a).get_den().get_mpz_t());
    const double log_q0 = log_mpz(q0z);

    mpz_class d0;
    mpz_lcm(d0.get_mpz_t(), z.get_den().get_mpz_t(), w.get_den().get_mpz_t());
    double LD = log_mpz(d0);
    double zd = to_double_via_logs(z), wd = to_double_via_logs(w);
    double lz = (z == 0) ? -1e18 : (log_mpz(z.get_num()) - log_mpz(z.get_den()));
    double lw = (w == 0) ? -1e18 : (log_mpz(w.get_num()) - log_mpz(w.get_den()));
    const double ad = to_double_via_logs(map.a), al = to_double_via_logs(map.alpha);
    const double be = to_double_via_logs(map.beta), ep = to_double_via_logs(map.eps);
    const double la = std::log(std::max(std::abs(ad), 1e-300));
    const double lal = std::log(std::max(std::abs(al), 1e-300));
    const double lbe = std::log(std::max(std::abs(be), 1e-300));
    const double lep = std::log(std::max(std::abs(ep), 1e-300));

    have_prev = false;
    small_run = 0;
    while (n < budget) {
        const double h = LD + std::max({lz, lw, 0.0});
        const double g = std::ldexp(h, -n);
        if (have_prev) small_run = (std::abs(g - g_prev) < kIncrementTol) ? small_run + 1 : 0;
        if (small_run >= 3) return {std::max(g, 0.0), false, n, false};
        g_prev = g;
        have_prev = true;
        if (std::abs(zd) < kDoubleCeiling && std::abs(wd) < kDoubleCeiling) {
            const double znext = al * zd + ep * wd + be * zd * wd;
            wd = ad * (wd * wd - 1.0);
            zd = znext;
            lz = (zd == 0.0) ? -1e18 : std::log(std::abs(zd));
            lw = (wd == 0.0) ? -1e18 : std::log(std::abs(wd));
        } else {
            // dominant-term log recurrence; sign cancellations are ignored,
            // which costs at most log 3 per step and vanishes under 2^{-n}
            const double lznext = std::max({lal + lz, lep + lw, lbe + lz + lw});
            lw = la + 2.0 * lw;
            lz = lznext;
        }
        LD = log_q0 + 2.0 * LD;
        ++n;
    }
    throw BudgetExhausted("canonical_height_rational: inconclusive at budget " +
                          std::to_string(budget));
}

} // namespace sb
