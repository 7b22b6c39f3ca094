#include "fdrkit/fdr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace fdrkit::fdr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_level(double q, const char* where)
{
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error(std::string(where) + ": level must be in (0,1)");
    }
}

std::vector<double> sorted_values(const PValueSet& p)
{
    std::vector<double> ps(p.size());
    for (std::size_t r = 0; r < p.size(); ++r) ps[r] = p.values()[p.order()[r]];
    return ps;
}

// Scatter per-rank results back to original order, clipping adjusted at 1.
FdrOutcome assemble(const PValueSet& p, const std::vector<char>& rejected_by_rank,
                    const std::vector<double>& adjusted_by_rank, double q, Method method)
{
    const std::size_t v = p.size();
    FdrOutcome out;
    out.q = q;
    out.method = method;
    out.rejected.assign(v, 0);
    out.adjusted_p.assign(v, 1.0);
    double crit = -1.0;
    for (std::size_t r = 0; r < v; ++r) {
        const std::size_t idx = p.order()[r];
        out.rejected[idx] = rejected_by_rank[r];
        out.adjusted_p[idx] = std::min(adjusted_by_rank[r], 1.0);
        if (rejected_by_rank[r]) crit = std::max(crit, p.values()[idx]);
    }
    if (crit >= 0.0) out.critical_p = crit;
    return out;
}

// Step-up scan shared by BH and BY: slope is q/V, optionally deflated.
FdrOutcome step_up(const PValueSet& p, double q, double deflate, Method method)
{
    const std::size_t v = p.size();
    const std::vector<double> ps = sorted_values(p);

    std::size_t istar = 0;  // largest 1-based rank satisfying the inequality
    for (std::size_t i = 1; i <= v; ++i) {
        if (ps[i - 1] <= static_cast<double>(i) * q / (static_cast<double>(v) * deflate)) {
            istar = i;
        }
    }
    std::vector<char> rej(v, 0);
    for (std::size_t r = 0; r < istar; ++r) rej[r] = 1;

    // Corrected p per rank, then the cumulative minimum from the top.
    std::vector<double> adj(v);
    for (std::size_t i = 1; i <= v; ++i) {
        adj[i - 1] = ps[i - 1] * static_cast<double>(v) * deflate / static_cast<double>(i);
    }
    for (std::size_t r = v - 1; r-- > 0;) adj[r] = std::min(adj[r], adj[r + 1]);

    return assemble(p, rej, adj, q, method);
}

double bky_slope_denominator(std::size_t v, std::size_t i, double q)
{
    return static_cast<double>(v) + 1.0 - static_cast<double>(i) * (1.0 - q);
}

} // namespace

std::string method_name(Method m)
{
    switch (m) {
        case Method::BH: return "bh";
        case Method::BY: return "by";
        case Method::BKY: return "bky";
        case Method::Sidak: return "sidak";
        case Method::Bonferroni: return "bonferroni";
    }
    return "?";
}

std::optional<Method> method_from_name(const std::string& name)
{
    if (name == "bh") return Method::BH;
    if (name == "by") return Method::BY;
    if (name == "bky") return Method::BKY;
    if (name == "sidak") return Method::Sidak;
    if (name == "bonferroni") return Method::Bonferroni;
    return std::nullopt;
}

PValueSet::PValueSet(std::vector<double> values)
    : values_(std::move(values))
{
    if (values_.empty()) {
        throw std::domain_error("PValueSet: empty input");
    }
    for (double p : values_) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::domain_error("PValueSet: p-value out of [0,1]");
        }
    }
    order_.resize(values_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::stable_sort(order_.begin(), order_.end(),
                     [&](std::size_t a, std::size_t b) { return values_[a] < values_[b]; });
}

bool FdrOutcome::any_rejected() const
{
    return std::any_of(rejected.begin(), rejected.end(), [](char r) { return r != 0; });
}

std::size_t FdrOutcome::rejection_count() const
{
    return static_cast<std::size_t>(std::count(rejected.begin(), rejected.end(), char{1}));
}

FdrOutcome bh_decide(const PValueSet& p, double q)
{
    require_level(q, "bh_decide");
    return step_up(p, q, 1.0, Method::BH);
}

FdrOutcome by_decide(const PValueSet& p, double q)
{
    require_level(q, "by_decide");
    return step_up(p, q, by_constant(p.size()), Method::BY);
}

FdrOutcome bky_decide(const PValueSet& p, double q)
{
    require_level(q, "bky_decide");
    const std::size_t v = p.size();
    const std::vector<double> ps = sorted_values(p);

    // Keep rejecting rank i while some p_(j), j >= i, falls under the
    // threshold line for position i; stop at the first i where none does.
    std::size_t istar = v + 1;
    for (std::size_t i = 1; i <= v; ++i) {
        const double denom = bky_slope_denominator(v, i, q);
        bool any = false;
        for (std::size_t j = i; j <= v; ++j) {
            if (ps[j - 1] <= static_cast<double>(j) * q / denom) {
                any = true;
                break;
            }
        }
        if (!any) {
            istar = i;
            break;
        }
    }
    std::vector<char> rej(v, 0);
    for (std::size_t r = 0; r + 1 < istar; ++r) rej[r] = 1;

    // Corrected p per rank: the smallest level at which position i has a
    // qualifying p_(j); then the cumulative maximum up to i.
    std::vector<double> adj(v);
    for (std::size_t i = 1; i <= v; ++i) {
        double best = kInf;
        for (std::size_t j = i; j <= v; ++j) {
            const double pj = ps[j - 1];
            const double den = static_cast<double>(j) - static_cast<double>(i) * pj;
            const double val = den > 0.0
                ? pj * (static_cast<double>(v) + 1.0 - static_cast<double>(i)) / den
                : kInf;
            best = std::min(best, val);
        }
        adj[i - 1] = best;
    }
    for (std::size_t r = 1; r < v; ++r) adj[r] = std::max(adj[r], adj[r - 1]);

    return assemble(p, rej, adj, q, Method::BKY);
}

FdrOutcome bky_decide_fast(const PValueSet& p, double q)
{
    require_level(q, "bky_decide_fast");
    const std::size_t v = p.size();
    const std::vector<double> ps = sorted_values(p);

    // Suffix maxima of j/p_(j); a zero p-value dominates everything.
    std::vector<double> suffix_max(v);
    double running = -kInf;
    for (std::size_t j = v; j >= 1; --j) {
        const double pj = ps[j - 1];
        const double ratio = pj > 0.0 ? static_cast<double>(j) / pj : kInf;
        running = std::max(running, ratio);
        suffix_max[j - 1] = running;
    }

    // Existence of a qualifying j >= i reduces to comparing the suffix
    // extremum against the per-position slope.
    std::size_t istar = v + 1;
    for (std::size_t i = 1; i <= v; ++i) {
        if (!(suffix_max[i - 1] >= bky_slope_denominator(v, i, q) / q)) {
            istar = i;
            break;
        }
    }
    std::vector<char> rej(v, 0);
    for (std::size_t r = 0; r + 1 < istar; ++r) rej[r] = 1;

    std::vector<double> adj(v);
    for (std::size_t i = 1; i <= v; ++i) {
        const double m = suffix_max[i - 1];
        double val;
        if (std::isinf(m)) {
            val = 0.0;
        } else if (m <= static_cast<double>(i)) {
            val = kInf;
        } else {
            val = (static_cast<double>(v) + 1.0 - static_cast<double>(i))
                  / (m - static_cast<double>(i));
        }
        adj[i - 1] = val;
    }
    for (std::size_t r = 1; r < v; ++r) adj[r] = std::max(adj[r], adj[r - 1]);

    return assemble(p, rej, adj, q, Method::BKY);
}

FdrOutcome sidak_adjust(const PValueSet& p, double q)
{
    require_level(q, "sidak_adjust");
    const std::size_t v = p.size();
    FdrOutcome out;
    out.q = q;
    out.method = Method::Sidak;
    out.rejected.assign(v, 0);
    out.adjusted_p.resize(v);
    double crit = -1.0;
    for (std::size_t i = 0; i < v; ++i) {
        const double pi = p.values()[i];
        // 1 - (1-p)^V, kept accurate for small p.
        const double adj = pi >= 1.0 ? 1.0 : -std::expm1(static_cast<double>(v) * std::log1p(-pi));
        out.adjusted_p[i] = std::min(adj, 1.0);
        if (out.adjusted_p[i] <= q) {
            out.rejected[i] = 1;
            crit = std::max(crit, pi);
        }
    }
    if (crit >= 0.0) out.critical_p = crit;
    return out;
}

FdrOutcome bonferroni_adjust(const PValueSet& p, double q)
{
    require_level(q, "bonferroni_adjust");
    const std::size_t v = p.size();
    FdrOutcome out;
    out.q = q;
    out.method = Method::Bonferroni;
    out.rejected.assign(v, 0);
    out.adjusted_p.resize(v);
    double crit = -1.0;
    for (std::size_t i = 0; i < v; ++i) {
        const double pi = p.values()[i];
        out.adjusted_p[i] = std::min(pi * static_cast<double>(v), 1.0);
        if (out.adjusted_p[i] <= q) {
            out.rejected[i] = 1;
            crit = std::max(crit, pi);
        }
    }
    if (crit >= 0.0) out.critical_p = crit;
    return out;
}

FdrOutcome decide(const PValueSet& p, Method method, double q)
{
    switch (method) {
        case Method::BH: return bh_decide(p, q);
        case Method::BY: return by_decide(p, q);
        case Method::BKY: return bky_decide_fast(p, q);
        case Method::Sidak: return sidak_adjust(p, q);
        case Method::Bonferroni: return bonferroni_adjust(p, q);
    }
    throw std::logic_error("decide: unknown method");
}

double by_constant(std::size_t v)
{
    double c = 0.0;
    for (std::size_t j = 1; j <= v; ++j) c += 1.0 / static_cast<double>(j);
    return c;
}

} // namespace fdrkit::fdr
