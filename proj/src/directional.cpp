#include "fdrkit/directional.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "fdrkit/pvalues.hpp"
#include "fdrkit/selective.hpp"

namespace fdrkit::directional {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

fdr::FdrOutcome run_method(const std::vector<double>& pv, fdr::Method method, double q)
{
    fdr::PValueSet set(pv);
    return method == fdr::Method::BH ? fdr::bh_decide(set, q) : fdr::bky_decide_fast(set, q);
}

void require_method(fdr::Method method)
{
    if (method != fdr::Method::BH && method != fdr::Method::BKY) {
        throw std::domain_error("apply_strategy: method must be BH or BKY");
    }
}

selective::SecondStage to_second_stage(fdr::Method method)
{
    return method == fdr::Method::BH ? selective::SecondStage::BH : selective::SecondStage::BKY;
}

std::vector<double> complement(const std::vector<double>& p)
{
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = 1.0 - p[i];
    return out;
}

std::vector<double> two_tailed(const std::vector<double>& p)
{
    std::vector<double> out(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] = pvalues::symmetric_two_tailed(p[i]);
    return out;
}

// Parametric statistic-space thresholds from the per-side critical p.
// crit_pos / crit_neg live in the p-space of the side's FDR call:
// one-tailed for canonical-style sides, two-tailed otherwise.
void fill_parametric(DirectionalOutcome& out, const DirectionalInput& input, bool two_tailed_space)
{
    if (!input.dof) return;
    const auto dof = *input.dof;
    if (out.critical_p_pos) {
        const double p_one = two_tailed_space ? *out.critical_p_pos / 2.0 : *out.critical_p_pos;
        out.t_pos_param = numerics::t_inv_cdf(1.0 - p_one, dof);
    }
    if (out.critical_p_neg) {
        const double cum = two_tailed_space ? *out.critical_p_neg / 2.0 : *out.critical_p_neg;
        out.t_neg_param = numerics::t_inv_cdf(cum, dof);
    }
}

void finalize(DirectionalOutcome& out, const DirectionalInput& input)
{
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (out.rejected_pos[i] && out.rejected_neg[i]) {
            out.dual_direction_rejection = true;
            break;
        }
    }
    const auto [t_pos, t_neg] = compute_thresholds(input, out);
    out.t_pos = t_pos;
    out.t_neg = t_neg;
}

} // namespace

DirectionalInput DirectionalInput::from_statistics(std::vector<double> z,
                                                   std::optional<numerics::DegreesOfFreedom> dof)
{
    DirectionalInput in;
    in.p_one.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        in.p_one[i] = dof ? 1.0 - numerics::t_cdf(z[i], *dof) : 1.0 - numerics::normal_cdf(z[i]);
    }
    in.z = std::move(z);
    in.dof = dof;
    return in;
}

void DirectionalInput::validate() const
{
    if (z.size() != p_one.size()) {
        throw std::domain_error("DirectionalInput: z and p_one lengths differ");
    }
    if (z.empty()) {
        throw std::domain_error("DirectionalInput: empty input");
    }
    for (double p : p_one) {
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::domain_error("DirectionalInput: p_one out of [0,1]");
        }
    }
}

std::string strategy_name(Strategy s)
{
    switch (s) {
        case Strategy::Canonical: return "canonical";
        case Strategy::Combined: return "combined";
        case Strategy::TwoTailed: return "twotailed";
        case Strategy::SplitTails: return "splittails";
        case Strategy::CanonicalBB: return "canonical-bb";
        case Strategy::SplitTailsBB: return "splittails-bb";
    }
    return "?";
}

std::optional<Strategy> strategy_from_name(const std::string& name)
{
    if (name == "canonical") return Strategy::Canonical;
    if (name == "combined") return Strategy::Combined;
    if (name == "twotailed") return Strategy::TwoTailed;
    if (name == "splittails") return Strategy::SplitTails;
    if (name == "canonical-bb") return Strategy::CanonicalBB;
    if (name == "splittails-bb") return Strategy::SplitTailsBB;
    return std::nullopt;
}

bool strategy_uses_bb(Strategy s)
{
    return s == Strategy::CanonicalBB || s == Strategy::SplitTailsBB;
}

DirectionalOutcome apply_strategy(const DirectionalInput& input, Strategy strategy,
                                  fdr::Method method, double q, double screening_level)
{
    input.validate();
    require_method(method);
    const std::size_t v = input.size();

    DirectionalOutcome out;
    out.adjusted_pos.assign(v, kNaN);
    out.adjusted_neg.assign(v, kNaN);
    out.rejected_pos.assign(v, 0);
    out.rejected_neg.assign(v, 0);
    out.rejected_any.assign(v, 0);

    switch (strategy) {
        case Strategy::Canonical: {
            const auto pos = run_method(input.p_one, method, q);
            const auto neg = run_method(complement(input.p_one), method, q);
            out.adjusted_pos = pos.adjusted_p;
            out.adjusted_neg = neg.adjusted_p;
            out.rejected_pos = pos.rejected;
            out.rejected_neg = neg.rejected;
            for (std::size_t i = 0; i < v; ++i) {
                out.rejected_any[i] = pos.rejected[i] || neg.rejected[i];
            }
            out.critical_p_pos = pos.critical_p;
            out.critical_p_neg = neg.critical_p;
            fill_parametric(out, input, false);
            break;
        }
        case Strategy::Combined: {
            std::vector<double> pooled = input.p_one;
            const std::vector<double> comp = complement(input.p_one);
            pooled.insert(pooled.end(), comp.begin(), comp.end());
            const auto res = run_method(pooled, method, q);
            for (std::size_t i = 0; i < v; ++i) {
                out.adjusted_pos[i] = res.adjusted_p[i];
                out.adjusted_neg[i] = res.adjusted_p[v + i];
                out.rejected_pos[i] = res.rejected[i];
                out.rejected_neg[i] = res.rejected[v + i];
                out.rejected_any[i] = res.rejected[i] || res.rejected[v + i];
            }
            // One pooled call: both sides share the critical cutoff.
            out.critical_p_pos = res.critical_p;
            out.critical_p_neg = res.critical_p;
            fill_parametric(out, input, false);
            break;
        }
        case Strategy::TwoTailed: {
            const auto res = run_method(two_tailed(input.p_one), method, q);
            for (std::size_t i = 0; i < v; ++i) {
                out.rejected_any[i] = res.rejected[i];
                if (input.z[i] > 0.0) {
                    out.adjusted_pos[i] = res.adjusted_p[i];
                    out.rejected_pos[i] = res.rejected[i];
                } else if (input.z[i] < 0.0) {
                    out.adjusted_neg[i] = res.adjusted_p[i];
                    out.rejected_neg[i] = res.rejected[i];
                }
                // z == 0 rejections belong to neither side.
            }
            out.critical_p_pos = res.critical_p;
            out.critical_p_neg = res.critical_p;
            fill_parametric(out, input, true);
            break;
        }
        case Strategy::SplitTails: {
            const std::vector<double> p2 = two_tailed(input.p_one);
            std::vector<std::size_t> pos_idx, neg_idx;
            for (std::size_t i = 0; i < v; ++i) {
                if (input.z[i] > 0.0) pos_idx.push_back(i);
                else if (input.z[i] < 0.0) neg_idx.push_back(i);
                else { out.adjusted_pos[i] = 1.0; out.adjusted_neg[i] = 1.0; }
            }
            auto run_side = [&](const std::vector<std::size_t>& idx, std::vector<double>& adj,
                               std::vector<char>& rej, std::optional<double>& crit) {
                if (idx.empty()) return;
                std::vector<double> pv;
                pv.reserve(idx.size());
                for (std::size_t i : idx) pv.push_back(p2[i]);
                const auto res = run_method(pv, method, q);
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    adj[idx[k]] = res.adjusted_p[k];
                    rej[idx[k]] = res.rejected[k];
                }
                crit = res.critical_p;
            };
            run_side(pos_idx, out.adjusted_pos, out.rejected_pos, out.critical_p_pos);
            run_side(neg_idx, out.adjusted_neg, out.rejected_neg, out.critical_p_neg);
            for (std::size_t i = 0; i < v; ++i) {
                out.rejected_any[i] = out.rejected_pos[i] || out.rejected_neg[i];
            }
            fill_parametric(out, input, true);
            break;
        }
        case Strategy::CanonicalBB: {
            std::vector<double> pooled = input.p_one;
            const std::vector<double> comp = complement(input.p_one);
            pooled.insert(pooled.end(), comp.begin(), comp.end());
            std::vector<std::string> labels(v, "pos");
            labels.insert(labels.end(), v, "neg");
            const auto bb = selective::bb_procedure(
                fdr::PValueSet(pooled), selective::Partition(std::move(labels), {"pos", "neg"}),
                q, screening_level, to_second_stage(method));
            for (std::size_t i = 0; i < v; ++i) {
                out.adjusted_pos[i] = bb.adjusted_p[i];
                out.adjusted_neg[i] = bb.adjusted_p[v + i];
                out.rejected_pos[i] = bb.rejected[i];
                out.rejected_neg[i] = bb.rejected[v + i];
                out.rejected_any[i] = bb.rejected[i] || bb.rejected[v + i];
            }
            if (const auto& ss = bb.per_set.at("pos").second_stage) out.critical_p_pos = ss->critical_p;
            if (const auto& ss = bb.per_set.at("neg").second_stage) out.critical_p_neg = ss->critical_p;
            fill_parametric(out, input, false);
            break;
        }
        case Strategy::SplitTailsBB: {
            const std::vector<double> p2 = two_tailed(input.p_one);
            std::vector<std::size_t> idx;
            std::vector<double> pv;
            std::vector<std::string> labels;
            for (std::size_t i = 0; i < v; ++i) {
                if (input.z[i] > 0.0) { idx.push_back(i); pv.push_back(p2[i]); labels.push_back("pos"); }
                else if (input.z[i] < 0.0) { idx.push_back(i); pv.push_back(p2[i]); labels.push_back("neg"); }
                else { out.adjusted_pos[i] = 1.0; out.adjusted_neg[i] = 1.0; }
            }
            if (!idx.empty()) {
                const auto bb = selective::bb_procedure(
                    fdr::PValueSet(pv), selective::Partition(std::move(labels), {"pos", "neg"}),
                    q, screening_level, to_second_stage(method));
                for (std::size_t k = 0; k < idx.size(); ++k) {
                    const std::size_t i = idx[k];
                    if (input.z[i] > 0.0) {
                        out.adjusted_pos[i] = bb.adjusted_p[k];
                        out.rejected_pos[i] = bb.rejected[k];
                    } else {
                        out.adjusted_neg[i] = bb.adjusted_p[k];
                        out.rejected_neg[i] = bb.rejected[k];
                    }
                }
                if (const auto& ss = bb.per_set.at("pos").second_stage) out.critical_p_pos = ss->critical_p;
                if (const auto& ss = bb.per_set.at("neg").second_stage) out.critical_p_neg = ss->critical_p;
            }
            for (std::size_t i = 0; i < v; ++i) {
                out.rejected_any[i] = out.rejected_pos[i] || out.rejected_neg[i];
            }
            fill_parametric(out, input, true);
            break;
        }
    }
    finalize(out, input);
    return out;
}

std::pair<double, double> compute_thresholds(const DirectionalInput& input,
                                             const DirectionalOutcome& outcome)
{
    double t_pos = kInf;
    double t_neg = -kInf;
    for (std::size_t i = 0; i < input.size(); ++i) {
        if (outcome.rejected_pos[i]) t_pos = std::min(t_pos, input.z[i]);
        if (outcome.rejected_neg[i]) t_neg = std::max(t_neg, input.z[i]);
    }
    return {t_pos, t_neg};
}

std::pair<double, double> uncorrected_thresholds(double alpha, numerics::DegreesOfFreedom dof)
{
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::domain_error("uncorrected_thresholds: alpha must be in (0,1)");
    }
    return {numerics::t_inv_cdf(1.0 - alpha / 2.0, dof), numerics::t_inv_cdf(alpha / 2.0, dof)};
}

} // namespace fdrkit::directional
