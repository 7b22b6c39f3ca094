#include "fdrkit/selective.hpp"

#include <algorithm>
#include <stdexcept>

namespace fdrkit::selective {

Partition::Partition(std::vector<std::string> labels, std::vector<std::string> set_names)
    : labels_(std::move(labels))
    , set_names_(std::move(set_names))
{
    if (set_names_.empty()) {
        throw std::domain_error("Partition: no sets declared");
    }
    for (const auto& l : labels_) {
        if (std::find(set_names_.begin(), set_names_.end(), l) == set_names_.end()) {
            throw std::domain_error("Partition: label '" + l + "' not among declared sets");
        }
    }
}

Partition Partition::from_labels(std::vector<std::string> labels)
{
    std::vector<std::string> names;
    for (const auto& l : labels) {
        if (std::find(names.begin(), names.end(), l) == names.end()) {
            names.push_back(l);
        }
    }
    return Partition(std::move(labels), std::move(names));
}

std::vector<std::size_t> Partition::members(const std::string& set_name) const
{
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < labels_.size(); ++i) {
        if (labels_[i] == set_name) out.push_back(i);
    }
    return out;
}

bool simes_test(std::span<const double> p, double alpha)
{
    if (p.empty()) return false;
    std::vector<double> sorted(p.begin(), p.end());
    std::sort(sorted.begin(), sorted.end());
    const double v = static_cast<double>(sorted.size());
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        if (sorted[i] * v / static_cast<double>(i + 1) <= alpha) return true;
    }
    return false;
}

bool simes_test(const fdr::PValueSet& p, double alpha)
{
    return simes_test(std::span<const double>(p.values()), alpha);
}

bool BbOutcome::any_rejected() const
{
    return std::any_of(rejected.begin(), rejected.end(), [](char r) { return r != 0; });
}

BbOutcome bb_procedure(const fdr::PValueSet& p, const Partition& partition, double q,
                       double screening_level, SecondStage second_stage,
                       const ScreeningFn& screening)
{
    if (partition.labels().size() != p.size()) {
        throw std::domain_error("bb_procedure: partition does not cover the p-value set");
    }
    if (!(q > 0.0 && q < 1.0) || !(screening_level > 0.0 && screening_level < 1.0)) {
        throw std::domain_error("bb_procedure: levels must be in (0,1)");
    }
    const ScreeningFn screen = screening
        ? screening
        : [](std::span<const double> pv, double a) { return simes_test(pv, a); };

    BbOutcome out;
    out.S = static_cast<int>(partition.set_count());
    out.rejected.assign(p.size(), 0);
    out.adjusted_p.assign(p.size(), 1.0);

    // First stage: screen each set on its own p-values only.
    for (const auto& name : partition.set_names()) {
        SetOutcome so;
        so.members = partition.members(name);
        std::vector<double> pv;
        pv.reserve(so.members.size());
        for (std::size_t idx : so.members) pv.push_back(p.values()[idx]);
        so.selected = screen(pv, screening_level);
        if (so.selected) ++out.R;
        out.per_set.emplace(name, std::move(so));
    }

    if (out.R == 0) {
        out.q_prime = 0.0;
        return out;  // no discoveries anywhere
    }
    out.q_prime = q * static_cast<double>(out.R) / static_cast<double>(out.S);

    // Second stage: re-test each selected set at the modified level.
    for (auto& [name, so] : out.per_set) {
        if (!so.selected) continue;
        std::vector<double> pv;
        pv.reserve(so.members.size());
        for (std::size_t idx : so.members) pv.push_back(p.values()[idx]);
        fdr::PValueSet set_p(std::move(pv));
        fdr::FdrOutcome res = second_stage == SecondStage::BH
            ? fdr::bh_decide(set_p, out.q_prime)
            : fdr::bky_decide_fast(set_p, out.q_prime);
        for (std::size_t k = 0; k < so.members.size(); ++k) {
            out.rejected[so.members[k]] = res.rejected[k];
            out.adjusted_p[so.members[k]] = res.adjusted_p[k];
        }
        so.second_stage = std::move(res);
    }
    return out;
}

} // namespace fdrkit::selective
