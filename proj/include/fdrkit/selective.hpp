#ifndef FDRKIT_SELECTIVE_HPP
#define FDRKIT_SELECTIVE_HPP

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdrkit/fdr.hpp"

namespace fdrkit::selective {

/// Disjoint assignment of test indices to named sets. The declared set
/// names define S; sets with no members are allowed and simply never
/// survive screening.
class Partition {
public:
    Partition(std::vector<std::string> labels, std::vector<std::string> set_names);

    /// Sets are the distinct labels, in order of first appearance.
    static Partition from_labels(std::vector<std::string> labels);

    const std::vector<std::string>& labels() const { return labels_; }
    const std::vector<std::string>& set_names() const { return set_names_; }
    std::size_t set_count() const { return set_names_.size(); }

    /// Member indices of one set, in input order.
    std::vector<std::size_t> members(const std::string& set_name) const;

private:
    std::vector<std::string> labels_;
    std::vector<std::string> set_names_;
};

/// Simes global test: true iff min_i p_(i) * V / i <= alpha. An empty
/// family is never selected.
bool simes_test(std::span<const double> p, double alpha);
bool simes_test(const fdr::PValueSet& p, double alpha);

/// Screening procedure for the first stage: any local rule mapping a
/// set's p-values and a level to keep/drop.
using ScreeningFn = std::function<bool(std::span<const double>, double)>;

enum class SecondStage { BH, BKY };

struct SetOutcome {
    bool selected = false;
    std::optional<fdr::FdrOutcome> second_stage;  // present only when selected
    std::vector<std::size_t> members;             // original indices
};

struct BbOutcome {
    int R = 0;                       // sets with >= 1 screening rejection
    int S = 0;                       // declared sets
    double q_prime = 0.0;            // q * R / S
    std::map<std::string, SetOutcome> per_set;
    std::vector<char> rejected;      // global, original order
    std::vector<double> adjusted_p;  // second-stage adjusted values; 1 outside selected sets

    bool any_rejected() const;
};

/// Benjamini-Bogomolov two-stage procedure: screen each set locally at
/// screening_level, count survivors R, then run the second stage inside
/// each survivor at the modified level q' = q*R/S.
BbOutcome bb_procedure(const fdr::PValueSet& p, const Partition& partition, double q,
                       double screening_level, SecondStage second_stage,
                       const ScreeningFn& screening = nullptr);

} // namespace fdrkit::selective

#endif
