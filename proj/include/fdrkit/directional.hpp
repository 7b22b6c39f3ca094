#ifndef FDRKIT_DIRECTIONAL_HPP
#define FDRKIT_DIRECTIONAL_HPP

#include <optional>
#include <string>
#include <vector>

#include "fdrkit/fdr.hpp"
#include "fdrkit/numerics.hpp"

namespace fdrkit::directional {

/// Signed statistics with their one-tailed p-values (probability of a
/// statistic at least as large). When dof is set the statistics follow a
/// Student's t-distribution, enabling parametric thresholds.
struct DirectionalInput {
    std::vector<double> z;
    std::vector<double> p_one;
    std::optional<numerics::DegreesOfFreedom> dof;

    /// Derives p_one from z via the normal (or t, when dof is given) cdf.
    static DirectionalInput from_statistics(std::vector<double> z,
                                            std::optional<numerics::DegreesOfFreedom> dof = {});

    std::size_t size() const { return z.size(); }
    void validate() const;
};

enum class Strategy { Canonical, Combined, TwoTailed, SplitTails, CanonicalBB, SplitTailsBB };

std::string strategy_name(Strategy s);
std::optional<Strategy> strategy_from_name(const std::string& name);
bool strategy_uses_bb(Strategy s);

/// Per-test decisions for the positive and negative directional
/// questions, plus statistic-space thresholds. A side with no rejection
/// reports the +inf / -inf sentinel threshold. Undefined adjusted values
/// (e.g. the wrong-sign side under split-tails) are NaN.
struct DirectionalOutcome {
    std::vector<double> adjusted_pos;
    std::vector<double> adjusted_neg;
    std::vector<char> rejected_pos;
    std::vector<char> rejected_neg;
    std::vector<char> rejected_any;  // both-sides view; ignores direction

    double t_pos = 0.0;  // empirical boundary: smallest z among positive rejections
    double t_neg = 0.0;  // largest (least negative) z among negative rejections
    std::optional<double> t_pos_param;  // from the critical p via the t inverse cdf
    std::optional<double> t_neg_param;
    std::optional<double> critical_p_pos;  // critical uncorrected one-tailed p per side
    std::optional<double> critical_p_neg;

    /// Set when some test is rejected in both directions (possible in
    /// principle for canonical/combined at extreme q).
    bool dual_direction_rejection = false;
};

/// Applies one of the six correction strategies. method must be BH or
/// BKY; screening_level is used only by the BB variants.
DirectionalOutcome apply_strategy(const DirectionalInput& input, Strategy strategy,
                                  fdr::Method method, double q, double screening_level = 0.05);

/// Empirical statistic-space thresholds for an outcome: the least
/// extreme rejected statistic per side, with infinity sentinels for
/// empty sides.
std::pair<double, double> compute_thresholds(const DirectionalInput& input,
                                             const DirectionalOutcome& outcome);

/// Thresholds for plain uncorrected two-tailed testing at level alpha,
/// e.g. +-1.982 at alpha=0.05 with nu=107.
std::pair<double, double> uncorrected_thresholds(double alpha, numerics::DegreesOfFreedom dof);

} // namespace fdrkit::directional

#endif
