#ifndef FDRKIT_FDR_HPP
#define FDRKIT_FDR_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fdrkit::fdr {

enum class Method { BH, BY, BKY, Sidak, Bonferroni };

std::string method_name(Method m);
std::optional<Method> method_from_name(const std::string& name);

/// A vector of p-values in their original order. All values must lie in
/// [0,1] and the set must be non-empty.
class PValueSet {
public:
    explicit PValueSet(std::vector<double> values);

    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }

    /// Stable permutation that sorts the values ascending. original
    /// position = order()[rank].
    const std::vector<std::size_t>& order() const { return order_; }

private:
    std::vector<double> values_;
    std::vector<std::size_t> order_;
};

/// Result of a multiple-testing procedure, reported in the original
/// order of the input p-values.
struct FdrOutcome {
    std::vector<char> rejected;        // per test, original order
    std::vector<double> adjusted_p;    // per test, original order, clipped at 1
    std::optional<double> critical_p;  // largest rejected uncorrected p
    double q = 0.0;
    Method method = Method::BH;

    bool any_rejected() const;
    std::size_t rejection_count() const;
};

/// Benjamini-Hochberg step-up procedure at level q.
FdrOutcome bh_decide(const PValueSet& p, double q);

/// Benjamini-Yekutieli: BH with the slope deflated by c(V) = sum 1/j,
/// valid under arbitrary dependence.
FdrOutcome by_decide(const PValueSet& p, double q);

/// Benjamini-Krieger-Yekutieli iterated adaptive procedure. Reference
/// implementation; quadratic in the number of tests.
FdrOutcome bky_decide(const PValueSet& p, double q);

/// Same outcome as bky_decide, computed with a single suffix scan over
/// j/p_(j) extrema; O(V log V) including the sort.
FdrOutcome bky_decide_fast(const PValueSet& p, double q);

/// Sidak familywise adjustment, 1 - (1-p)^V.
FdrOutcome sidak_adjust(const PValueSet& p, double q = 0.05);

/// Bonferroni familywise adjustment, min(1, p*V).
FdrOutcome bonferroni_adjust(const PValueSet& p, double q = 0.05);

/// Dispatch by method enum.
FdrOutcome decide(const PValueSet& p, Method method, double q);

/// c(V) = sum_{j=1}^{V} 1/j.
double by_constant(std::size_t v);

} // namespace fdrkit::fdr

#endif
