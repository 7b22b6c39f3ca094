#ifndef FDRKIT_PVALUES_HPP
#define FDRKIT_PVALUES_HPP

#include <cstdint>

namespace fdrkit::pvalues {

enum class TailKind { continuous, discrete };

/// How a one-tailed p-value is turned into a two-tailed one. Discrete
/// (permutation-based) p-values carry the correction term C = 1/J, where
/// J is the number of permutations; continuous ones have C = 0.
struct TailConversionMode {
    TailKind kind = TailKind::continuous;
    std::int64_t permutation_count = 0;

    static TailConversionMode continuous() { return {TailKind::continuous, 0}; }
    static TailConversionMode discrete(std::int64_t permutations);

    double correction() const;
};

/// p_two = 2 * min(p_one, 1 - p_one + C), clipped at 1.
double one_to_two_tailed(double p_one, TailConversionMode mode);

/// p_two = 1 - |2 p_one - 1|, the continuous special case.
double symmetric_two_tailed(double p_one);

} // namespace fdrkit::pvalues

#endif
