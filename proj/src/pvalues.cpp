#include "fdrkit/pvalues.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fdrkit::pvalues {

TailConversionMode TailConversionMode::discrete(std::int64_t permutations)
{
    if (permutations < 1) {
        throw std::domain_error("TailConversionMode: permutation count must be >= 1");
    }
    return {TailKind::discrete, permutations};
}

double TailConversionMode::correction() const
{
    return kind == TailKind::discrete ? 1.0 / static_cast<double>(permutation_count) : 0.0;
}

double one_to_two_tailed(double p_one, TailConversionMode mode)
{
    if (!(p_one >= 0.0 && p_one <= 1.0)) {
        throw std::domain_error("one_to_two_tailed: p out of [0,1]");
    }
    if (mode.kind == TailKind::continuous) {
        // Same value as the general formula with C = 0; this form keeps the
        // two operations bit-identical.
        return 1.0 - std::fabs(2.0 * p_one - 1.0);
    }
    const double two = 2.0 * std::min(p_one, 1.0 - p_one + mode.correction());
    return std::min(two, 1.0);
}

double symmetric_two_tailed(double p_one)
{
    if (!(p_one >= 0.0 && p_one <= 1.0)) {
        throw std::domain_error("symmetric_two_tailed: p out of [0,1]");
    }
    return 1.0 - std::fabs(2.0 * p_one - 1.0);
}

} // namespace fdrkit::pvalues
