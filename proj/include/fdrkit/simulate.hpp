#ifndef FDRKIT_SIMULATE_HPP
#define FDRKIT_SIMULATE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "fdrkit/directional.hpp"
#include "fdrkit/fdr.hpp"

namespace fdrkit::simulate {

/// Deterministic 64-bit generator (splitmix64). Chosen over the standard
/// engines so that streams are identical across platforms and standard
/// library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64();
    /// Uniform in [0,1) with 53 random bits.
    double next_uniform();
    /// Standard normal via Box-Muller; pairs are cached.
    double next_normal();
    /// Uniform integer in [0, bound).
    std::uint64_t next_below(std::uint64_t bound);

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct ScenarioSpec {
    std::size_t V = 2000;
    double frac_pos = 0.0;
    double frac_neg = 0.0;
    double rho = 0.0;           // pairwise correlation of the noise terms
    std::size_t realizations = 2000;
    double q = 0.05;
    std::uint64_t seed = 0;
    std::string name;           // "i".."x" for the canonical set

    void validate() const;
};

/// The ten standard evaluation scenarios: five signal layouts, each at
/// correlation 0 and 0.25. V, realizations, q, and seed are shared.
std::vector<ScenarioSpec> canonical_scenarios(std::size_t V, std::size_t realizations,
                                              double q, std::uint64_t seed);

/// Looks up one canonical scenario by its roman-numeral name.
ScenarioSpec canonical_scenario(const std::string& name, std::size_t V,
                                std::size_t realizations, double q, std::uint64_t seed);

struct Realization {
    std::vector<double> z;
    std::vector<char> truth_pos;
    std::vector<char> truth_neg;
};

/// Draws one set of statistics: equicorrelated standard normal noise
/// (single common factor) plus +3 / -3 shifts on randomly placed tests.
Realization generate_realization(const ScenarioSpec& spec, Rng& rng);

/// Per-realization counts for one direction view.
struct ViewTally {
    long long true_discoveries = 0;
    long long false_discoveries = 0;
    long long true_effects = 0;

    double fdp() const;    // false discoveries over all discoveries; 0/0 -> 0
    double power() const;  // true discoveries over true effects; 0/0 -> 0
};

struct RealizationTally {
    ViewTally both;  // any-direction rejections against any-direction truth
    ViewTally pos;   // positive rejections with z > 0 against positive truth
    ViewTally neg;   // negative rejections with z < 0 against negative truth
};

RealizationTally tally_realization(const directional::DirectionalOutcome& outcome,
                                   const std::vector<double>& z,
                                   const std::vector<char>& truth_pos,
                                   const std::vector<char>& truth_neg);

enum class View { Both, Positive, Negative };
std::string view_name(View v);

struct CellResult {
    fdr::Method method;
    directional::Strategy strategy;
    View view;
    double fdr_mean = 0.0;
    double fdr_ci_low = 0.0;
    double fdr_ci_high = 0.0;
    double power_mean = 0.0;
    double power_ci_low = 0.0;
    double power_ci_high = 0.0;
};

struct ScenarioReport {
    ScenarioSpec spec;
    std::vector<CellResult> cells;  // method-major, then strategy, then view

    const CellResult& cell(fdr::Method m, directional::Strategy s, View v) const;
};

/// 95% normal-approximation interval for a proportion, clipped to [0,1].
std::pair<double, double> wald_ci(double mean, std::size_t n);

/// Runs every (method, strategy) pair over the scenario's realizations
/// and averages per-realization proportions. Realizations use
/// independent substreams derived from the seed, so results do not
/// depend on the number of worker threads (capped by FDRKIT_THREADS).
ScenarioReport run_scenario(const ScenarioSpec& spec,
                            const std::vector<fdr::Method>& methods,
                            const std::vector<directional::Strategy>& strategies);

/// Thread cap from FDRKIT_THREADS, else hardware concurrency.
unsigned thread_count();

} // namespace fdrkit::simulate

#endif
