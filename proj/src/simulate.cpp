#include "fdrkit/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

namespace fdrkit::simulate {

namespace {

std::uint64_t splitmix64(std::uint64_t& x)
{
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Substream seed for one realization: decorrelated from both the base
/// seed and neighboring indices.
std::uint64_t substream_seed(std::uint64_t seed, std::uint64_t index)
{
    std::uint64_t s = seed ^ (0xd1b54a32d192ed03ULL * (index + 1));
    return splitmix64(s);
}

} // namespace

std::uint64_t Rng::next_u64()
{
    return splitmix64(state_);
}

double Rng::next_uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::next_normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    double u1 = next_uniform();
    while (u1 == 0.0) u1 = next_uniform();
    const double u2 = next_uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
}

std::uint64_t Rng::next_below(std::uint64_t bound)
{
    // Rejection sampling keeps the draw unbiased and portable.
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t x;
    do {
        x = next_u64();
    } while (x >= limit);
    return x % bound;
}

void ScenarioSpec::validate() const
{
    if (V == 0 || realizations == 0) {
        throw std::domain_error("ScenarioSpec: V and realizations must be positive");
    }
    if (!(frac_pos >= 0.0 && frac_neg >= 0.0 && frac_pos + frac_neg <= 1.0)) {
        throw std::domain_error("ScenarioSpec: signal fractions must be nonnegative and sum to <= 1");
    }
    if (!(rho >= 0.0 && rho < 1.0)) {
        throw std::domain_error("ScenarioSpec: rho must be in [0,1)");
    }
    if (!(q > 0.0 && q < 1.0)) {
        throw std::domain_error("ScenarioSpec: q must be in (0,1)");
    }
}

std::vector<ScenarioSpec> canonical_scenarios(std::size_t V, std::size_t realizations,
                                              double q, std::uint64_t seed)
{
    struct Layout { const char* name; double fp; double fn; double rho; };
    static const Layout layouts[] = {
        {"i", 0.00, 0.00, 0.0},  {"ii", 0.25, 0.00, 0.0},  {"iii", 0.00, 0.25, 0.0},
        {"iv", 0.25, 0.25, 0.0}, {"v", 0.10, 0.40, 0.0},   {"vi", 0.00, 0.00, 0.25},
        {"vii", 0.25, 0.00, 0.25}, {"viii", 0.00, 0.25, 0.25}, {"ix", 0.25, 0.25, 0.25},
        {"x", 0.10, 0.40, 0.25},
    };
    std::vector<ScenarioSpec> out;
    std::uint64_t salt = 0;
    for (const auto& l : layouts) {
        ScenarioSpec s;
        s.V = V;
        s.frac_pos = l.fp;
        s.frac_neg = l.fn;
        s.rho = l.rho;
        s.realizations = realizations;
        s.q = q;
        // Distinct per-scenario seeds derived from the one the caller gave.
        std::uint64_t mix = seed ^ (0x9e3779b97f4a7c15ULL * ++salt);
        s.seed = splitmix64(mix);
        s.name = l.name;
        out.push_back(std::move(s));
    }
    return out;
}

ScenarioSpec canonical_scenario(const std::string& name, std::size_t V,
                                std::size_t realizations, double q, std::uint64_t seed)
{
    for (auto& s : canonical_scenarios(V, realizations, q, seed)) {
        if (s.name == name) return s;
    }
    throw std::domain_error("canonical_scenario: unknown scenario '" + name + "'");
}

Realization generate_realization(const ScenarioSpec& spec, Rng& rng)
{
    spec.validate();
    const std::size_t v = spec.V;
    const auto n_pos = static_cast<std::size_t>(std::ceil(spec.frac_pos * static_cast<double>(v)));
    const auto n_neg = static_cast<std::size_t>(std::ceil(spec.frac_neg * static_cast<double>(v)));

    std::vector<double> shift(v, 0.0);
    std::fill_n(shift.begin(), n_pos, 3.0);
    std::fill_n(shift.begin() + static_cast<std::ptrdiff_t>(n_pos), n_neg, -3.0);
    // Fisher-Yates with our own generator; std::shuffle is not portable.
    for (std::size_t i = v; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng.next_below(i));
        std::swap(shift[i - 1], shift[j]);
    }

    const double g = spec.rho > 0.0 ? rng.next_normal() : 0.0;
    const double w_common = std::sqrt(spec.rho);
    const double w_own = std::sqrt(1.0 - spec.rho);

    Realization out;
    out.z.resize(v);
    out.truth_pos.resize(v);
    out.truth_neg.resize(v);
    for (std::size_t i = 0; i < v; ++i) {
        out.z[i] = w_common * g + w_own * rng.next_normal() + shift[i];
        out.truth_pos[i] = shift[i] > 0.0;
        out.truth_neg[i] = shift[i] < 0.0;
    }
    return out;
}

double ViewTally::fdp() const
{
    const long long total = true_discoveries + false_discoveries;
    return total > 0 ? static_cast<double>(false_discoveries) / static_cast<double>(total) : 0.0;
}

double ViewTally::power() const
{
    return true_effects > 0
        ? static_cast<double>(true_discoveries) / static_cast<double>(true_effects)
        : 0.0;
}

RealizationTally tally_realization(const directional::DirectionalOutcome& outcome,
                                   const std::vector<double>& z,
                                   const std::vector<char>& truth_pos,
                                   const std::vector<char>& truth_neg)
{
    const std::size_t v = z.size();
    if (truth_pos.size() != v || truth_neg.size() != v || outcome.rejected_any.size() != v) {
        throw std::domain_error("tally_realization: length mismatch");
    }
    RealizationTally t;
    for (std::size_t i = 0; i < v; ++i) {
        const bool tp = truth_pos[i] != 0;
        const bool tn = truth_neg[i] != 0;
        if (tp) ++t.pos.true_effects;
        if (tn) ++t.neg.true_effects;
        if (tp || tn) ++t.both.true_effects;

        // A one-sided discovery needs the matching observed sign.
        if (outcome.rejected_pos[i] && z[i] > 0.0) {
            tp ? ++t.pos.true_discoveries : ++t.pos.false_discoveries;
        }
        if (outcome.rejected_neg[i] && z[i] < 0.0) {
            tn ? ++t.neg.true_discoveries : ++t.neg.false_discoveries;
        }
        if (outcome.rejected_any[i]) {
            (tp || tn) ? ++t.both.true_discoveries : ++t.both.false_discoveries;
        }
    }
    return t;
}

std::string view_name(View v)
{
    switch (v) {
        case View::Both: return "both";
        case View::Positive: return "positive";
        case View::Negative: return "negative";
    }
    return "?";
}

const CellResult& ScenarioReport::cell(fdr::Method m, directional::Strategy s, View v) const
{
    for (const auto& c : cells) {
        if (c.method == m && c.strategy == s && c.view == v) return c;
    }
    throw std::out_of_range("ScenarioReport::cell: combination not present");
}

std::pair<double, double> wald_ci(double mean, std::size_t n)
{
    const double half = 1.96 * std::sqrt(mean * (1.0 - mean) / static_cast<double>(n));
    return {std::max(0.0, mean - half), std::min(1.0, mean + half)};
}

unsigned thread_count()
{
    if (const char* env = std::getenv("FDRKIT_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<unsigned>(n);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

ScenarioReport run_scenario(const ScenarioSpec& spec,
                            const std::vector<fdr::Method>& methods,
                            const std::vector<directional::Strategy>& strategies)
{
    spec.validate();
    if (methods.empty() || strategies.empty()) {
        throw std::domain_error("run_scenario: methods and strategies must be nonempty");
    }
    const std::size_t combos = methods.size() * strategies.size();
    const std::size_t r_total = spec.realizations;

    // Per-realization proportions, indexed by realization so the final
    // reduction order is fixed regardless of how work was divided.
    struct ComboRow { double fdp[3]; double power[3]; };
    std::vector<ComboRow> rows(combos * r_total);

    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t r = begin; r < end; ++r) {
            Rng rng(substream_seed(spec.seed, r));
            const Realization real = generate_realization(spec, rng);
            const auto input = directional::DirectionalInput::from_statistics(real.z);
            std::size_t combo = 0;
            for (auto method : methods) {
                for (auto strategy : strategies) {
                    const auto outcome =
                        directional::apply_strategy(input, strategy, method, spec.q);
                    const auto tally =
                        tally_realization(outcome, real.z, real.truth_pos, real.truth_neg);
                    ComboRow& row = rows[combo * r_total + r];
                    const ViewTally* views[3] = {&tally.both, &tally.pos, &tally.neg};
                    for (int k = 0; k < 3; ++k) {
                        row.fdp[k] = views[k]->fdp();
                        row.power[k] = views[k]->power();
                    }
                    ++combo;
                }
            }
        }
    };

    const unsigned n_threads = std::min<unsigned>(
        thread_count(), static_cast<unsigned>(std::max<std::size_t>(r_total, 1)));
    if (n_threads <= 1) {
        worker(0, r_total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (r_total + n_threads - 1) / n_threads;
        for (unsigned t = 0; t < n_threads; ++t) {
            const std::size_t begin = t * chunk;
            const std::size_t end = std::min(r_total, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back(worker, begin, end);
        }
        for (auto& th : pool) th.join();
    }

    ScenarioReport report;
    report.spec = spec;
    std::size_t combo = 0;
    for (auto method : methods) {
        for (auto strategy : strategies) {
            for (int k = 0; k < 3; ++k) {
                double fdp_sum = 0.0;
                double power_sum = 0.0;
                for (std::size_t r = 0; r < r_total; ++r) {
                    const ComboRow& row = rows[combo * r_total + r];
                    fdp_sum += row.fdp[k];
                    power_sum += row.power[k];
                }
                CellResult cell;
                cell.method = method;
                cell.strategy = strategy;
                cell.view = static_cast<View>(k);
                cell.fdr_mean = fdp_sum / static_cast<double>(r_total);
                cell.power_mean = power_sum / static_cast<double>(r_total);
                std::tie(cell.fdr_ci_low, cell.fdr_ci_high) = wald_ci(cell.fdr_mean, r_total);
                std::tie(cell.power_ci_low, cell.power_ci_high) =
                    wald_ci(cell.power_mean, r_total);
                report.cells.push_back(cell);
            }
            ++combo;
        }
    }
    return report;
}

} // namespace fdrkit::simulate
