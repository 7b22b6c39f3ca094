#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "fdrkit/fdr.hpp"

using namespace fdrkit::fdr;

namespace {

// Published 17-value example used throughout as a worked fixture.
const std::vector<double> kSeventeen = {0.0026, 0.01, 0.014, 0.025, 0.042, 0.066,
                                        0.1,    0.12, 0.17,  0.28,  0.36,  0.524,
                                        0.61,   0.68, 0.78,  0.9,   0.96};

// Direct transcription of the step-up inequality, used as an oracle.
std::size_t step_up_oracle(std::vector<double> p, double q, double deflate)
{
    std::sort(p.begin(), p.end());
    const double v = static_cast<double>(p.size());
    std::size_t istar = 0;
    for (std::size_t i = 1; i <= p.size(); ++i) {
        if (p[i - 1] <= static_cast<double>(i) * q / (v * deflate)) istar = i;
    }
    return istar;
}

std::vector<double> random_pset(std::mt19937_64& gen, std::size_t n)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) x = unif(gen);
    return p;
}

} // namespace

TEST_CASE("seventeen-value fixture: counts at q = 0.20")
{
    const PValueSet p(kSeventeen);
    CHECK(bh_decide(p, 0.20).rejection_count() == 6);
    CHECK(bky_decide(p, 0.20).rejection_count() == 8);
    CHECK(bky_decide_fast(p, 0.20).rejection_count() == 8);
    CHECK(by_decide(p, 0.20).rejection_count() == 1);
    CHECK(*bh_decide(p, 0.20).critical_p == doctest::Approx(0.066));
}

TEST_CASE("seventeen-value fixture: adaptive adjusted values")
{
    // Frozen from an independent direct evaluation of the corrected-value
    // formula followed by the running maximum.
    const std::vector<double> expected = {
        0.044315, 0.07537,  0.07537,  0.089744, 0.113987, 0.141328,
        0.174603, 0.174603, 0.204819, 0.311111, 0.357955, 0.55042,
        0.601578, 0.607143, 0.709091, 1.0,      1.0};
    const auto out = bky_decide(PValueSet(kSeventeen), 0.20);
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(out.adjusted_p[i] == doctest::Approx(expected[i]).epsilon(1e-5));
    }
}

TEST_CASE("single test edge cases")
{
    const auto out = bky_decide(PValueSet({0.03}), 0.05);
    // corrected value solves p <= q/(2-q) for q
    CHECK(out.adjusted_p[0] == doctest::Approx(0.03 / 0.97).epsilon(1e-14));
    CHECK(out.rejected[0] == 1);
    CHECK(bh_decide(PValueSet({0.03}), 0.05).adjusted_p[0] == doctest::Approx(0.03));
    CHECK(bh_decide(PValueSet({0.8}), 0.05).any_rejected() == false);
}

TEST_CASE("harmonic deflation constant")
{
    CHECK(by_constant(1) == 1.0);
    CHECK(by_constant(4) == doctest::Approx(25.0 / 12.0).epsilon(1e-15));
    CHECK(by_constant(17) == doctest::Approx(3.439552522640758).epsilon(1e-14));
}

TEST_CASE("familywise adjustments")
{
    const PValueSet p({0.01, 0.2, 0.7, 0.04, 0.5});
    const auto sidak = sidak_adjust(p, 0.05);
    const auto bonf = bonferroni_adjust(p, 0.05);
    CHECK(sidak.adjusted_p[0] == doctest::Approx(0.04900995).epsilon(1e-6));
    CHECK(bonf.adjusted_p[0] == doctest::Approx(0.05).epsilon(1e-15));
    for (std::size_t i = 0; i < p.size(); ++i) {
        CHECK(sidak.adjusted_p[i] <= bonf.adjusted_p[i]);
    }
}

TEST_CASE("decisions equal thresholding of adjusted values")
{
    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> qdist(0.01, 0.3);
    std::uniform_int_distribution<std::size_t> ndist(1, 60);
    for (int trial = 0; trial < 1000; ++trial) {
        const PValueSet p(random_pset(gen, ndist(gen)));
        const double q = qdist(gen);
        for (auto m : {Method::BH, Method::BY, Method::BKY, Method::Sidak, Method::Bonferroni}) {
            const auto out = decide(p, m, q);
            for (std::size_t i = 0; i < p.size(); ++i) {
                CHECK(static_cast<bool>(out.rejected[i]) == (out.adjusted_p[i] <= q));
            }
        }
    }
}

TEST_CASE("step-up oracle agreement for BH and BY")
{
    std::mt19937_64 gen(77);
    std::uniform_int_distribution<std::size_t> ndist(1, 200);
    for (int trial = 0; trial < 300; ++trial) {
        const auto values = random_pset(gen, ndist(gen));
        const PValueSet p(values);
        CHECK(bh_decide(p, 0.1).rejection_count() == step_up_oracle(values, 0.1, 1.0));
        CHECK(by_decide(p, 0.1).rejection_count()
              == step_up_oracle(values, 0.1, by_constant(values.size())));
    }
}

TEST_CASE("fast adaptive path is identical to the reference")
{
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> qdist(0.01, 0.3);
    std::uniform_int_distribution<std::size_t> ndist(1, 400);
    for (int trial = 0; trial < 500; ++trial) {
        const PValueSet p(random_pset(gen, ndist(gen)));
        const double q = qdist(gen);
        const auto slow = bky_decide(p, q);
        const auto fast = bky_decide_fast(p, q);
        REQUIRE(slow.rejected == fast.rejected);
        for (std::size_t i = 0; i < p.size(); ++i) {
            CHECK(std::abs(slow.adjusted_p[i] - fast.adjusted_p[i]) <= 1e-12);
        }
    }
}

TEST_CASE("adjusted values are monotone in the sorted order")
{
    std::mt19937_64 gen(5150);
    for (int trial = 0; trial < 100; ++trial) {
        const PValueSet p(random_pset(gen, 50));
        for (auto m : {Method::BH, Method::BY, Method::BKY}) {
            const auto out = decide(p, m, 0.05);
            double prev = -1.0;
            for (std::size_t r = 0; r < p.size(); ++r) {
                const double a = out.adjusted_p[p.order()[r]];
                CHECK(a >= prev);
                prev = a;
            }
        }
    }
}

TEST_CASE("rejection set nesting across procedures")
{
    std::mt19937_64 gen(31337);
    for (int trial = 0; trial < 200; ++trial) {
        const PValueSet p(random_pset(gen, 80));
        const auto bh = bh_decide(p, 0.05);
        const auto by = by_decide(p, 0.05);
        const auto bky = bky_decide_fast(p, 0.05);
        for (std::size_t i = 0; i < p.size(); ++i) {
            // conservative under dependence: BY rejects a subset of BH
            if (by.rejected[i]) CHECK(bh.rejected[i]);
            // adaptive: BKY rejects a superset of BH
            if (bh.rejected[i]) CHECK(bky.rejected[i]);
        }
    }
}

TEST_CASE("degenerate p-values")
{
    const auto zeros = bky_decide_fast(PValueSet({0.0, 0.0, 0.5}), 0.05);
    CHECK(zeros.adjusted_p[0] == 0.0);
    CHECK(zeros.rejected[0] == 1);
    const auto ones = bky_decide_fast(PValueSet({1.0, 1.0}), 0.05);
    CHECK(ones.any_rejected() == false);
    CHECK(ones.adjusted_p[0] == 1.0);
    const auto mixed = bh_decide(PValueSet({0.0, 1.0}), 0.05);
    CHECK(mixed.rejected[0] == 1);
    CHECK(mixed.rejected[1] == 0);
}

TEST_CASE("input validation")
{
    CHECK_THROWS_AS(PValueSet({}), std::domain_error);
    CHECK_THROWS_AS(PValueSet({0.5, 1.2}), std::domain_error);
    CHECK_THROWS_AS(PValueSet({-0.1}), std::domain_error);
    const PValueSet p({0.5});
    CHECK_THROWS_AS(bh_decide(p, 0.0), std::domain_error);
    CHECK_THROWS_AS(bh_decide(p, 1.0), std::domain_error);
}

TEST_CASE("method names round-trip")
{
    for (auto m : {Method::BH, Method::BY, Method::BKY, Method::Sidak, Method::Bonferroni}) {
        CHECK(method_from_name(method_name(m)) == m);
    }
    CHECK(!method_from_name("nope").has_value());
}
