#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <vector>

#include "fdrkit/selective.hpp"

using namespace fdrkit;
using namespace fdrkit::selective;

namespace {

std::vector<double> random_pset(std::mt19937_64& gen, std::size_t n)
{
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> p(n);
    for (auto& x : p) x = unif(gen);
    return p;
}

} // namespace

TEST_CASE("partition construction and membership")
{
    const Partition part({"a", "b", "a", "c"}, {"a", "b", "c", "d"});
    CHECK(part.set_count() == 4);
    CHECK(part.members("a") == std::vector<std::size_t>{0, 2});
    CHECK(part.members("d").empty());
    CHECK_THROWS_AS(Partition({"a", "zz"}, {"a"}), std::domain_error);
    CHECK_THROWS_AS(Partition({"a"}, {}), std::domain_error);

    const auto inferred = Partition::from_labels({"x", "y", "x"});
    CHECK(inferred.set_count() == 2);
    CHECK(inferred.set_names() == std::vector<std::string>{"x", "y"});
}

TEST_CASE("global test agrees with step-up nonemptiness")
{
    std::mt19937_64 gen(808);
    for (int trial = 0; trial < 500; ++trial) {
        const fdr::PValueSet p(random_pset(gen, 1 + trial % 40));
        const bool simes = simes_test(p, 0.05);
        const bool bh_any = fdr::bh_decide(p, 0.05).any_rejected();
        CHECK(simes == bh_any);
    }
}

TEST_CASE("empty family is never selected")
{
    CHECK(simes_test(std::span<const double>{}, 0.05) == false);
}

TEST_CASE("no set surviving screening stops the procedure")
{
    const fdr::PValueSet p({0.4, 0.6, 0.7, 0.9});
    const auto out = bb_procedure(p, Partition({"a", "a", "b", "b"}, {"a", "b"}),
                                  0.05, 0.05, SecondStage::BH);
    CHECK(out.R == 0);
    CHECK(out.S == 2);
    CHECK(out.q_prime == 0.0);
    CHECK(out.any_rejected() == false);
    for (double a : out.adjusted_p) CHECK(a == 1.0);
}

TEST_CASE("all sets surviving reduces to per-set testing at q")
{
    const std::vector<double> values = {0.001, 0.02, 0.003, 0.01};
    const fdr::PValueSet p(values);
    const Partition part({"a", "a", "b", "b"}, {"a", "b"});
    const auto out = bb_procedure(p, part, 0.05, 0.05, SecondStage::BH);
    REQUIRE(out.R == 2);
    CHECK(out.q_prime == doctest::Approx(0.05));
    // identical to running the step-up inside each set independently
    const auto a = fdr::bh_decide(fdr::PValueSet({0.001, 0.02}), 0.05);
    const auto b = fdr::bh_decide(fdr::PValueSet({0.003, 0.01}), 0.05);
    CHECK(out.rejected[0] == a.rejected[0]);
    CHECK(out.rejected[1] == a.rejected[1]);
    CHECK(out.rejected[2] == b.rejected[0]);
    CHECK(out.rejected[3] == b.rejected[1]);
}

TEST_CASE("one of three sets surviving tests it at a third of q")
{
    const fdr::PValueSet p({0.001, 0.004, 0.3, 0.8, 0.9});
    const auto out = bb_procedure(p, Partition({"a", "a", "b", "b", "c"}, {"a", "b", "c"}),
                                  0.05, 0.05, SecondStage::BH);
    CHECK(out.R == 1);
    CHECK(out.S == 3);
    CHECK(out.q_prime == doctest::Approx(0.05 / 3.0).epsilon(1e-15));
    CHECK(out.rejected[0] == 1);
    CHECK(out.rejected[1] == 1);
    CHECK(out.rejected[2] == 0);
}

TEST_CASE("declared empty sets count toward S")
{
    const fdr::PValueSet p({0.001, 0.002});
    const auto out = bb_procedure(p, Partition({"a", "a"}, {"a", "b"}),
                                  0.05, 0.05, SecondStage::BH);
    CHECK(out.S == 2);
    CHECK(out.R == 1);
    CHECK(out.q_prime == doctest::Approx(0.025));
}

TEST_CASE("second stage results are local to each set")
{
    // Perturbing one set must not change decisions inside another
    // selected set (the property the two-stage scheme exists for).
    std::mt19937_64 gen(4242);
    for (int trial = 0; trial < 100; ++trial) {
        auto values = random_pset(gen, 20);
        for (int i = 0; i < 3; ++i) values[i] = values[i] * 0.001;       // set a: strong
        for (int i = 10; i < 13; ++i) values[i] = values[i] * 0.001;     // set b: strong
        std::vector<std::string> labels(20, "a");
        for (int i = 10; i < 20; ++i) labels[i] = "b";
        const Partition part(labels, {"a", "b"});

        const auto base = bb_procedure(fdr::PValueSet(values), part, 0.05, 0.05, SecondStage::BH);
        auto perturbed = values;
        for (int i = 13; i < 20; ++i) perturbed[i] = 1.0 - 0.5 * (1.0 - perturbed[i]);
        const auto moved =
            bb_procedure(fdr::PValueSet(perturbed), part, 0.05, 0.05, SecondStage::BH);
        if (base.R == moved.R) {
            for (int i = 0; i < 10; ++i) CHECK(base.rejected[i] == moved.rejected[i]);
        }
    }
}

TEST_CASE("custom screening function is honored")
{
    const fdr::PValueSet p({0.001, 0.9});
    const auto none = bb_procedure(p, Partition({"a", "b"}, {"a", "b"}), 0.05, 0.05,
                                   SecondStage::BH,
                                   [](std::span<const double>, double) { return false; });
    CHECK(none.R == 0);
    const auto all = bb_procedure(p, Partition({"a", "b"}, {"a", "b"}), 0.05, 0.05,
                                  SecondStage::BH,
                                  [](std::span<const double>, double) { return true; });
    CHECK(all.R == 2);
}

TEST_CASE("argument validation")
{
    const fdr::PValueSet p({0.5, 0.5});
    CHECK_THROWS_AS(bb_procedure(p, Partition({"a"}, {"a"}), 0.05, 0.05, SecondStage::BH),
                    std::domain_error);
    CHECK_THROWS_AS(
        bb_procedure(p, Partition({"a", "a"}, {"a"}), 0.0, 0.05, SecondStage::BH),
        std::domain_error);
    CHECK_THROWS_AS(
        bb_procedure(p, Partition({"a", "a"}, {"a"}), 0.05, 1.0, SecondStage::BH),
        std::domain_error);
}
