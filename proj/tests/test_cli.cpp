#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#ifndef FDRKIT_CLI_PATH
#error "FDRKIT_CLI_PATH must point at the built binary"
#endif

namespace {

struct RunResult {
    int exit_code;
    std::string output;  // stdout only
};

RunResult run_cli(const std::string& args)
{
    const std::string cmd = std::string(FDRKIT_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    while (std::size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
    const int status = pclose(pipe);
    return {WEXITSTATUS(status), out};
}

std::string write_temp(const std::string& name, const std::string& content)
{
    const std::string path = std::string("/tmp/fdrkit_test_") + name;
    std::ofstream f(path);
    f << content;
    return path;
}

int count_flag(const std::string& csv, const std::string& column)
{
    std::istringstream ss(csv);
    std::string line;
    std::getline(ss, line);
    while (!line.empty() && line[0] == '#') std::getline(ss, line);
    std::istringstream header(line);
    std::string name;
    int col = -1;
    int idx = 0;
    while (std::getline(header, name, ',')) {
        if (name == column) col = idx;
        ++idx;
    }
    REQUIRE(col >= 0);
    int count = 0;
    while (std::getline(ss, line)) {
        std::istringstream row(line);
        std::string cell;
        for (int c = 0; c <= col; ++c) std::getline(row, cell, ',');
        if (cell == "1") ++count;
    }
    return count;
}

const char* kFig1 =
    "p\n0.0026\n0.01\n0.014\n0.025\n0.042\n0.066\n0.1\n0.12\n0.17\n0.28\n0.36\n"
    "0.524\n0.61\n0.68\n0.78\n0.9\n0.96\n";

} // namespace

TEST_CASE("adjust: step-up counts on the seventeen-value fixture")
{
    const auto path = write_temp("fig1.csv", kFig1);
    const auto bh = run_cli("adjust " + path + " --method bh --q 0.20");
    CHECK(bh.exit_code == 0);
    CHECK(count_flag(bh.output, "rejected") == 6);
    const auto bky = run_cli("adjust " + path + " --method bky --q 0.20");
    CHECK(count_flag(bky.output, "rejected") == 8);
}

TEST_CASE("adjust: single-row bonferroni is the identity")
{
    const auto path = write_temp("one.csv", "p\n0.03\n");
    const auto res = run_cli("adjust " + path + " --method bonferroni --q 0.05");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("0.03,1") != std::string::npos);
}

TEST_CASE("adjust: refuses already-adjusted input")
{
    const auto path = write_temp("double.csv", "p,adjusted_p\n0.03,0.03\n");
    const auto res = run_cli("adjust " + path + " --method bonferroni");
    CHECK(res.exit_code == 2);
}

TEST_CASE("adjust: malformed cell names the row")
{
    const auto path = write_temp("bad.csv", "p\n0.03\noops\n");
    const auto res = run_cli("adjust " + path + " --method bh");
    CHECK(res.exit_code == 2);
}

TEST_CASE("usage errors exit with 1")
{
    CHECK(run_cli("adjust").exit_code == 1);
    CHECK(run_cli("nonsense").exit_code == 1);
    CHECK(run_cli("simulate --scenario xi").exit_code == 1);
    const auto path = write_temp("one2.csv", "p\n0.03\n");
    CHECK(run_cli("adjust " + path + " --method nope").exit_code == 1);
}

TEST_CASE("strategy: sentinels when nothing survives")
{
    const auto path = write_temp("null_z.csv", "z\n0.3\n-0.2\n0.8\n-0.5\n0.1\n");
    const auto res = run_cli("strategy " + path + " --strategy splittails-bb --method bh");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("# t_pos +inf") != std::string::npos);
    CHECK(res.output.find("# t_neg -inf") != std::string::npos);
}

TEST_CASE("strategy: plain thresholds with 107 degrees of freedom")
{
    const auto path = write_temp("thr.csv", "z\n1.0\n");
    const auto res = run_cli("strategy " + path + " --uncorrected --q 0.05 --dof 107");
    CHECK(res.exit_code == 0);
    CHECK(res.output.find("1.98238") != std::string::npos);
    CHECK(res.output.find("-1.98238") != std::string::npos);
}

TEST_CASE("strategy: pooled correction lets strong negatives drag in positives")
{
    // Mostly strong negative signal plus a handful of modest positives:
    // pooling both maps relaxes the cutoff enough to reject positives
    // that a per-side correction at the same level would keep.
    std::ostringstream file;
    file << "z\n";
    for (int i = 0; i < 150; ++i) file << "-6.0\n";
    file << "2.4\n2.6\n2.2\n";
    for (int i = 0; i < 47; ++i) file << "0.1\n";
    const auto path = write_temp("negheavy.csv", file.str());
    const auto res = run_cli("strategy " + path + " --strategy combined --method bh --q 0.05");
    CHECK(res.exit_code == 0);
    CHECK(count_flag(res.output, "rejected_pos") > 0);
}

TEST_CASE("strategy: missing z column is a data error")
{
    const auto path = write_temp("noz.csv", "p\n0.01\n");
    const auto res = run_cli("strategy " + path + " --strategy splittails --method bh");
    CHECK(res.exit_code == 2);
}

TEST_CASE("bb: screening and level arithmetic")
{
    const auto quiet = write_temp("bb_quiet.csv", "p,set\n0.4,a\n0.6,a\n0.7,b\n0.9,b\n");
    const auto r0 = run_cli("bb " + quiet + " --q 0.05 --second-stage bh");
    CHECK(r0.exit_code == 0);
    CHECK(r0.output.find("# R 0") != std::string::npos);
    CHECK(count_flag(r0.output, "rejected") == 0);

    const auto both = write_temp("bb_both.csv", "p,set\n0.001,a\n0.02,a\n0.003,b\n0.01,b\n");
    const auto r2 = run_cli("bb " + both + " --q 0.05 --second-stage bh");
    CHECK(r2.output.find("# R 2") != std::string::npos);
    CHECK(r2.output.find("# q_prime 0.05") != std::string::npos);

    const auto third = write_temp("bb_three.csv",
                                  "p,set\n0.001,a\n0.004,a\n0.3,b\n0.8,b\n0.9,c\n");
    const auto r1 = run_cli("bb " + third + " --q 0.05 --second-stage bh");
    CHECK(r1.output.find("# q_prime 0.0166667") != std::string::npos);

    const auto noset = write_temp("bb_noset.csv", "p\n0.01\n");
    CHECK(run_cli("bb " + noset + " --q 0.05").exit_code == 2);
}

TEST_CASE("simulate: identical seeds give byte-identical output")
{
    const std::string args =
        "simulate --scenario i --method bh --strategy twotailed --seed 42 --scale desk";
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output.find("i,bh,twotailed,both") != std::string::npos);
}
