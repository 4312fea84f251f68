#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code;
    std::string out;
};

RunResult run(const std::string& args) {
    const std::string out_path = "cli_out.tmp";
    const std::string cmd = std::string(AFQ_CLI_PATH) + " " + args + " > " + out_path + " 2>&1";
    int status = std::system(cmd.c_str());
    std::ifstream in(out_path);
    std::stringstream ss;
    ss << in.rdbuf();
    std::remove(out_path.c_str());
    int code = -1;
    if (WIFEXITED(status)) code = WEXITSTATUS(status);
    return {code, ss.str()};
}

int count_lines(const std::string& s) {
    int n = 0;
    for (char c : s)
        if (c == '\n') ++n;
    return n;
}

}  // namespace

TEST_CASE("ideal metric reproduces the quoted output") {
    auto r = run("ideal metric --theta1 \"0;1000,(1)\" --theta2 \"0;1,(1)\" --depth 8");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2^-2 = 0.25\n");

    auto deep = run("ideal metric --theta1 \"0;1000,(1)\" --theta2 \"0;999,(1)\" --depth 1001");
    CHECK(deep.exit_code == 0);
    CHECK(deep.out.rfind("2^-1000 = ", 0) == 0);
}

TEST_CASE("farey level csv has the expected last row") {
    auto r = run("farey level 3 --format csv");
    CHECK(r.exit_code == 0);
    CHECK(count_lines(r.out) == 5);
    CHECK(r.out.find("4,1,1,1,1\n") != std::string::npos);
    CHECK(r.out.rfind("0,1,0,0,1\n", 0) == 0);
}

TEST_CASE("cf json carries terms and convergents as strings") {
    auto r = run("cf --rational 2/3 --depth 2 --json");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"terms\"") != std::string::npos);
    CHECK(r.out.find("\"2\"") != std::string::npos);
    auto p = run("cf --periodic \"0;(1)\" --depth 5");
    CHECK(p.exit_code == 0);
    CHECK(p.out.find("5: 5/8") != std::string::npos);
}

TEST_CASE("diagram subcommands emit json and dot") {
    auto r = run("diagram farey 2");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"levels\"") != std::string::npos);
    auto dot = run("diagram effros-shen \"0;(1)\" 3 --dot");
    CHECK(dot.exit_code == 0);
    CHECK(dot.out.find("digraph") != std::string::npos);
    auto q = run("diagram quotient --theta \"0;(1)\" 3");
    CHECK(q.exit_code == 0);
    CHECK(q.out.find("\"matrices\"") != std::string::npos);
}

TEST_CASE("theta ideal outputs") {
    auto beta = run("theta ideal --cf \"0;(1)\" --depth 3 --beta");
    CHECK(beta.exit_code == 0);
    CHECK(beta.out.find("3: dim 13, beta 1/13") != std::string::npos);
    auto tc = run("theta ideal --cf \"0;(1)\" --depth 2 --trace-coeffs");
    CHECK(tc.exit_code == 0);
    CHECK(tc.out.find("-1*theta + 1") != std::string::npos);
    auto blocks = run("theta ideal --cf \"0;(1)\" --depth 3 --blocks --json");
    CHECK(blocks.exit_code == 0);
    CHECK(blocks.out.find("[0,1,4]") != std::string::npos);
}

TEST_CASE("ideal enumerate consumes a diagram file") {
    {
        auto emit = run("diagram farey 2");
        std::ofstream f("cli_diagram.tmp");
        f << emit.out;
    }
    auto r = run("ideal enumerate --diagram cli_diagram.tmp --depth 2");
    std::remove("cli_diagram.tmp");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"levels\"") != std::string::npos);
}

TEST_CASE("qmetric mk reads chain and state files") {
    {
        std::ofstream f("cli_chain.tmp");
        f << R"({"blocks":[[1],[1,1]],"matrices":[[[1],[1]]],"trace":[0.5,0.5],"beta":["1/1","1/2"]})";
        std::ofstream p("cli_phi.tmp");
        p << R"({"weights":[1.0,0.0],"densities":[[[1.0]],[[1.0]]]})";
        std::ofstream q("cli_psi.tmp");
        q << R"({"weights":[0.0,1.0],"densities":[[[1.0]],[[1.0]]]})";
    }
    auto r = run("qmetric mk --chain cli_chain.tmp --phi cli_phi.tmp --psi cli_psi.tmp --json");
    std::remove("cli_chain.tmp");
    std::remove("cli_phi.tmp");
    std::remove("cli_psi.tmp");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("\"value\": 2.0") != std::string::npos);
}

TEST_CASE("exit codes: usage 2, domain errors 1") {
    CHECK(run("--definitely-not-a-flag").exit_code == 2);
    CHECK(run("farey level 0").exit_code == 1);
    CHECK(run("cf --rational 3/2").exit_code == 1);
}

TEST_CASE("data output is byte-identical across runs") {
    auto a = run("diagram farey 3");
    auto b = run("diagram farey 3");
    CHECK(a.out == b.out);
    auto c = run("theta ideal --cf \"0;2,(1)\" --depth 6 --trace-coeffs --json");
    auto d = run("theta ideal --cf \"0;2,(1)\" --depth 6 --trace-coeffs --json");
    CHECK(c.out == d.out);
}
