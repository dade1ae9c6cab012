#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <set>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "synd/cli.hpp"

namespace {

struct Result {
    int code = 0;
    std::string out, err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = synd::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

std::string d(const char* name) { return oracle::data(name); }

/// Runs the installed binary through the shell; the exit status comes from the process.
Result run_binary(const std::string& args) {
    Result r;
    const std::string cmd = std::string(SYND_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    if (!p)
        return {-1, "", ""};
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), p)) > 0)
        r.out.append(buf.data(), n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

}  // namespace

TEST(Cli, RepPrintsWord) {
    const auto r = run({"ans", "rep", d("astarbstar.dfa"), "5"});
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "bb\n");
}

TEST(Cli, ValInvertsRep) {
    const auto r = run({"ans", "val", d("astarbstar.dfa"), "aaabb"});
    EXPECT_EQ(r.code, 0);
    const auto back = run({"ans", "rep", d("astarbstar.dfa"), r.out.substr(0, r.out.size() - 1)});
    EXPECT_EQ(back.out, "aaabb\n");
}

TEST(Cli, DomainErrorExitsOne) {
    const auto r = run({"ans", "val", d("astarbstar.dfa"), "ba"});
    EXPECT_EQ(r.code, 1);
    EXPECT_EQ(r.err.rfind("NotInLanguage", 0), 0u);
}

TEST(Cli, EmptyPrefixPrintsNothing) {
    const auto r = run({"subst", "fixpoint", d("thue_morse.rules"), "--prefix", "0"});
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, FixpointPrefix) {
    const auto r = run({"subst", "fixpoint", d("thue_morse.rules"), "--prefix", "16"});
    EXPECT_EQ(r.out, "0110100110010110\n");
}

TEST(Cli, MalformedRulesReportLine) {
    const auto r = run({"subst", "fixpoint", d("malformed.rules"), "--prefix", "5"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("line 2"), std::string::npos);
}

TEST(Cli, UsageErrorExitsTwo) {
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"ans", "rep"}).code, 2);
    EXPECT_EQ(run({"bogus"}).code, 2);
}

TEST(Cli, BinaryExitCodes) {
    const auto ok = run_binary("ans rep " + d("astarbstar.dfa") + " 5");
    EXPECT_EQ(ok.code, 0);
    EXPECT_EQ(ok.out, "bb\n");
    EXPECT_EQ(run_binary("ans val " + d("astarbstar.dfa") + " ba").code, 1);
    EXPECT_EQ(run_binary("subst fixpoint " + d("malformed.rules")).code, 2);
}

TEST(Cli, JsonCarriesSchema) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {"ans", "rep", d("astarbstar.dfa"), "5", "--json"},
             {"growth", "analyze", d("tau.rules"), "--json"},
             {"gaps", "letter", d("thue_morse.rules"), "--target", "0", "--prefix", "1000", "--out", "json"},
             {"period", "detect", d("per01a.rules"), "--prefix", "1000", "--json"},
             {"cobham", "check", "--s1", d("per01a.rules"), "--s2", d("per01b.rules"), "--prefix", "2000", "--json"},
         }) {
        const auto r = run(args);
        ASSERT_EQ(r.code, 0) << args[0] << " " << args[1] << ": " << r.err;
        const auto j = nlohmann::json::parse(r.out);
        EXPECT_EQ(j.at("schema"), 1) << args[0] << " " << args[1];
    }
}

TEST(Cli, GrowthReportContents) {
    const auto j = nlohmann::json::parse(run({"growth", "analyze", d("tau.rules"), "--json"}).out);
    EXPECT_EQ(j.at("D"), 0);
    EXPECT_EQ(j.at("Theta").at("integer"), "3");
    EXPECT_EQ(j.at("A_max"), nlohmann::json::array({"a"}));
}

TEST(Cli, JsonIsDeterministic) {
    const std::vector<std::string> args{"cobham", "check", "--s1", d("per01a.rules"), "--s2",
                                        d("per01b.rules"), "--prefix", "5000", "--json"};
    const auto a = run(args), b = run(args);
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const auto g1 = run({"growth", "analyze", d("tau.rules"), "--json"});
    const auto g2 = run({"growth", "analyze", d("tau.rules"), "--json"});
    EXPECT_EQ(g1.out, g2.out);
}

TEST(Cli, GapCsv) {
    const auto r = run({"gaps", "letter", d("thue_morse.rules"), "--target", "0", "--prefix", "1000", "--samples", "4",
                        "--out", "csv"});
    EXPECT_EQ(r.out, "checkpoint,max_gap\n125,3\n250,3\n500,3\n1000,3\n");
}

TEST(Cli, EveryOperationHasASubcommand) {
    const auto paths = synd::cli::subcommand_paths();
    const std::set<std::string> available(paths.begin(), paths.end());
    for (const auto& [op, cmd] : synd::cli::operation_coverage())
        EXPECT_TRUE(available.count(cmd)) << op << " -> " << cmd;
}
