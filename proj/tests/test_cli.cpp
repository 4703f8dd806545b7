#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>

#include "support.hpp"

using namespace bron;
using namespace bron::testing;
namespace fs = std::filesystem;

namespace {

int run(const std::string& args) {
    const std::string cmd = std::string(BRON_CLI) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("bron_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
        write_text_file(dir_ / "g.jsonl", export_canonical(signal_graph(1)));
    }
    void TearDown() override { fs::remove_all(dir_); }
    std::string p(const std::string& name) const { return (dir_ / name).string(); }
    fs::path dir_;
};

const std::string data(const std::string& f) { return std::string(BRON_TEST_DATA) + "/" + f; }

}  // namespace

TEST_F(Cli, UsageErrors) {
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("frobnicate"), 1);
    EXPECT_EQ(run("ingest --kind nope " + data("capec_min.xml") + " --out " + p("x")), 1);
    EXPECT_EQ(run("experiment --graph " + p("g.jsonl") + " --out " + p("o")), 1);
    EXPECT_EQ(run("experiment --name CWE-BOW-RBF_SVM --graph " + p("g.jsonl") + " --out " + p("o")), 1);
    EXPECT_EQ(run("--help"), 0);
    EXPECT_EQ(run("grid --help"), 0);
}

TEST_F(Cli, Ingest) {
    EXPECT_EQ(run("ingest --kind capec " + data("capec_min.xml") + " --out " + p("c.jsonl")), 0);
    const auto g = load_canonical_file(p("c.jsonl"));
    EXPECT_EQ(g.node_count(), 1u);
    EXPECT_EQ(run("ingest --kind canonical " + p("g.jsonl") + " --out " + p("again.jsonl")), 0);
    EXPECT_EQ(read_file(p("again.jsonl")), read_file(p("g.jsonl")));
    write_text_file(dir_ / "bad.xml", "<Attack_Pattern_Catalog><x>");
    EXPECT_EQ(run("ingest --kind capec " + p("bad.xml") + " --out " + p("c2.jsonl")), 2);
    EXPECT_EQ(run("ingest --kind nvd " + data("missing.json") + " --out " + p("c3.jsonl")), 1);
    EXPECT_EQ(run("ingest " + data("capec_min.xml") + " --out " + p("c4.jsonl")), 1);
}

TEST_F(Cli, IngestMixedKindsJoins) {
    EXPECT_EQ(run("ingest capec:" + data("capec_min.xml") + " cwe:" + data("cwe_min.xml") + " nvd:" +
                  data("nvd_min.json") + " --out " + p("m.jsonl")),
              0);
    const auto g = load_canonical_file(p("m.jsonl"));
    EXPECT_EQ(g.node_count(), 5u);
    EXPECT_EQ(g.edge_count(), 4u);
}

TEST_F(Cli, Analyze) {
    write_text_file(dir_ / "roots.txt", "1\n# comment\n2\n404\n");
    EXPECT_EQ(run("analyze top-cwe --graph " + p("g.jsonl") + " --roots " + p("roots.txt") + " --out " + p("r.csv")), 0);
    const auto text = read_file(p("r.csv"));
    EXPECT_EQ(text.rfind(kWeaknessCsvHeader, 0), 0u);
    EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 3);
    EXPECT_EQ(run("analyze connectivity --graph " + p("g.jsonl") + " --out " + p("c.csv")), 0);
    EXPECT_EQ(run("analyze ngrams --graph " + p("g.jsonl") + " --n 2 --out " + p("n.csv")), 0);
    write_text_file(dir_ / "froots.txt", "weakness:1\nweakness:2\n");
    EXPECT_EQ(run("analyze frequency --graph " + p("g.jsonl") + " --roots " + p("froots.txt") +
                  " --layer attack_pattern --top 3 --out " + p("f.csv")),
              0);
    EXPECT_EQ(run("analyze --graph " + p("g.jsonl")), 1);
}

TEST_F(Cli, PairsAreSeeded) {
    EXPECT_EQ(run("pairs --graph " + p("g.jsonl") + " --seed 4 --out " + p("a.csv")), 0);
    EXPECT_EQ(run("pairs --graph " + p("g.jsonl") + " --seed 4 --out " + p("b.csv")), 0);
    EXPECT_EQ(read_file(p("a.csv")), read_file(p("b.csv")));
}

TEST_F(Cli, ExperimentAndGrid) {
    EXPECT_EQ(run("experiment --name CWE-TACTIC-BOW-NB --graph " + p("g.jsonl") + " --trials 3 --seed 2 --out " + p("ex")),
              0);
    EXPECT_TRUE(fs::exists(dir_ / "ex" / "results.csv"));
    write_text_file(dir_ / "grid.json", R"([{"name": "CWE-BOW-NB", "trials": 4},
                                          {"name": "CAPEC-TECHNIQUE-BOW-KNN", "trials": 4}])");
    EXPECT_EQ(run("grid --config " + p("grid.json") + " --graph " + p("g.jsonl") + " --seed 3 --out " + p("res")), 0);
    for (const char* f : {"results.csv", "summary.csv", "error.svg", "auc.svg", "f1.svg", "significance.csv"})
        EXPECT_TRUE(fs::exists(dir_ / "res" / f)) << f;
    write_text_file(dir_ / "bad.json", R"([{"name": 3}])");
    EXPECT_EQ(run("grid --config " + p("bad.json") + " --graph " + p("g.jsonl") + " --out " + p("res2")), 2);
}
