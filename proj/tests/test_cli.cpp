#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "cli.hpp"
#include "mocet/corpus.hpp"
#include "mocet/synthetic.hpp"

namespace fs = std::filesystem;
using mocet::cli::run;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args, const mocet::cli::EnvLookup& env = [](const std::string&) {
    return std::optional<std::string>{};
}) {
    args.insert(args.begin(), "mocet");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err, env);
    return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("mocet_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::create_directories(dir_);
        std::ofstream corpus(path("corpus.jsonl"));
        mocet::write_corpus(corpus, mocet::synthetic::two_cluster_corpus({}, 2026));
        write("protocol.json", R"({"scenario": "demo", "harm": {"weight": 2315, "occurrence_rate": 30},
            "steps": [{"id": "s1", "embedding": [1.5, 1.5, 1.5, 1.5, 1.5, 1.5, 1.5, 1.5]},
                      {"id": "s2", "category": "A"},
                      {"id": "s3", "p": 0.05}]})");
        write("fixed.json", R"({"scenario": "fixed", "harm": {"weight": 2315, "occurrence_rate": 30},
            "steps": [{"id": "s1", "p": 0.0082}]})");
        write("profile.json", R"({"groups": [{"n": 5, "p": 0.9}, {"n": 5, "p": 0.8}]})");
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string path(const std::string& name) const { return (dir_ / name).string(); }
    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name)) << text; }
    std::string read(const std::string& name) const {
        std::ifstream in(path(name));
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliTest, ScoreIsByteIdenticalAcrossRuns) {
    const std::vector<std::string> args{"score", "--corpus", path("corpus.jsonl"), "--protocol", path("protocol.json"),
                                        "--k", "20", "--trials", "100000", "--seed", "7"};
    const auto a = invoke(args);
    const auto b = invoke(args);
    ASSERT_EQ(a.code, 0) << a.err;
    EXPECT_EQ(a.out, b.out);
    const auto doc = nlohmann::json::parse(a.out);
    EXPECT_EQ(doc["run_config"]["command"], "score");
    EXPECT_EQ(doc["run_config"]["seed"], 7);
    EXPECT_EQ(doc["run_config"]["k"], 20);
    EXPECT_EQ(doc["report"]["steps"].size(), 3u);
    EXPECT_EQ(doc["report"]["steps"][0]["source"], "knn");
    EXPECT_EQ(doc["report"]["steps"][0]["neighbor_ids"].size(), 20u);
    EXPECT_EQ(doc["report"]["steps"][1]["source"], "category");
    EXPECT_EQ(doc["report"]["config"]["metric"], "euclidean");
}

TEST_F(CliTest, ThreadCountDoesNotChangeBytes) {
    const std::vector<std::string> base{"score", "--protocol", path("fixed.json"), "--seed", "3", "--trials", "50000"};
    auto threaded = base;
    threaded.insert(threaded.end(), {"--threads", "4"});
    EXPECT_EQ(invoke(base).out, invoke(threaded).out);
}

TEST_F(CliTest, ScoreWritesOnlyTheOutputPath) {
    const auto r = invoke({"score", "--protocol", path("fixed.json"), "--out", path("report.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    const auto doc = nlohmann::json::parse(read("report.json"));
    EXPECT_NEAR(doc["report"]["mocet"].get<double>(), 18.983, 1e-9);
    EXPECT_NEAR(doc["report"]["cumulative_mocet"].get<double>(), 569.49, 1e-9);
}

TEST_F(CliTest, CsvSummaryRow) {
    const auto r = invoke({"score", "--protocol", path("fixed.json"), "--format", "csv", "--seed", "9"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "scenario,e_y,mocet,cumulative_mocet,k,trials,seed\nfixed,0.0082,18.983,569.49,20,100000,9\n");
}

TEST_F(CliTest, SeedFallsBackToEnvironment) {
    auto env = [](const std::string& name) -> std::optional<std::string> {
        if (name == "MOCET_SEED") return "11";
        return std::nullopt;
    };
    const auto from_env = invoke({"score", "--protocol", path("fixed.json"), "--trials", "1000"}, env);
    const auto from_flag = invoke({"score", "--protocol", path("fixed.json"), "--trials", "1000", "--seed", "11"});
    ASSERT_EQ(from_env.code, 0);
    EXPECT_EQ(from_env.out, from_flag.out);
    // The flag wins over the environment.
    const auto both = invoke({"score", "--protocol", path("fixed.json"), "--trials", "1000", "--seed", "12"}, env);
    EXPECT_EQ(nlohmann::json::parse(both.out)["run_config"]["seed"], 12);

    auto bad = [](const std::string&) -> std::optional<std::string> { return "abc"; };
    EXPECT_EQ(invoke({"score", "--protocol", path("fixed.json")}, bad).code, 2);
}

TEST_F(CliTest, UsageErrorsExitTwo) {
    auto r = invoke({"score", "--corpus", path("corpus.jsonl")});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("kind=usage"), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"score", "--protocol", path("fixed.json"), "--metric", "manhattan"}).code, 2);
    EXPECT_EQ(invoke({"score", "--protocol", path("fixed.json"), "--k", "0"}).code, 2);
    EXPECT_EQ(invoke({"score", "--protocol", path("fixed.json"), "--trials", "0"}).code, 2);
    // Protocol with embedding steps but no corpus.
    EXPECT_EQ(invoke({"score", "--protocol", path("protocol.json")}).code, 2);
    EXPECT_EQ(invoke({"validate-corpus", "--corpus", path("corpus.jsonl"), "--format", "csv"}).code, 2);
}

TEST_F(CliTest, DataErrorsExitOne) {
    write("bad.jsonl", "{\"id\": \"a\", \"embedding\": [1, 2], \"outcome\": 1}\n{\"id\": \"b\", \"embedding\": [1], "
                       "\"outcome\": 0}\n");
    auto r = invoke({"inspect", "--corpus", path("bad.jsonl")});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.err.find("kind=dimension_mismatch line=2"), std::string::npos);
    EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);

    write("neg.json", R"({"scenario": "x", "harm": {"weight": -5, "occurrence_rate": 1}, "steps": [{"id": "s", "p": 1}]})");
    EXPECT_EQ(invoke({"score", "--protocol", path("neg.json")}).code, 1);
    EXPECT_EQ(invoke({"score", "--protocol", path("missing.json")}).code, 1);
    EXPECT_EQ(invoke({"score", "--corpus", path("corpus.jsonl"), "--protocol", path("protocol.json"), "--k", "500"}).code,
              1);
}

TEST_F(CliTest, ValidateCorpusEmitsOneDocumentPerK) {
    const auto r = invoke({"validate-corpus", "--corpus", path("corpus.jsonl"), "--k", "10,20,40"});
    ASSERT_EQ(r.code, 0) << r.err;
    std::istringstream lines(r.out);
    std::string line;
    std::vector<nlohmann::json> docs;
    while (std::getline(lines, line)) docs.push_back(nlohmann::json::parse(line));
    ASSERT_EQ(docs.size(), 3u);
    const int ks[] = {10, 20, 40};
    for (int i = 0; i < 3; ++i) {
        EXPECT_EQ(docs[i]["report"]["k"], ks[i]);
        EXPECT_LT(docs[i]["report"]["p_value_u"].get<double>(), 0.01);
        EXPECT_EQ(docs[i]["run_config"]["ks"], nlohmann::json::parse("[10, 20, 40]"));
    }
    EXPECT_EQ(invoke({"validate-corpus", "--corpus", path("corpus.jsonl"), "--k", "10,200"}).code, 1);
}

TEST_F(CliTest, ValidateCorpusPermutationCheck) {
    const auto r = invoke(
        {"validate-corpus", "--corpus", path("corpus.jsonl"), "--k", "20", "--permutations", "200", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["report"]["p_value_u"].get<double>(), 1.0 / 201.0, 1e-12);
    EXPECT_EQ(doc["report"]["permutations"], 200);
    const auto normal = invoke({"validate-corpus", "--corpus", path("corpus.jsonl"), "--k", "20", "--permutations", "0"});
    ASSERT_EQ(normal.code, 0) << normal.err;
    const auto ndoc = nlohmann::json::parse(normal.out);
    EXPECT_EQ(ndoc["report"]["permutations"], 0);
    EXPECT_EQ(ndoc["report"]["p_value_u"], ndoc["report"]["p_value_u_normal"]);
}

TEST_F(CliTest, ErrorReport) {
    const auto r = invoke({"error-report", "--profile", path("profile.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_NEAR(doc["report"]["exact_e_y"].get<double>(), 0.193491763, 1e-9);
    EXPECT_NEAR(doc["report"]["naive_approx"].get<double>(), 0.196874404, 1e-9);
    EXPECT_EQ(doc["run_config"]["command"], "error-report");
}

TEST_F(CliTest, InspectCorpusAndProtocol) {
    const auto r = invoke({"inspect", "--corpus", path("corpus.jsonl"), "--protocol", path("protocol.json")});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto doc = nlohmann::json::parse(r.out);
    EXPECT_EQ(doc["report"]["item_count"], 200);
    EXPECT_EQ(doc["report"]["dim"], 8);
    EXPECT_EQ(doc["report"]["category_counts"]["A"], 100);
    EXPECT_EQ(doc["report"]["protocol"]["embedding_steps"], 1);
}

TEST_F(CliTest, HelpExitsZero) {
    const auto r = invoke({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("score"), std::string::npos);
}
