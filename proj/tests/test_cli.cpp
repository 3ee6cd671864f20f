#include <commgraph/cli.hpp>

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;
using commgraph::Json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = commgraph::cli::run(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

class TempDir : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() /
               ("commgraph_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    fs::path write(const std::string& name, const std::string& text) {
        const auto p = dir_ / name;
        std::ofstream(p, std::ios::binary) << text;
        return p;
    }

    fs::path dir_;
};

class EnvGuard {
public:
    EnvGuard(const char* name, const char* value) : name_(name) {
        if (const char* old = std::getenv(name)) old_ = old;
        ::setenv(name, value, 1);
    }
    ~EnvGuard() {
        if (old_) {
            ::setenv(name_, old_->c_str(), 1);
        } else {
            ::unsetenv(name_);
        }
    }

private:
    const char* name_;
    std::optional<std::string> old_;
};

}  // namespace

TEST(CliSimulate, DiameterTwoHistogram) {
    const auto r = run({"simulate", "--m", "7", "--r", "3", "--trials", "50", "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["histogram"].dump(), R"({"2":50})");
    EXPECT_EQ(j["trials"], 50);
    EXPECT_EQ(j["master_seed"], 1);
}

TEST(CliSimulate, AbelianTriangle) {
    const auto r = run({"simulate", "--m", "2", "--r", "0", "--trials", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(Json::parse(r.out)["histogram"].dump(), R"({"1":1})");
}

TEST(CliSimulate, MissingOptionIsUsageError) {
    const auto r = run({"simulate", "--r", "3"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("--m"), std::string::npos);
    EXPECT_NE(r.err.find("Usage"), std::string::npos);
    EXPECT_EQ(run({}).code, 2);
    EXPECT_EQ(run({"frobnicate"}).code, 2);
    EXPECT_EQ(run({"simulate", "--m", "7", "--r", "3", "--format", "xml"}).code, 2);
}

TEST(CliSimulate, CsvFormat) {
    const auto r = run({"simulate", "--m", "7", "--r", "6", "--trials", "5", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out, "diameter,count\ninf,5\n");
}

TEST(CliSimulate, ResourceGuardAndOverride) {
    const auto r = run({"simulate", "--m", "17", "--r", "3", "--trials", "1"});
    EXPECT_EQ(r.code, 3);
    EXPECT_NE(r.err.find("COMMGRAPH_MAX_M"), std::string::npos) << r.err;
    {
        EnvGuard env("COMMGRAPH_MAX_M", "6");
        EXPECT_EQ(run({"simulate", "--m", "7", "--r", "3", "--trials", "1"}).code, 3);
        EXPECT_EQ(run({"simulate", "--m", "6", "--r", "3", "--trials", "1"}).code, 0);
    }
    {
        EnvGuard env("COMMGRAPH_MAX_M", "abc");
        EXPECT_EQ(run({"simulate", "--m", "6", "--r", "3", "--trials", "1"}).code, 2);
    }
}

TEST_F(TempDir, SimulateOutputIndependentOfWorkers) {
    const auto a = dir_ / "a.json", b = dir_ / "b.json";
    const std::vector<std::string> base = {"simulate", "--m", "7", "--r", "5", "--trials", "80", "--seed", "3",
                                           "--records"};
    auto args = base;
    args.insert(args.end(), {"--workers", "1", "--out", a.string()});
    ASSERT_EQ(run(args).code, 0);
    args = base;
    args.insert(args.end(), {"--workers", "4", "--out", b.string()});
    ASSERT_EQ(run(args).code, 0);
    EXPECT_EQ(slurp(a), slurp(b));
    EXPECT_FALSE(slurp(a).empty());
}

TEST_F(TempDir, InspectDisconnectedPair) {
    const auto t = write("t.txt", "commtable v1\nm=2 r=1\n1,2: 1\n");
    const auto r = run({"inspect", "--table", t.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("disconnected, 3 components"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("center: trivial"), std::string::npos) << r.out;
}

TEST_F(TempDir, InspectAbelianIsComplete) {
    const auto t = write("t.txt", "commtable v1\nm=3 r=2\n1,2: 00\n1,3: 00\n2,3: 00\n");
    const auto r = run({"inspect", "--table", t.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_NE(r.out.find("connected, diameter 1"), std::string::npos) << r.out;
    EXPECT_NE(r.out.find("degree sequence: 6 6 6 6 6 6 6"), std::string::npos) << r.out;
}

TEST_F(TempDir, InspectJsonAndExports) {
    const auto t = write("t.txt", "commtable v1\nm=2 r=1\n1,2: 0\n");
    const auto dot = dir_ / "g.dot", edges = dir_ / "g.txt";
    const auto r = run({"inspect", "--table", t.string(), "--json", "--export-dot", dot.string(), "--export-edges",
                        edges.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["diameter"], 1);
    EXPECT_EQ(j["edges"], 3);
    EXPECT_EQ(slurp(edges), "1 2\n1 3\n2 3\n");
    EXPECT_NE(slurp(dot).find("graph commuting"), std::string::npos);
}

TEST_F(TempDir, InspectTruncatedFile) {
    const auto t = write("t.txt", "commtable v1\nm=3 r=1\n1,2: 1\n1,3: 0\n");
    const auto r = run({"inspect", "--table", t.string()});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("missing pair 2,3"), std::string::npos) << r.err;
    EXPECT_EQ(run({"inspect", "--table", (dir_ / "absent").string()}).code, 2);
}

TEST_F(TempDir, HuntWritesWitnessFiles) {
    const auto out = dir_ / "w.txt";
    const auto r = run({"hunt", "--m", "7", "--r", "4", "--min-diameter", "3", "--budget", "1000", "--seed", "1",
                        "--out", out.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto table = commgraph::parse_table(slurp(out));
    const auto side = Json::parse(slurp(out.string() + ".json"));
    EXPECT_GE(side["diameter"].get<int>(), 3);
    EXPECT_EQ(side["degree_sequence"].size(), 127U);
    // the sidecar's stream key regenerates the saved table
    commgraph::CounterRng rng(side["stream_key"].get<std::uint64_t>());
    EXPECT_EQ(commgraph::sample_table(7, 4, rng), table);
    // and inspecting it agrees
    const auto ins = run({"inspect", "--table", out.string(), "--json"});
    EXPECT_EQ(Json::parse(ins.out)["diameter"], side["diameter"]);
}

TEST(CliHunt, BudgetExhausted) {
    const auto r = run({"hunt", "--m", "3", "--r", "1", "--min-diameter", "10", "--budget", "20"});
    EXPECT_EQ(r.code, 1);
    EXPECT_NE(r.out.find("20 trials"), std::string::npos) << r.out;
}

TEST(CliGnp, Extremes) {
    const auto full = run({"gnp", "--n", "10", "--p", "1", "--trials", "1"});
    ASSERT_EQ(full.code, 0) << full.err;
    EXPECT_EQ(Json::parse(full.out)["histogram"].dump(), R"({"1":1})");
    const auto empty = run({"gnp", "--n", "100", "--p", "0", "--trials", "1"});
    ASSERT_EQ(empty.code, 0) << empty.err;
    EXPECT_EQ(Json::parse(empty.out)["histogram"].dump(), R"({"inf":1})");
}

TEST(CliGnp, ProbabilityFlagsAreExclusive) {
    EXPECT_EQ(run({"gnp", "--n", "10", "--p", "0.5", "--epsilon", "0.5"}).code, 2);
    EXPECT_EQ(run({"gnp", "--n", "10"}).code, 2);
    EXPECT_EQ(run({"gnp", "--n", "10", "--p", "1.5"}).code, 2);
}

TEST(CliGnp, EpsilonDiagnostics) {
    const auto r = run({"gnp", "--n", "200", "--epsilon", "0.55", "--trials", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = Json::parse(r.out);
    EXPECT_EQ(j["diagnostics"]["predicted_diameter"], 2);
    EXPECT_DOUBLE_EQ(j["diagnostics"]["moments"]["mu_exact"].get<double>(),
                     commgraph::expected_simple_paths(200, std::pow(200.0, -0.45), 2));
    std::vector<std::string> keys;
    for (auto it = j.begin(); it != j.end(); ++it) keys.push_back(it.key());
    EXPECT_TRUE(std::is_sorted(keys.begin(), keys.end()));
}

TEST(CliPlan, Examples) {
    const auto a = run({"plan", "--k", "3", "--delta", "0.05", "--m", "7"});
    ASSERT_EQ(a.code, 0) << a.err;
    const auto ja = Json::parse(a.out);
    EXPECT_EQ(ja["r"], 4);
    EXPECT_NEAR(ja["epsilon_n"].get<double>(), 0.4277, 1e-4);
    EXPECT_EQ(ja["valid"], true);

    const auto b = run({"plan", "--k", "2", "--delta", "0.05", "--m", "7", "--r", "3"});
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_NEAR(Json::parse(b.out)["epsilon_n"].get<double>(), 0.5708, 1e-4);

    const auto c = run({"plan", "--k", "2", "--delta", "1e-9", "--m", "20", "--r", "10"});
    ASSERT_EQ(c.code, 0) << c.err;
    EXPECT_EQ(Json::parse(c.out)["valid"], false);
}

TEST(CliPlan, DeltaOutOfRange) {
    const auto r = run({"plan", "--k", "2", "--delta", "0.3", "--m", "7"});
    EXPECT_EQ(r.code, 2);
    EXPECT_NE(r.err.find("delta"), std::string::npos) << r.err;
}
