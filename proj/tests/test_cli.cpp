#include <gtest/gtest.h>

#include <pwlab/cli.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace pwlab;

namespace {

struct Outcome {
    int code = -1;
    std::string out;
    std::string err;
};

Outcome invoke(std::vector<std::string> args)
{
    args.insert(args.begin(), "pwlab");
    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    std::ostringstream out, err;
    Outcome o;
    o.code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    o.out = out.str();
    o.err = err.str();
    return o;
}

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

class CliTest : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = std::filesystem::temp_directory_path() / ("pwlab_cli_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
        std::filesystem::create_directories(dir);
    }
    void TearDown() override { std::filesystem::remove_all(dir); }

    std::filesystem::path dir;
};

} // namespace

TEST_F(CliTest, OmegaLensValue)
{
    const auto o = invoke({"omega", "--body", "ball2", "--point", "1,0"});
    EXPECT_EQ(o.code, 0);
    EXPECT_EQ(o.out, "1.228370\n");
}

TEST_F(CliTest, BuiltinBodies)
{
    EXPECT_EQ(invoke({"omega", "--body", "square", "--point", "1,1"}).out, "1.000000\n");
    EXPECT_EQ(invoke({"omega", "--body", "cube", "--point", "1,1,1"}).out, "1.000000\n");
    EXPECT_EQ(invoke({"omega", "--body", "halfline-model", "--point", "0.5"}).out, "0.500000\n");
    EXPECT_EQ(invoke({"omega", "--body", "triangle", "--point", "0.5,0.5"}).out, "0.250000\n");
    EXPECT_EQ(invoke({"omega", "--body", "ball3", "--point", "0,0,0"}).out, "4.188790\n");
    // T(1,1) cap ((0,1) - T(1,1)) = {|x| < min(y, 1 - y)}
    EXPECT_EQ(invoke({"omega", "--body", "pyramid(1,1)", "--point", "0,1"}).out, "0.500000\n");
    EXPECT_EQ(invoke({"omega", "--body", "pyramid(1,x)", "--point", "0,0"}).code, 2);
}

TEST_F(CliTest, UsageErrors)
{
    EXPECT_EQ(invoke({}).code, 2);
    EXPECT_EQ(invoke({"frobnicate"}).code, 2);
    EXPECT_EQ(invoke({"omega", "--body", "ball2"}).code, 2);
    EXPECT_EQ(invoke({"omega", "--body", "nosuchbody", "--point", "1,0"}).code, 2);
    EXPECT_EQ(invoke({"omega", "--body", "ball2", "--point", "1,0,0"}).code, 2);
    EXPECT_EQ(invoke({"verify", "--suite", "nosuch"}).code, 2);
    EXPECT_EQ(invoke({"hardy", "--family", "nosuch"}).code, 2);
    const auto bad = dir / "bad.json";
    std::ofstream(bad) << "{\"dim\": 2, \"vertices\": [[0, 0], [1]]}";
    const auto o = invoke({"omega", "--body", bad.string(), "--point", "1,0"});
    EXPECT_EQ(o.code, 2);
    EXPECT_NE(o.err.find("malformed"), std::string::npos);
    std::ofstream(dir / "junk.json") << "{not json";
    EXPECT_EQ(invoke({"simplicial", "--poly", (dir / "junk.json").string(), "--eps", "0.1"}).code, 2);
    EXPECT_EQ(invoke({"--help"}).code, 0);
}

TEST_F(CliTest, BodyFileMatchesBuiltin)
{
    const auto file = dir / "tri.json";
    std::ofstream(file) << "{\"dim\": 2, \"vertices\": [[0, 0], [1, 0], [0, 1]]}";
    const auto a = invoke({"omega", "--body", file.string(), "--point", "0.4,0.3"});
    const auto b = invoke({"omega", "--body", "triangle", "--point", "0.4,0.3"});
    EXPECT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
}

TEST_F(CliTest, VerifyOmegaSuite)
{
    const auto o = invoke({"verify", "--suite", "omega"});
    EXPECT_EQ(o.code, 0) << o.out;
    EXPECT_EQ(o.out.find("FAIL"), std::string::npos);
}

TEST_F(CliTest, NehariSweepReportIsReproducible)
{
    const auto cal = dir / "cal.json";
    ASSERT_EQ(invoke({"calibrate", "--out", cal.string()}).code, 0);
    const auto report = dir / "report.json";
    const auto csv = dir / "report.csv";
    const std::vector<std::string> args{"nehari-sweep", "--p", "6",          "--eps",  "0.4,0.2,0.1,0.05", "--samples", "50000", "--orthogonal-grid",
                                        "30",           "--calibration", cal.string(), "--out", report.string(), "--csv", csv.string()};
    const auto o = invoke(args);
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = json::parse(slurp(report));
    EXPECT_GT(j["result"]["slope"].get<double>(), 0.0);
    EXPECT_EQ(j["result"]["rows"].size(), 4u);
    EXPECT_EQ(j["config"]["seed"].get<std::uint64_t>(), 1u);
    EXPECT_TRUE(j.contains("calibration"));
    EXPECT_EQ(j["calibration"]["C"].get<double>(), json::parse(slurp(cal))["calibration"]["C"].get<double>());
    EXPECT_NE(slurp(csv).find("eps,N,"), std::string::npos);
    const std::string first = slurp(report);
    ASSERT_EQ(invoke(args).code, 0);
    EXPECT_EQ(slurp(report), first);
}

TEST_F(CliTest, HardyFamilies)
{
    const auto out = dir / "h.json";
    const auto tent = invoke({"hardy", "--body", "square", "--family", "tent_product", "--out", out.string()});
    ASSERT_EQ(tent.code, 0);
    EXPECT_NEAR(json::parse(slurp(out))["result"][0]["ratio"].get<double>(), 4.0, 0.04);
    const auto corner = invoke({"hardy", "--body", "square", "--d", "1.5", "--family", "corner_bumps", "--out", out.string()});
    ASSERT_EQ(corner.code, 0);
    EXPECT_NEAR(json::parse(slurp(out))["result"][0]["report"]["fit"]["slope"].get<double>(), -0.5, 0.15);
    const auto half = invoke({"hardy", "--family", "halfline_product", "--trials", "30", "--seed", "4", "--out", out.string()});
    ASSERT_EQ(half.code, 0);
    EXPECT_TRUE(json::parse(slurp(out))["result"]["bound_holds"].get<bool>());
}

TEST_F(CliTest, SimplicialReport)
{
    const auto out = dir / "approx.json";
    const auto o = invoke({"simplicial", "--poly", "pyramid(1,1.5,3)", "--eps", "0.2,0.1,0.05", "--recenter", "--out", out.string()});
    ASSERT_EQ(o.code, 0) << o.err;
    const auto j = json::parse(slurp(out));
    const auto& approx = j["result"]["approximations"];
    ASSERT_EQ(approx.size(), 3u);
    for (const auto& a : approx) {
        EXPECT_TRUE(a["checks"]["contains_P"].get<bool>());
        EXPECT_TRUE(a["checks"]["simplicial"].get<bool>());
        EXPECT_EQ(a["certificates"].size(), 5u);
        EXPECT_FALSE(a["facets"].empty());
    }
    EXPECT_TRUE(j["result"]["dual"]["dual_simple"].get<bool>());
    // without recentering the pyramid has the origin on its boundary
    EXPECT_EQ(invoke({"simplicial", "--poly", "pyramid(1,1.5,3)", "--eps", "0.1"}).code, 1);
}
