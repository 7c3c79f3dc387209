#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct run_result {
    int code;
    std::string out;
};

run_result run(const std::string& args, const std::string& env = "")
{
    std::string cmd = env + (env.empty() ? "" : " ") + std::string(QUASIKIT_CLI) + " " + args + " 2>/dev/null";
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) out.append(buf, n);
    int status = pclose(p);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string sample(const std::string& name) { return std::string(QUASIKIT_SAMPLES) + "/" + name; }

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir = fs::temp_directory_path() / ("quasikit_cli_" + std::to_string(getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string write(const std::string& name, const std::string& text)
    {
        auto p = dir / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir;
};

} // namespace

TEST_F(Cli, Version)
{
    auto r = run("--version");
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("quasikit 0.1.0"), std::string::npos);
}

TEST_F(Cli, AnalyzeFactorial)
{
    auto r = run("seq analyze --spec " + sample("fact.json") + " --horizon 2000");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    for (const char* k : {"carleman", "root_c", "ratio_c"}) EXPECT_EQ(j["result"][k]["trend"], "diverging_trend");
    EXPECT_EQ(j["manifest"]["seed"], 0);
    EXPECT_EQ(j["manifest"]["input_digests"].size(), 1u);
}

TEST_F(Cli, GontSweep)
{
    auto r = run("gont check --nodes " + sample("nodes.json") + " --sweep 1000 --seed 7");
    ASSERT_EQ(r.code, 0);
    auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["result"]["sweep"]["ok"].get<bool>());
    EXPECT_EQ(j["result"]["sweep"]["seed"], 7);
}

TEST_F(Cli, ExitCodeMatrix)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("seq analyze").code, 2);
    EXPECT_EQ(run("seq analyze --spec " + sample("fact.json") + " --no-such-flag").code, 2);
    EXPECT_EQ(run("seq analyze --spec " + (dir / "missing.json").string()).code, 2);
    EXPECT_EQ(run("seq analyze --spec " + write("broken.json", "{\"family\": ")).code, 2);
    EXPECT_EQ(run("seq analyze --spec " + sample("bad_seq.json")).code, 2);
    EXPECT_EQ(run("lab envelope --fn " + sample("fn_log_bad.json")).code, 2);
    EXPECT_EQ(run("lab spacing --fn " + sample("fn_exp.json") + " --seq " + sample("ones.json") + " --nmax 3").code, 2);
    EXPECT_EQ(run("bang distance --vector " + sample("vector.json") + " --other " + sample("vector.json") + " --pset " +
                  write("p.json", "[0, 20]"))
                  .code,
              2);
    EXPECT_EQ(run("weight check --mu cubic").code, 2);

    // conditioning failure inside the jet engine is an internal numeric error
    auto fn = write("inv.json", R"({"expr": {"op": "div", "lhs": {"op": "const", "value": 1}, "rhs": {"op": "x"}},
                                     "domain": [1e-6, 1]})");
    EXPECT_EQ(run("lab envelope --fn " + fn + " --nmax 64").code, 1);

    EXPECT_EQ(run("bang norm --vector " + sample("vector.json")).code, 0);
    EXPECT_EQ(run("weight analyze --mu loglog --samples 4").code, 0);
}

TEST_F(Cli, OutputFilesAndManifestSidecar)
{
    auto out = (dir / "r.json").string();
    auto csv = (dir / "r.csv").string();
    ASSERT_EQ(run("seq regularize --spec " + sample("gevrey2.json") + " --out " + out + " --csv " + csv).code, 0);
    auto j = nlohmann::json::parse(slurp(out));
    EXPECT_FALSE(j["manifest"].contains("duration_ms"));
    auto side = nlohmann::json::parse(slurp(out + ".manifest.json"));
    EXPECT_TRUE(side.contains("duration_ms"));
    EXPECT_EQ(side["input_digests"], j["manifest"]["input_digests"]);
    EXPECT_EQ(slurp(csv).rfind("x,series,value\n0,logs_c,0\n", 0), 0u);
}

TEST_F(Cli, EmptyPlotDataIsHeaderOnly)
{
    auto csv = (dir / "n.csv").string();
    ASSERT_EQ(run("bang norm --vector " + sample("vector.json") + " --csv " + csv).code, 0);
    EXPECT_EQ(slurp(csv), "x,series,value\n");
}

TEST_F(Cli, ByteIdenticalReruns)
{
    const std::string cmds[] = {
        "seq analyze --spec " + sample("gevrey2.json"),
        "gont check --nodes " + sample("nodes.json") + " --sweep 200 --seed 3",
        "lab spacing --fn " + sample("fn_sin.json") + " --seq " + sample("ones.json") + " --nmax 20",
        "weight analyze --mu loglog --samples 16",
    };
    int i = 0;
    for (const auto& c : cmds) {
        auto a = (dir / ("a" + std::to_string(i) + ".json")).string();
        auto b = (dir / ("b" + std::to_string(i) + ".json")).string();
        ++i;
        ASSERT_EQ(run(c + " --out " + a + " --csv " + a + ".csv").code, 0);
        ASSERT_EQ(run(c + " --out " + b + " --csv " + b + ".csv").code, 0);
        auto ja = nlohmann::json::parse(slurp(a)), jb = nlohmann::json::parse(slurp(b));
        EXPECT_EQ(ja["result"].dump(), jb["result"].dump()) << c;
        EXPECT_EQ(slurp(a + ".csv"), slurp(b + ".csv")) << c;
    }
}

TEST_F(Cli, QuietLogging)
{
    auto out = (dir / "q.json").string();
    std::string cmd = "QUASIKIT_LOG=quiet " + std::string(QUASIKIT_CLI) + " seq make --spec " + sample("fact.json") +
                      " --out " + out + " 2>&1";
    FILE* p = popen(cmd.c_str(), "r");
    char buf[256];
    std::size_t n = fread(buf, 1, sizeof buf, p);
    EXPECT_EQ(pclose(p), 0);
    EXPECT_EQ(n, 0u);
}
