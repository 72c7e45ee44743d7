#include <gtest/gtest.h>
#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using json = nlohmann::json;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + " " + std::string(TWOMODE_JCX_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[65536];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> footer;
};

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(item);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv c;
    std::stringstream ss(text);
    std::string line;
    bool first = true;
    while (std::getline(ss, line)) {
        if (line.rfind("# ", 0) == 0) {
            c.footer.push_back(line.substr(2));
        } else if (first) {
            c.header = split(line);
            first = false;
        } else {
            c.rows.push_back(split(line));
        }
    }
    return c;
}

std::string footer_value(const Csv& c, const std::string& key) {
    for (const auto& f : c.footer)
        if (f.rfind(key + "=", 0) == 0) return f.substr(key.size() + 1);
    return {};
}

std::filesystem::path temp_path(const std::string& name) {
    return std::filesystem::temp_directory_path() / ("twomode_jcx_test_" + std::to_string(::getpid()) + "_" + name);
}

}  // namespace

TEST(Cli, SpectrumDirac2p1Column) {
    const auto r = run("spectrum --case dirac2p1 --omega 0.1 --nmax 5 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    ASSERT_EQ(c.header, (std::vector<std::string>{"n_l", "m_n", "inner", "branch", "E", "kg"}));
    ASSERT_EQ(c.rows.size(), 12u);
    for (const auto& row : c.rows) {
        const int nl = std::stoi(row[0]);
        const double sgn = row[3] == "+" ? 1.0 : -1.0;
        EXPECT_NEAR(std::stod(row[4]), sgn * std::sqrt(1.0 + 0.4 * nl), 1e-12);
    }
}

TEST(Cli, EmptyGrid) {
    const auto r = run("spectrum --nmax -1 --format csv");
    EXPECT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    EXPECT_EQ(c.header.size(), 6u);
    EXPECT_TRUE(c.rows.empty());
    const auto j = json::parse(run("spectrum --nmax -1").out);
    EXPECT_TRUE(j["rows"].empty());
}

TEST(Cli, JsonAndCsvAgree) {
    const std::string args = "spectrum --model jc-jc --f-re 0.7 --g-im 1.3 --nmax 3 --mmax 2";
    const auto j = json::parse(run(args).out);
    EXPECT_EQ(j["schema_version"], 1);
    const auto c = parse_csv(run(args + " --format csv").out);
    ASSERT_EQ(j["rows"].size(), c.rows.size());
    for (std::size_t i = 0; i < c.rows.size(); ++i) {
        EXPECT_EQ(j["rows"][i]["E"].get<double>(), std::stod(c.rows[i][4]));
        EXPECT_EQ(j["rows"][i]["kg"].get<double>(), std::stod(c.rows[i][5]));
        EXPECT_EQ(j["rows"][i]["inner"].get<std::string>(), c.rows[i][2]);
    }
}

TEST(Cli, DiagonalizeMatchesAnalytic) {
    const auto r = run("diagonalize --cutoff 120 --sector -1,0,2 --count 5 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    ASSERT_EQ(c.rows.size(), 15u);
    for (const auto& row : c.rows) EXPECT_LE(std::stod(row[5]), 1e-9);
    EXPECT_EQ(run("diagonalize --cutoff 3").code, 2);
    EXPECT_EQ(run("diagonalize --f-re 1 --g-re 1").code, 2);
    EXPECT_EQ(run("diagonalize --sector 1,x").code, 2);
}

TEST(Cli, VerifyDefaultPasses) {
    const auto r = run("verify");
    ASSERT_EQ(r.code, 0);
    const auto j = json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_GE(j["records"].size(), 15u);
    for (const auto& rec : j["records"]) {
        EXPECT_EQ(rec["status"], "PASS") << rec["name"];
        EXPECT_FALSE(rec.contains("runtime_s"));
        EXPECT_LE(rec["residual"].get<double>(), rec["tolerance"].get<double>());
    }
}

TEST(Cli, VerifyDegenerateCouplingSkips) {
    const auto r = run("verify --model jc-ajc --f-re 1 --g-re 0 --g-im 1 --format csv");
    EXPECT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    int skipped = 0;
    for (const auto& row : c.rows)
        if (row[6] == "SKIPPED") {
            ++skipped;
            EXPECT_NE(row[7].find("degenerate"), std::string::npos);
        }
    EXPECT_GE(skipped, 5);
}

TEST(Cli, VerifyIsDeterministic) {
    const auto a = run("verify --seed 7");
    const auto b = run("verify --seed 7");
    EXPECT_EQ(a.out, b.out);
    EXPECT_EQ(a.out, run("verify --seed 7", "TWOMODE_JCX_THREADS=1").out);
    const auto t = json::parse(run("verify --model jc-jc --timing").out);
    EXPECT_TRUE(t["records"][0].contains("runtime_s"));
}

TEST(Cli, VerifyFailureExitCode) {
    // a short SU(1,1) cutoff cannot certify convergence
    const auto r = run("verify --model jc-ajc --cutoff 12");
    EXPECT_EQ(r.code, 1);
    const auto j = json::parse(r.out);
    EXPECT_FALSE(j["passed"].get<bool>());
}

TEST(Cli, WavefunctionGridAndNorm) {
    const auto r = run("wavefunction --nl 0 --mn 0 --grid-rho 100 --grid-phi 64 --format csv");
    ASSERT_EQ(r.code, 0);
    const auto c = parse_csv(r.out);
    EXPECT_EQ(c.header, (std::vector<std::string>{"rho", "phi", "re", "im", "abs2"}));
    EXPECT_EQ(c.rows.size(), 6400u);
    EXPECT_NEAR(std::stod(footer_value(c, "norm")), 1.0, 1e-6);
    EXPECT_EQ(r.out, run("wavefunction --nl 0 --mn 0 --grid-rho 100 --grid-phi 64 --format csv").out);
}

TEST(Cli, CoherentWavefunctionAtZeroZetaIsOscillator) {
    const auto a = parse_csv(run("wavefunction --nl 2 --mn 1 --zeta-re 0 --grid-rho 20 --grid-phi 8 --format csv").out);
    const auto b = parse_csv(run("wavefunction --nl 2 --mn 1 --grid-rho 20 --grid-phi 8 --format csv").out);
    ASSERT_EQ(a.rows.size(), b.rows.size());
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (int k = 0; k < 5; ++k) EXPECT_NEAR(std::stod(a.rows[i][k]), std::stod(b.rows[i][k]), 1e-12);
}

TEST(Cli, CoherentWavefunctionNorm) {
    const auto c = parse_csv(run("wavefunction --nl 1 --mn 1 --zeta-im 0.3 --grid-rho 120 --grid-phi 32 --format csv").out);
    EXPECT_NEAR(std::stod(footer_value(c, "norm")), 1.0, 1e-8);
    const auto d = parse_csv(run("wavefunction --closed --nl 1 --mn 1 --zeta-im 0.3 --grid-rho 120 --grid-phi 32 --format csv").out);
    EXPECT_NEAR(std::stod(footer_value(d, "norm")), 1.0, 1e-8);
}

TEST(Cli, WavefunctionSingularZeta) {
    EXPECT_EQ(run("wavefunction --closed").code, 2);
    EXPECT_EQ(run("wavefunction --closed --zeta-re 1").code, 2);
}

TEST(Cli, CoherentStateCoefficients) {
    const auto j = json::parse(run("coherent-state --algebra su2 --nl 1 --mn 2 --zeta-re 0.4").out);
    EXPECT_NEAR(j["norm"].get<double>(), 1.0, 1e-12);
    EXPECT_EQ(j["coefficients"].size(), 5u);
    const auto k = json::parse(run("coherent-state --nl 0 --mn 0 --zeta-im 0.5").out);
    // |<k, n|ζ>|² = (1-|ζ|²) |ζ|^{2n} for k = 1/2
    EXPECT_NEAR(k["coefficients"][0]["abs2"].get<double>(), 0.75, 1e-14);
    EXPECT_NEAR(k["coefficients"][3]["abs2"].get<double>(), 0.75 * std::pow(0.25, 3), 1e-14);
}

TEST(Cli, LimitsSlope) {
    const auto j = json::parse(run("limits --case coupled-osc --nl 1 --mn 1 --scales 1e4,1e5,1e6").out);
    EXPECT_NEAR(j["slope"].get<double>(), -1.0, 0.05);
    for (const auto& row : j["rows"])
        if (row["scale"].get<double>() >= 1e6) {
            EXPECT_LE(row["rel_error"].get<double>(), 1e-5);
        }
    EXPECT_EQ(run("limits --case dirac2p1").code, 2);
}

TEST(Cli, UsageErrors) {
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("spectrum --format xml").code, 2);
    EXPECT_EQ(run("spectrum --mc2 -1").code, 2);
    EXPECT_EQ(run("--help").code, 0);
}

TEST(Cli, ConfigFilePrecedence) {
    const auto cfg = temp_path("cfg.toml");
    {
        std::ofstream f(cfg);
        f << "[spectrum]\nnmax = 2\nf-re = 3.0\nformat = \"csv\"\n";
    }
    const auto a = parse_csv(run("--config " + cfg.string() + " spectrum").out);
    ASSERT_EQ(a.rows.size(), 6u);
    EXPECT_EQ(a.rows[0][4], "3");  // f = 3, g = 1: E² = 1 + 8
    const auto b = parse_csv(run("--config " + cfg.string() + " spectrum --nmax 0").out);
    EXPECT_EQ(b.rows.size(), 2u);
    std::filesystem::remove(cfg);
}

TEST(Cli, OutPath) {
    const auto out = temp_path("out.json");
    const auto r = run("spectrum --nmax 1 --out " + out.string());
    EXPECT_EQ(r.code, 0);
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(out);
    const auto j = json::parse(f);
    EXPECT_EQ(j["rows"].size(), 4u);
    std::filesystem::remove(out);
}
