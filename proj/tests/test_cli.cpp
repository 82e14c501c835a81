#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

fs::path scratch_dir() {
    static const fs::path dir = [] {
        auto d = fs::temp_directory_path() / ("nonfrac_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

RunResult run(const std::string& args) {
    const fs::path err_file = scratch_dir() / "stderr.txt";
    const std::string cmd = std::string("\"") + NONFRAC_CLI_PATH + "\" " + args + " 2>\"" + err_file.string() + "\"";
    RunResult r;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n = 0;
    while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = ::pclose(pipe);
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
}

std::vector<std::string> lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) out.push_back(line);
    return out;
}

std::string write_file(const std::string& name, const std::string& content) {
    const fs::path p = scratch_dir() / name;
    std::ofstream(p) << content;
    return p.string();
}

}  // namespace

TEST(Cli, SimulateWritesOneRowPerObservation) {
    const auto r = run("simulate --a 0.2 --b 1.6 --length 1024 --seed 7");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 1024u + 2u);
    EXPECT_EQ(rows[0].rfind("# simulate process=csa a=0.2 b=1.6", 0), 0u);
    EXPECT_EQ(rows[1], "x");
}

TEST(Cli, SimulateIsByteIdenticalAcrossRuns) {
    const auto out1 = (scratch_dir() / "sim1.csv").string();
    const auto out2 = (scratch_dir() / "sim2.csv").string();
    ASSERT_EQ(run("simulate --length 500 --seed 11 --out " + out1).exit_code, 0);
    ASSERT_EQ(run("simulate --length 500 --seed 11 --out " + out2).exit_code, 0);
    EXPECT_EQ(slurp(out1), slurp(out2));
    EXPECT_NE(slurp(out1), run("simulate --length 500 --seed 12").out);
}

TEST(Cli, SimulateFracAndNaive) {
    const auto f = run("simulate --process frac --d -0.3 --length 100");
    ASSERT_EQ(f.exit_code, 0) << f.err;
    EXPECT_EQ(lines(f.out).size(), 102u);
    const auto n = run("simulate --method naive --length 50 --units 20 --burnin 10");
    ASSERT_EQ(n.exit_code, 0) << n.err;
    EXPECT_NE(lines(n.out)[0].find("units=20 burnin=10"), std::string::npos);
}

TEST(Cli, InvalidParameterIsUsageError) {
    const auto r = run("simulate --a 0.2 --b 0.5 --length 10");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("b > 1"), std::string::npos) << r.err;
    EXPECT_TRUE(r.out.empty());
}

TEST(Cli, UnknownOptionIsUsageError) {
    EXPECT_EQ(run("simulate --frobnicate 3").exit_code, 2);
    EXPECT_EQ(run("simulate --method slow").exit_code, 2);
}

TEST(Cli, ForecastOfZerosIsZero) {
    std::string zeros = "x\n";
    for (int i = 0; i < 50; ++i) zeros += "0\n";
    const auto in = write_file("zeros.csv", zeros);
    const auto r = run("forecast --in " + in + " --horizon 3");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 5u);
    EXPECT_EQ(rows[1], "h,forecast");
    EXPECT_EQ(rows[2], "1,0");
    EXPECT_EQ(rows[4], "3,0");
}

TEST(Cli, ForecastRoundTripReportsTinyReconstructionError) {
    const auto series = (scratch_dir() / "series.csv").string();
    ASSERT_EQ(run("simulate --a 0.5 --b 1.6 --length 800 --seed 3 --out " + series).exit_code, 0);
    const auto r = run("forecast --in " + series + " --a 0.5 --b 1.6 --horizon 10");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto header = lines(r.out)[0];
    const auto pos = header.find("reconstruction_error=");
    ASSERT_NE(pos, std::string::npos);
    EXPECT_LT(std::stod(header.substr(pos + 21)), 1e-8);
    EXPECT_EQ(lines(r.out).size(), 12u);
}

TEST(Cli, ForecastRejectsZeroHorizonAndBadInput) {
    const auto in = write_file("short.csv", "1\n2\n3\n");
    EXPECT_EQ(run("forecast --in " + in + " --horizon 0").exit_code, 2);
    const auto bad = write_file("bad.csv", "x\n1.0\n2.0\nabc\n");
    const auto r = run("forecast --in " + bad + " --horizon 1");
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("bad.csv:4"), std::string::npos) << r.err;
    EXPECT_EQ(run("forecast --horizon 1").exit_code, 2);
}

TEST(Cli, AcfStartsAtOne) {
    const auto r = run("acf --a 0.2 --b 1.6 --max-lag 5");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 8u);
    EXPECT_EQ(rows[1], "lag,acf");
    EXPECT_EQ(rows[2], "0,1");
}

TEST(Cli, SpectrumAtZeroAndPeriodogram) {
    const auto r = run("spectrum --a 1 --b 2.5");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    EXPECT_EQ(lines(r.out).size(), 3u);
    EXPECT_EQ(run("spectrum --a 1 --b 1.5").exit_code, 2);
    const auto series = (scratch_dir() / "pg.csv").string();
    ASSERT_EQ(run("simulate --length 64 --out " + series).exit_code, 0);
    const auto pg = run("spectrum --in " + series);
    ASSERT_EQ(pg.exit_code, 0) << pg.err;
    EXPECT_EQ(lines(pg.out).size(), 2u + 31u);
}

TEST(Cli, GphOnSimulatedSeries) {
    const auto series = (scratch_dir() / "gph.csv").string();
    ASSERT_EQ(run("simulate --process frac --d 0.3 --length 4096 --out " + series).exit_code, 0);
    const auto r = run("gph --in " + series);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[1], "d_hat,std_error,bandwidth");
    EXPECT_NE(rows[2].find(",64"), std::string::npos);
    EXPECT_EQ(run("gph --in " + series + " --bandwidth 2").exit_code, 2);
}

TEST(Cli, FitModels) {
    const auto ar = run("fit --a 0.1 --b 1.8 --model ar --order 1");
    ASSERT_EQ(ar.exit_code, 0) << ar.err;
    EXPECT_EQ(lines(ar.out)[2].rfind("ar,1.08", 0), 0u);
    const auto fr = run("fit --a 0.1 --b 1.8 --model arfima");
    ASSERT_EQ(fr.exit_code, 0) << fr.err;
    EXPECT_EQ(run("fit --a 0.1 --b 2.5 --model frac").exit_code, 2);
}

TEST(Cli, MatchFindsArgmin) {
    const auto r = run("match --d 0.2 --k 2");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto row = lines(r.out)[2];
    EXPECT_NEAR(std::stod(row.substr(0, row.find(','))), 0.118, 0.001);
}

TEST(Cli, BenchmarkSmoke) {
    const auto r = run("benchmark --sizes 16,32 --runs 1");
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(r.out);
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_EQ(rows[2].rfind("16,16,", 0), 0u);
}

TEST(Cli, ExperimentFromConfigWritesCsvAndJson) {
    const auto cfg = write_file("exp.cfg",
                                "experiment = table1\nsample_size = 256\nreplications = 20\n"
                                "grid = csa(0.2,1.2); frac(0.4)\n");
    const auto csv = (scratch_dir() / "exp.csv").string();
    const auto json = (scratch_dir() / "exp.json").string();
    const auto r = run("experiment --config " + cfg + " --out " + csv + " --json " + json);
    ASSERT_EQ(r.exit_code, 0) << r.err;
    const auto rows = lines(slurp(csv));
    ASSERT_EQ(rows.size(), 2u + 4u);
    EXPECT_NE(slurp(json).find("\"wall_seconds\""), std::string::npos);
    const auto again = (scratch_dir() / "exp2.csv").string();
    ASSERT_EQ(run("experiment --config " + cfg + " --workers 3 --out " + again).exit_code, 0);
    EXPECT_EQ(slurp(csv), slurp(again));
}

TEST(Cli, ExperimentConfigErrorsExitTwo) {
    const auto cfg = write_file("bad.cfg", "experiment = table1\nwibble = 3\n");
    const auto r = run("experiment --config " + cfg);
    EXPECT_EQ(r.exit_code, 2);
    EXPECT_NE(r.err.find("line 2"), std::string::npos) << r.err;
    EXPECT_EQ(run("experiment --name table7").exit_code, 2);
}

TEST(Cli, TablesInPrintedLayout) {
    const auto t2 = run("table --table 2");
    ASSERT_EQ(t2.exit_code, 0) << t2.err;
    EXPECT_EQ(lines(t2.out)[2].rfind("0.1,zeta,1.085,", 0), 0u);
    const auto t3 = run("table --table 3");
    ASSERT_EQ(t3.exit_code, 0) << t3.err;
    EXPECT_EQ(lines(t3.out)[2].rfind("0.1,zeta,1.077,", 0), 0u);
}

TEST(Cli, OutputFileIsReplacedAtomically) {
    const auto out = (scratch_dir() / "atomic.csv").string();
    write_file("atomic.csv", "stale\n");
    ASSERT_EQ(run("simulate --length 4 --out " + out).exit_code, 0);
    EXPECT_EQ(lines(slurp(out)).size(), 6u);
    for (const auto& entry : fs::directory_iterator(scratch_dir()))
        EXPECT_EQ(entry.path().string().find(".tmp"), std::string::npos) << entry.path();
}
