/*
    Licensed under the Apache License, Version 2.0 (the "License");
    you may not use this file except in compliance with the License.
    You may obtain a copy of the License at

        https://www.apache.org/licenses/LICENSE-2.0

    Unless required by applicable law or agreed to in writing, software
    distributed under the License is distributed on an "AS IS" BASIS,
    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
    See the License for the specific language governing permissions and
    limitations under the License.
*/

#include <msmjoin/bench.hpp>
#include <msmjoin/csv_io.hpp>

#include <gtest/gtest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace msmjoin;
namespace fs = std::filesystem;

namespace {

const fs::path kData = MSMJOIN_TEST_DATA;

class Cli : public ::testing::Test {
  protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("msmjoin_cli_" + std::to_string(::getpid()) + "_" +
                                            ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    // Runs the CLI with stdout/stderr captured to files; returns the exit status.
    int run(const std::string &args) {
        const std::string cmd = std::string("\"") + MSMJOIN_CLI + "\" " + args + " >\"" + (dir_ / "stdout").string() +
                                "\" 2>\"" + (dir_ / "stderr").string() + "\"";
        const int st = std::system(cmd.c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }

    std::string p(const std::string &name) const { return "\"" + (dir_ / name).string() + "\""; }
    fs::path path(const std::string &name) const { return dir_ / name; }

    static std::string slurp(const fs::path &f) {
        std::ifstream in(f, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
    std::string out() const { return slurp(dir_ / "stdout"); }
    std::string err() const { return slurp(dir_ / "stderr"); }

    fs::path dir_;
};

} // namespace

TEST_F(Cli, ReduceEightPoints) {
    ASSERT_EQ(run("reduce --in \"" + (kData / "eight.csv").string() + "\" --out " + p("r.csv") +
                  " --seg-size 2 --levels 2"),
              0)
        << err();
    EXPECT_EQ(slurp(path("r.csv")), "t,v1,radius,raw_start,raw_count\n0,2.5,1.5,0,4\n1,6.5,1.5,4,4\n");
    EXPECT_NE(out().find("# seg_size = 2"), std::string::npos);
}

TEST_F(Cli, GenIsDeterministic) {
    for (const char *kind : {"random-walk", "sensor", "gps"}) {
        const std::string k(kind);
        ASSERT_EQ(run("gen --kind " + k + " --n 500 --seed 11 --out " + p("a.csv") + " --anomaly-rate 0.01 "
                      "--anomaly-scale 20"),
                  0)
            << err();
        ASSERT_EQ(run("gen --kind " + k + " --n 500 --seed 11 --out " + p("b.csv") + " --anomaly-rate 0.01 "
                      "--anomaly-scale 20"),
                  0);
        EXPECT_EQ(slurp(path("a.csv")), slurp(path("b.csv"))) << k;
        EXPECT_EQ(slurp(path("a.csv.outliers.csv")), slurp(path("b.csv.outliers.csv"))) << k;
        EXPECT_EQ(read_csv(path("a.csv")).size(), 500u);
    }
}

TEST_F(Cli, GenPairThenJoin) {
    ASSERT_EQ(run("gen --kind sensor --n 900 --seed 2 --out " + p("x.csv") + " --out2 " + p("y.csv")), 0) << err();
    ASSERT_EQ(run("join --in1 " + p("x.csv") + " --in2 " + p("y.csv") + " --delta 3 --window 50 --out " +
                  p("d.csv")),
              0)
        << err();
    EXPECT_NE(out().find("pairs_seen = 850"), std::string::npos) << out();
    const auto d = slurp(path("d.csv"));
    EXPECT_EQ(d.substr(0, d.find('\n')), "index,verdict,pair_distance,cross_checks,pruned_cross_pairs");
    EXPECT_EQ(std::count(d.begin(), d.end(), '\n'), 851);

    // reduced inputs are accepted by join
    ASSERT_EQ(run("reduce --in " + p("x.csv") + " --out " + p("xr.csv") + " --seg-size 2 --levels 3"), 0);
    ASSERT_EQ(run("reduce --in " + p("y.csv") + " --out " + p("yr.csv") + " --seg-size 2 --levels 3"), 0);
    ASSERT_EQ(run("join --in1 " + p("xr.csv") + " --in2 " + p("yr.csv") + " --delta 3 --window 6"), 0) << err();
    EXPECT_NE(out().find("pairs_seen = 107"), std::string::npos) << out();
}

TEST_F(Cli, UsageErrorsExitOne) {
    EXPECT_EQ(run("reduce --in x.csv --out y.csv --seg-size 2 --levels 1 --bogus"), 1);
    EXPECT_NE(err().find("error:"), std::string::npos);
    EXPECT_NE(err().find("usage: msmjoin reduce"), std::string::npos);
    EXPECT_EQ(run(""), 1);
    EXPECT_EQ(run("reduce --in x.csv --out y.csv --seg-size 1 --levels 1"), 1);
    EXPECT_EQ(run("join --in1 a --in2 b --delta 0 --window 3"), 1);
    EXPECT_EQ(run("join --in1 a --in2 b --delta 1 --window 3 --quantifier most"), 1);
    EXPECT_EQ(run("gen --kind stock --seed 1 --out " + p("o.csv")), 1);
    EXPECT_FALSE(fs::exists(path("o.csv")));
}

TEST_F(Cli, DataErrorsExitTwoWithoutPartialOutput) {
    EXPECT_EQ(run("reduce --in " + p("missing.csv") + " --out " + p("r.csv") + " --seg-size 2 --levels 1"), 2);
    EXPECT_NE(err().find("missing.csv"), std::string::npos);
    EXPECT_FALSE(fs::exists(path("r.csv")));

    std::ofstream(path("bad.csv")) << "t,v1\n0,1\n1,oops\n";
    EXPECT_EQ(run("reduce --in " + p("bad.csv") + " --out " + p("r.csv") + " --seg-size 2 --levels 1"), 2);
    EXPECT_NE(err().find(":3:"), std::string::npos) << err();
    EXPECT_FALSE(fs::exists(path("r.csv")));

    std::ofstream(path("empty.csv")) << "t,v1\n";
    EXPECT_EQ(run("reduce --in " + p("empty.csv") + " --out " + p("r.csv") + " --seg-size 2 --levels 1"), 2);
    EXPECT_FALSE(fs::exists(path("r.csv")));

    std::ofstream(path("bad.conf")) << "kind = sensor\n";
    EXPECT_EQ(run("bench --spec " + p("bad.conf") + " --out " + p("rep.csv")), 2);
    EXPECT_FALSE(fs::exists(path("rep.csv")));

    for (const auto &e : fs::directory_iterator(dir_)) {
        EXPECT_EQ(e.path().string().find(".tmp."), std::string::npos) << e.path();
    }
}

TEST_F(Cli, BenchMatchesGolden) {
    ASSERT_EQ(run("bench --spec \"" + (kData / "bench_small.conf").string() + "\" --out " + p("rep.csv")), 0)
        << err();
    EXPECT_EQ(slurp(path("rep.csv")), slurp(kData / "bench_small.golden.csv"));
    EXPECT_NE(out().find("# target_pct = 85"), std::string::npos);
}

TEST_F(Cli, SweepWritesOneRowPerSegSize) {
    ASSERT_EQ(run("sweep --spec \"" + (kData / "bench_small.conf").string() + "\" --seg-sizes 3,2,4 --out " +
                  p("sw.csv")),
              0)
        << err();
    const auto rows = read_report_csv(path("sw.csv"));
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0].seg_size, 2u);
    EXPECT_EQ(rows[1].seg_size, 3u);
    EXPECT_EQ(rows[2].seg_size, 4u);
    EXPECT_EQ(rows[0].delta, rows[2].delta);
}
