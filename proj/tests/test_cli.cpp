#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "support.hpp"

using namespace ctrade;
using ctrade::testing::TempDir;
namespace fs = std::filesystem;

namespace {

const std::string fixtures = CTRADE_FIXTURES;
const std::string cli = CTRADE_CLI;

struct Run {
    int status;
    std::string out;
    std::string err;

    json::json json() const { return json::json::parse(out); }
};

Run run(const TempDir& scratch, const std::string& args) {
    auto out = scratch.str("stdout.txt");
    auto err = scratch.str("stderr.txt");
    std::string cmd = "'" + cli + "' " + args + " >'" + out + "' 2>'" + err + "'";
    int raw = std::system(cmd.c_str());
    int status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
    return {status, read_file(out), read_file(err)};
}

std::string mini_args() {
    return "--flows " + fixtures + "/mini_flows.csv --gdp " + fixtures +
           "/mini_gdp.csv --distances " + fixtures + "/mini_distances.csv";
}

} // namespace

TEST(Cli, IngestSummarisesFixtures) {
    TempDir tmp("cli-ingest");
    auto r = run(tmp, "ingest " + mini_args() + " --out " + tmp.str("bundle"));
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["countries"].size(), 3u) << r.out;
    EXPECT_EQ(j["years"]["count"], 2) << r.out;
    EXPECT_TRUE(fs::exists(tmp.path() / "bundle" / "manifest.json"));
}

TEST(Cli, IngestRejectsSelfFlow) {
    TempDir tmp("cli-self");
    auto r = run(tmp, "ingest --flows " + fixtures + "/bad_self_flow.csv --gdp " +
                          fixtures + "/mini_gdp.csv --distances " + fixtures +
                          "/mini_distances.csv --out " + tmp.str("bundle"));
    EXPECT_NE(r.status, 0);
    EXPECT_NE(r.err.find("self-flow at line 3"), std::string::npos) << r.err;
}

TEST(Cli, SyntheticAlphaRoundTrip) {
    TempDir tmp("cli-synth");
    auto bundle = tmp.str("bundle");
    auto s = run(tmp, "synth --out " + bundle +
                          " --countries 4 --alpha 0.5 --noise 0 --seed 11");
    ASSERT_EQ(s.status, 0) << s.err;
    auto r = run(tmp, "fit-alpha --dataset " + bundle);
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["pair_fits"].size(), 6u);
    for (const auto& f : j["pair_fits"]) {
        EXPECT_NEAR(f["alpha"].get<double>(), 0.5, 1e-3);
    }
    EXPECT_TRUE(j["warnings"].empty());
}

TEST(Cli, ShortPanelWarnsAndSucceeds) {
    TempDir tmp("cli-short");
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "ingest " + mini_args() + " --out " + bundle).status, 0);
    auto r = run(tmp, "fit-alpha --dataset " + bundle + " --pairs USA-CAN");
    EXPECT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    EXPECT_TRUE(j["pair_fits"].empty());
    ASSERT_EQ(j["warnings"].size(), 1u);
    EXPECT_NE(j["warnings"][0].get<std::string>().find("fewer than 4"),
              std::string::npos);
    EXPECT_NE(r.err.find("warning"), std::string::npos);
}

TEST(Cli, BetaFromIntercept) {
    TempDir tmp("cli-beta");
    auto dist = fixtures + "/nafta_distances.csv";
    auto r = run(tmp, "fit-beta --numerator USA-CAN --denominator USA-MEX "
                      "--intercept -2.43 --distances " + dist);
    ASSERT_EQ(r.status, 0) << r.err;
    double beta = r.json()["beta"].get<double>();
    EXPECT_NEAR(beta, -1.7114700353258252, 1e-12);

    auto swapped = run(tmp, "fit-beta --numerator USA-MEX --denominator USA-CAN "
                            "--intercept 2.43 --distances " + dist);
    ASSERT_EQ(swapped.status, 0) << swapped.err;
    EXPECT_NEAR(swapped.json()["beta"].get<double>(), beta, 1e-12);
}

TEST(Cli, AlphaDistributionOfTable) {
    TempDir tmp("cli-dist");
    auto r = run(tmp, "alpha-dist --input " + fixtures + "/alpha_table.csv");
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    EXPECT_NEAR(j["distribution"]["mu"].get<double>(), 0.47625, 1e-12);
    EXPECT_NEAR(j["distribution"]["sigma"].get<double>(), 0.12658371735732837,
                1e-12);
    EXPECT_EQ(j["cdf"].size(), 40u);
}

TEST(Cli, RhoOnSyntheticData) {
    TempDir tmp("cli-rho");
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "synth --out " + bundle + " --countries 3 --rho 1.4 --seed 3")
                  .status,
              0);
    auto r = run(tmp, "fit-rho --dataset " + bundle);
    ASSERT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["power_law_fits"].size(), 3u);
    for (const auto& f : j["power_law_fits"]) {
        EXPECT_NEAR(f["rho"].get<double>(), 1.4, 1e-10);
    }
}

TEST(Cli, RhoWarnsOnMissingGdp) {
    TempDir tmp("cli-nogdp");
    {
        std::ofstream gdp(tmp.str("gdp.csv"));
        gdp << "year,country,gdp_usd\n2018,USA,20530000000000\n2019,USA,21380000000000\n";
    }
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "ingest --flows " + fixtures + "/mini_flows.csv --gdp " +
                           tmp.str("gdp.csv") + " --distances " + fixtures +
                           "/mini_distances.csv --out " + bundle)
                  .status,
              0);
    auto r = run(tmp, "fit-rho --dataset " + bundle + " --countries MEX");
    EXPECT_EQ(r.status, 0) << r.err;
    auto j = r.json();
    ASSERT_EQ(j["warnings"].size(), 1u);
    EXPECT_NE(j["warnings"][0].get<std::string>().find("no GDP"),
              std::string::npos);
}

TEST(Cli, PredictRecoversConfiguredOmega) {
    TempDir tmp("cli-predict");
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "synth --out " + bundle +
                           " --countries 3 --alpha 0.5 --rho 1.2 --beta 1.7 "
                           "--omega 2.5 --seed 4")
                  .status,
              0);
    auto truth = json::json::parse(read_file(bundle + "/manifest.json"))["synthetic"];
    auto c_m = truth["countries"]["AAA"];
    auto c_n = truth["countries"]["AAB"];
    const double a = 0.5;
    double k = std::pow(c_m["export_scale"].get<double>() *
                            c_n["export_scale"].get<double>(),
                        a) *
               (std::pow(c_m["k_double_prime"].get<double>(), a) +
                std::pow(c_n["k_double_prime"].get<double>(), a));
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", k);
    auto r = run(tmp, "predict --dataset " + bundle +
                          " --pair AAA-AAB --alpha 0.5 --rho 1.2 --beta 1.7 "
                          "--prefactor " + buf);
    ASSERT_EQ(r.status, 0) << r.err;
    auto rows = r.json()["years"];
    ASSERT_EQ(rows.size(), 11u);
    for (const auto& row : rows) {
        EXPECT_NEAR(json::to_double(row["residual_omega"]), 2.5, 1e-9);
    }
}

TEST(Cli, PredictEmbargoYearIsInfinite) {
    TempDir tmp("cli-embargo");
    {
        std::ofstream flows(tmp.str("flows.csv"));
        flows << "year,reporter,partner,export_usd,import_usd\n"
                 "2018,USA,CAN,299000000000,318500000000\n"
                 "2019,USA,CAN,0,0\n";
    }
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "ingest --flows " + tmp.str("flows.csv") + " --gdp " +
                           fixtures + "/mini_gdp.csv --distances " + fixtures +
                           "/mini_distances.csv --out " + bundle)
                  .status,
              0);
    auto r = run(tmp, "predict --dataset " + bundle + " --pair USA-CAN");
    ASSERT_EQ(r.status, 0) << r.err;
    auto rows = r.json()["years"];
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_TRUE(rows[0]["residual_omega"].is_number());
    EXPECT_EQ(rows[1]["residual_omega"], "inf");
}

TEST(Cli, PredictSingleEvaluation) {
    TempDir tmp("cli-single");
    auto r = run(tmp, "predict --alpha 1 --rho 1 --gdp-m 1 --gdp-n 1 --distance 1");
    ASSERT_EQ(r.status, 0) << r.err;
    EXPECT_NEAR(r.json()["prediction"].get<double>(), 2.0, 1e-15);
}

TEST(Cli, ReportIsDeterministicAndPlotsValidate) {
    TempDir tmp("cli-report");
    auto bundle = tmp.str("bundle");
    ASSERT_EQ(run(tmp, "synth --out " + bundle + " --countries 4 --seed 8 --noise 0.02")
                  .status,
              0);
    std::string args = "report --dataset " + bundle +
                       " --triples AAA-AAB/AAA-AAC --plots " + tmp.str("plots");
    auto first = run(tmp, args);
    ASSERT_EQ(first.status, 0) << first.err;
    auto second = run(tmp, args);
    EXPECT_EQ(first.out, second.out);

    auto j = first.json();
    EXPECT_EQ(j["schema_version"], report_schema_version);
    EXPECT_EQ(j["pair_fits"].size(), 6u);
    EXPECT_EQ(j["triple_fits"].size(), 1u);
    EXPECT_TRUE(j.contains("composed_model"));

    std::string files;
    int n = 0;
    for (const auto& e : fs::directory_iterator(tmp.path() / "plots")) {
        files += " '" + e.path().string() + "'";
        ++n;
    }
    // 6 alpha series, one CDF, 4 rho and 4 linearity series.
    EXPECT_EQ(n, 15);
    auto check = run(tmp, "check-tsv" + files);
    EXPECT_EQ(check.status, 0) << check.err;
}

TEST(Cli, UnknownFormatFails) {
    TempDir tmp("cli-format");
    auto r = run(tmp, "alpha-dist --input " + fixtures + "/alpha_table.csv --format xml");
    EXPECT_NE(r.status, 0);
}
