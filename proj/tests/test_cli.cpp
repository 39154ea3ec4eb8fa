#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "wavechannel/io.hpp"
#include "wavechannel/report.hpp"

using namespace wavechannel;
namespace fs = std::filesystem;

namespace {

std::shared_ptr<const RadialGrid> uniform_grid(double L, double width) {
    return std::make_shared<const RadialGrid>(RadialGrid::uniform(0, L, width));
}

VerificationReport sample_report(const std::string& check, int d, std::uint64_t seed) {
    VerificationReport r;
    r.check = check;
    r.dim = d;
    r.R = 1.5;
    r.seed = seed;
    r.inputs_digest = fnv1a_hex(check + std::to_string(seed));
    r.measured["energy"] = 2.25;
    r.measured["E_plus"] = 1.0 / 3.0;
    r.paper_constant = 0.5;
    r.ratio = 0.75;
    r.tolerance = 1e-3;
    r.pass = true;
    r.note = "a, \"quoted\" note";
    return r;
}

class Cli : public ::testing::Test {
protected:
    fs::path dir;

    void SetUp() override {
        dir = fs::temp_directory_path() / ("wavechannel_cli_" + std::to_string(::getpid()) + "_" +
                                           ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::create_directories(dir);
    }
    void TearDown() override { fs::remove_all(dir); }

    std::string path(const std::string& name) const { return (dir / name).string(); }

    void write(const std::string& name, const std::string& text) const { std::ofstream(path(name), std::ios::binary) << text; }

    std::string read(const std::string& name) const { return slurp_file(path(name)); }

    // Exit status of the CLI with stdout and stderr captured in out.txt and err.txt.
    int run(const std::string& args) const {
        const std::string cmd = std::string(WAVECHANNEL_CLI) + " " + args + " >" + path("out.txt") + " 2>" + path("err.txt");
        const int st = std::system(cmd.c_str());
        return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    }
};

}  // namespace

TEST(Csv, EscapeAndParseRoundTrip) {
    EXPECT_EQ(csv_escape("plain"), "plain");
    EXPECT_EQ(csv_escape("a,b"), "\"a,b\"");
    EXPECT_EQ(csv_escape("say \"hi\""), "\"say \"\"hi\"\"\"");
    const std::vector<std::vector<std::string>> rows = {{"x", "a,b", ""}, {"line\nbreak", "q\"q", "\r"}};
    std::ostringstream os;
    for (const auto& r : rows) write_csv_row(os, r);
    EXPECT_EQ(parse_csv(os.str()), rows);
}

TEST(Csv, LenientLineEndingsAndBom) {
    const CsvTable want = {{"s", "value"}, {"0", "1"}};
    EXPECT_EQ(parse_csv("s,value\n0,1\n"), want);
    EXPECT_EQ(parse_csv("\xEF\xBB\xBFs,value\r\n0,1"), want);
    EXPECT_EQ(parse_csv("s,value\r0,1\r"), want);
}

TEST(Csv, MalformedInput) {
    EXPECT_THROW(parse_csv("a,\"b"), ParseError);
    EXPECT_THROW(parse_csv("a,b\"c\""), ParseError);
    EXPECT_THROW(parse_line_csv(""), ParseError);
    EXPECT_THROW(parse_line_csv("x,value\n0,1\n1,2\n"), ParseError);
    EXPECT_THROW(parse_line_csv("s,value\n0,1\n"), ParseError);
    EXPECT_THROW(parse_line_csv("s,value\n0,1\n1,nan\n"), ParseError);
    EXPECT_THROW(parse_line_csv("s,value\n0,1\n1,2x\n"), ParseError);
    EXPECT_THROW(parse_line_csv("s,value\n0,1\n1,2\n3,3\n"), ParseError);
    EXPECT_THROW(parse_line_csv("s,value\n0,1\n1\n"), ParseError);
    EXPECT_THROW(parse_field_csv("r,u0,u1\n1,0,0\n0.5,0,0\n", DimensionContext(3)), ParseError);
    EXPECT_NO_THROW(parse_line_csv("s,value\n 0 ,1\n1, 2\t\n"));
}

TEST(Csv, ProfileRoundTripIsExact) {
    const SampledLine g = SampledLine::with_spacing(-2, 3, 0.01, [](double s) { return std::sin(7 * s) / 3; });
    std::ostringstream os;
    write_line_csv(os, g);
    const SampledLine back = parse_line_csv(os.str());
    ASSERT_EQ(back.n(), g.n());
    EXPECT_EQ(back.lo(), g.lo());
    for (std::size_t i = 0; i < g.n(); ++i) EXPECT_EQ(back[i], g[i]);
}

TEST(Csv, FieldRoundTripRecoversPanels) {
    const auto f = RadialField::from_functions(
        DimensionContext(4), uniform_grid(5, 0.25), [](double r) { return std::exp(-r * r); },
        [](double r) { return r * std::exp(-r); });
    std::ostringstream os;
    write_field_csv(os, f);
    const RadialField back = parse_field_csv(os.str(), DimensionContext(4));
    ASSERT_EQ(back.r().size(), f.r().size());
    for (std::size_t i = 0; i < f.r().size(); ++i) {
        EXPECT_EQ(back.u0()[i], f.u0()[i]);
        EXPECT_EQ(back.u1()[i], f.u1()[i]);
    }
    EXPECT_NEAR(energy(back), energy(f), 1e-12 * energy(f));
}

TEST(Csv, FieldOffPanelsIsInterpolated) {
    std::ostringstream os;
    os << "r,u0,u1\n";
    for (int i = 0; i <= 400; ++i) {
        const double r = 0.01 * i;
        os << r << "," << std::exp(-(r - 2) * (r - 2)) << ",0\n";
    }
    const RadialField f = parse_field_csv(os.str(), DimensionContext(3));
    EXPECT_NEAR(f.u0_at(2.005), std::exp(-0.005 * 0.005), 1e-7);
}

TEST(Report, Fnv1a) {
    EXPECT_EQ(fnv1a_hex(""), "cbf29ce484222325");
    EXPECT_EQ(fnv1a_hex("a"), "af63dc4c8601ec8c");
}

TEST(Report, JsonRoundTrip) {
    const VerificationReport r = sample_report("radialpi", 5, 9);
    const VerificationReport b = report_from_json(nlohmann::json::parse(to_json(r).dump()));
    EXPECT_EQ(b.check, r.check);
    EXPECT_EQ(b.dim, r.dim);
    EXPECT_EQ(b.R, r.R);
    EXPECT_EQ(b.seed, r.seed);
    EXPECT_EQ(b.inputs_digest, r.inputs_digest);
    EXPECT_EQ(b.measured, r.measured);
    EXPECT_EQ(b.ratio, r.ratio);
    EXPECT_EQ(b.pass, r.pass);
    EXPECT_EQ(b.note, r.note);
}

TEST(Report, DocumentIsSortedAndCounted) {
    std::vector<VerificationReport> v = {sample_report("radialpi", 5, 2), sample_report("main4-position", 8, 1),
                                         sample_report("radialpi", 3, 7), sample_report("radialpi", 5, 1)};
    v[2].pass = false;
    const auto doc = report_document(v);
    EXPECT_EQ(doc["schema"], 1);
    EXPECT_EQ(doc["count"], 4);
    EXPECT_EQ(doc["failed"], 1);
    const auto back = reports_from_document(nlohmann::json::parse(doc.dump()));
    ASSERT_EQ(back.size(), 4u);
    EXPECT_EQ(back[0].check, "main4-position");
    EXPECT_EQ(back[1].dim, 3);
    EXPECT_EQ(back[2].seed, 1u);
    EXPECT_EQ(back[3].seed, 2u);
    std::reverse(v.begin(), v.end());
    EXPECT_EQ(report_document(v).dump(), doc.dump());
    EXPECT_THROW(reports_from_document(nlohmann::json::parse(R"({"schema":2,"reports":[]})")), ParseError);
    EXPECT_THROW(reports_from_document(nlohmann::json::array()), ParseError);
}

TEST(Report, CsvHasOneRowPerReport) {
    std::ostringstream os;
    write_report_csv(os, {sample_report("radialpi", 5, 2), sample_report("radialpi", 3, 1)});
    const CsvTable t = parse_csv(os.str());
    ASSERT_EQ(t.size(), 3u);
    EXPECT_EQ(t[0], (std::vector<std::string>{"check", "dim", "R", "seed", "ratio", "pass"}));
    EXPECT_EQ(t[1][1], "3");
    EXPECT_EQ(t[2][5], "true");
}

TEST_F(Cli, VerifyPassesAndIsReproducible) {
    ASSERT_EQ(run("verify --check radiative-identity --dim 3 --seeds 2 --out " + path("a.json")), 0);
    const std::string text = read("out.txt");
    EXPECT_NE(text.find("seed=1"), std::string::npos);
    EXPECT_NE(text.find("PASS"), std::string::npos);
    EXPECT_EQ(text.find("FAIL"), std::string::npos);
    ASSERT_EQ(run("verify --check radiative-identity --dim 3 --seeds 2 --out " + path("b.json")), 0);
    EXPECT_EQ(read("a.json"), read("b.json"));
    const auto reps = reports_from_document(nlohmann::json::parse(read("a.json")));
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_TRUE(reps[0].pass && reps[1].pass);
}

TEST_F(Cli, ReportMergesDocuments) {
    ASSERT_EQ(run("verify --check radialpi --dim 3 --seeds 1 --seed-start 4 --out " + path("a.json")), 0);
    ASSERT_EQ(run("verify --check radialpi --dim 3 --seeds 1 --seed-start 2 --out " + path("b.json")), 0);
    ASSERT_EQ(run("report --in " + path("a.json") + " " + path("b.json") + " --out " + path("m.json") + " --csv " +
                  path("m.csv")),
              0);
    const auto reps = reports_from_document(nlohmann::json::parse(read("m.json")));
    ASSERT_EQ(reps.size(), 2u);
    EXPECT_EQ(reps[0].seed, 2u);
    EXPECT_EQ(parse_csv(read("m.csv")).size(), 3u);
    write("bad.json", "{not json");
    EXPECT_EQ(run("report --in " + path("bad.json")), 2);
}

TEST_F(Cli, ExitCodes) {
    write("empty.csv", "");
    EXPECT_EQ(run("transform --dim 3 --direction profile-map --in " + path("empty.csv")), 2);
    EXPECT_NE(read("err.txt").find("error parse"), std::string::npos);
    EXPECT_EQ(run("transform --dim 3 --direction profile-map --in " + path("missing.csv")), 2);
    EXPECT_EQ(run("verify --check no-such-check --dim 3"), 2);
    EXPECT_EQ(run("verify --dim 3"), 2);
    EXPECT_EQ(run("verify --check radiative-identity --dim 4 --seeds 1"), 3);
    EXPECT_NE(read("err.txt").find("inadmissible"), std::string::npos);
    EXPECT_EQ(run("ops derivative --order 13 --in " + path("empty.csv")), 2);
    EXPECT_EQ(run("--help"), 0);
}

TEST_F(Cli, ProfileMapOfZeroIsZero) {
    std::ostringstream os;
    write_line_csv(os, SampledLine(-1, 1, std::vector<double>(21, 0.0)));
    write("zero.csv", os.str());
    for (int d : {3, 4}) {
        ASSERT_EQ(run("transform --dim " + std::to_string(d) + " --direction profile-map --in " + path("zero.csv") +
                      " --out " + path("p.csv")),
                  0);
        const SampledLine p = parse_line_csv(read("p.csv"));
        EXPECT_EQ(p.peak(), 0.0) << d;
    }
}

TEST_F(Cli, OpsAndOracleOutputs) {
    std::ostringstream os;
    write_line_csv(os, SampledLine::with_spacing(-8, 8, 0.01, [](double s) { return std::exp(-s * s); }));
    write("g.csv", os.str());
    ASSERT_EQ(run("ops derivative --order 1 --in " + path("g.csv") + " --out " + path("dg.csv")), 0);
    const SampledLine dg = parse_line_csv(read("dg.csv"));
    EXPECT_NEAR(dg(0.5), -std::exp(-0.25), 1e-6);
    ASSERT_EQ(run("ops w-polynomial --dim 6"), 0);
    const auto w = nlohmann::json::parse(read("out.txt"));
    EXPECT_FALSE(w.empty());

    std::ostringstream fs_;
    write_field_csv(fs_, RadialField::from_functions(
                             DimensionContext(3), uniform_grid(8, 0.1), [](double r) { return std::exp(-(r - 2) * (r - 2) / 0.08); },
                             [](double) { return 0.0; }));
    write("f.csv", fs_.str());
    ASSERT_EQ(run("oracle --dim 3 --data " + path("f.csv") + " --time 1 --out " + path("ft.csv")), 0);
    const RadialField ft = parse_field_csv(read("ft.csv"), DimensionContext(3));
    const RadialField f0 = parse_field_csv(read("f.csv"), DimensionContext(3));
    EXPECT_NEAR(energy(ft), energy(f0), 1e-8 * energy(f0));
    ASSERT_EQ(run("oracle --dim 3 --data " + path("f.csv") + " --exterior 0 --direction plus"), 0);
    EXPECT_NEAR(std::stod(read("out.txt")), energy(f0) / 2, 1e-3 * energy(f0));
}
