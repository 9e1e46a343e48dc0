#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "spectral/certify.hpp"
#include "spectral/json_io.hpp"
#include "toy.hpp"

using namespace spectral;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Fresh scratch directory per test.
fs::path scratch() {
    const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
    fs::path p = fs::temp_directory_path() / (std::string("spectral_") + info->test_suite_name() + "_" + info->name());
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

void put(const fs::path& p, const std::string& text) {
    std::ofstream f(p);
    f << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

const char* kModel = R"({"model":"swift_hohenberg","m":1,"params":{"mu":"1","nu1":"-3","nu2":"1"}})";

// model, solution (toy, r0 = 1e-10, even sector) and a certify config
void write_toy_run(const fs::path& dir, const std::string& extra = "") {
    put(dir / "model.json", kModel);
    write_seq_file(testsupport::standard_toy().U0, (dir / "u0.json").string());
    put(dir / "solution.json", R"({"sequence":"u0.json","r0":"1e-10","sectors":["c"]})");
    put(dir / "run.json", R"({"mode":"certify","model":"model.json","solution":"solution.json","output":"cert.json")" +
                              extra + "}");
}

int run_cli(const std::string& args) {
    int rc = std::system((std::string(CERTIFY_BIN) + " " + args + " 2>/dev/null").c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST(Config, DefaultsAndRelativePaths) {
    fs::path dir = scratch();
    put(dir / "run.json", R"({"model":"m.json","grid":{"N":16,"d":8},"seed":{"kind":"sech2","file":"s.json"},
                              "t":"-3","J":["-0.5","2"],"two_pass":true,"sectors":["c","s"]})");
    RunConfig c = read_run_config((dir / "run.json").string());
    EXPECT_EQ(c.mode, "certify");
    EXPECT_EQ(fs::path(c.model_file), dir / "m.json");
    EXPECT_EQ(fs::path(c.seed.file), dir / "s.json");
    EXPECT_EQ(fs::path(c.output), dir / "certificate.json");
    EXPECT_EQ(*c.N, 16);
    EXPECT_EQ(*c.d, 8.0);
    EXPECT_FALSE(c.m.has_value());
    EXPECT_TRUE(c.pipeline.two_pass);
    EXPECT_TRUE(c.pipeline.t->re.contains(-3.0));
    EXPECT_TRUE(c.pipeline.J->contains(-0.5));
    EXPECT_EQ(c.sectors.size(), 2u);
    EXPECT_DOUBLE_EQ(c.pipeline.delta0, 0.01);
}

TEST(Config, SolutionKeys) {
    fs::path dir = scratch();
    write_seq_file(testsupport::standard_toy().U0, (dir / "u0.json").string());
    put(dir / "sol.json", R"({"sequence":"u0.json","r0":"2e-9","invariance_dim":{"s":1},
                              "sectors":["c","s"],"equivalent_sectors":{"s2":"s"}})");
    SolutionInput s = read_solution((dir / "sol.json").string());
    EXPECT_EQ(s.U0.size(), testsupport::standard_toy().U0.size());
    EXPECT_TRUE(s.r0->contains(parse_interval_literal("2e-9")));
    EXPECT_FALSE(s.invariance_dim.has_value());
    EXPECT_EQ(s.invariance_per_sector.at("s"), 1);
    EXPECT_EQ(s.equivalent_sectors.at("s2"), "s");

    put(dir / "coeffs.csv", "0,0.5\n1,0.25\n");
    put(dir / "csv.json", R"({"csv":"coeffs.csv","grid":{"N":4,"d":5},"invariance_dim":2})");
    SolutionInput c = read_solution((dir / "csv.json").string());
    EXPECT_TRUE(c.U0.at({1, 0}).contains(0.25));
    EXPECT_EQ(*c.invariance_dim, 2);
    EXPECT_FALSE(c.r0.has_value());

    put(dir / "bad.json", R"({"r0":"1e-9"})");
    EXPECT_THROW(read_solution((dir / "bad.json").string()), FormatError);
}

TEST(Seed, ProfilesAtTheOrigin) {
    GridSpec g{1, 64, 20.0};
    Sector c = Sector::parse("c", 1);
    FourierSeq gs = make_seed({"gaussian", 1.5, 2.0, ""}, g, c);
    FourierSeq sh = make_seed({"sech2", -0.3, 0.8, ""}, g, c);
    auto vg = sample_gamma_dagger(gs, {Point{0.0, 0.0}, Point{1.0, 0.0}});
    auto vs = sample_gamma_dagger(sh, {Point{0.0, 0.0}, Point{1.0, 0.0}});
    EXPECT_NEAR(vg[0].mid(), 1.5, 1e-8);
    EXPECT_NEAR(vg[1].mid(), 1.5 * std::exp(-1.0 / 8.0), 1e-8);
    EXPECT_NEAR(vs[0].mid(), -0.3, 1e-6);
    EXPECT_NEAR(vs[1].mid(), -0.3 / std::pow(std::cosh(0.8), 2), 1e-6);
    EXPECT_THROW(make_seed({"boxcar", 1.0, 1.0, ""}, g, c), FormatError);
}

TEST(ExitCodes, Mapping) {
    EXPECT_EQ(exit_code_for("FormatError"), kExitIo);
    EXPECT_EQ(exit_code_for("GridMismatch"), kExitIo);
    EXPECT_EQ(exit_code_for("ConditionViolated"), kExitCondition);
    EXPECT_EQ(exit_code_for("SingularityUnverified"), kExitSingular);
    EXPECT_EQ(exit_code_for("DegenerateEigenbasis"), kExitSingular);
    EXPECT_EQ(exit_code_for("InvalidParameter"), kExitUsage);
    EXPECT_EQ(exit_code_for("ClusterExitsDomain"), kExitCertification);
}

TEST(Run, CertifiesToyAndIsDeterministic) {
    fs::path dir = scratch();
    write_toy_run(dir, R"(,"plot_output":"disks.csv")");
    RunConfig cfg = read_run_config((dir / "run.json").string());
    RunResult a = run(cfg);
    ASSERT_EQ(a.exit_code, kExitOk) << a.message;
    std::string first = slurp(dir / "cert.json");
    RunResult b = run(cfg);
    ASSERT_EQ(b.exit_code, kExitOk);
    EXPECT_EQ(first, slurp(dir / "cert.json"));
    EXPECT_EQ(first, canonical_dump(a.document));

    const json& d = a.document;
    EXPECT_EQ(d.at("schema"), "spectral-certificate");
    EXPECT_EQ(d.at("tool").at("version"), kToolVersion);
    EXPECT_EQ(d.at("verdict").at("unstable_directions"), 2);
    EXPECT_EQ(d.at("verdict").at("stability"), "unstable");
    EXPECT_EQ(d.at("sectors").size(), 1u);
    EXPECT_FALSE(d.at("radial_symmetry").at("applies"));
    EXPECT_TRUE(fs::exists(dir / "cert.json.timing.json"));
    std::string csv = slurp(dir / "disks.csv");
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "sector,n1,n2,region,center_re,center_im,radius");
    EXPECT_GT(std::count(csv.begin(), csv.end(), '\n'), 10);
}

TEST(Run, TwoPassRecordsBothShifts) {
    fs::path dir = scratch();
    write_toy_run(dir, R"(,"two_pass":true)");
    RunResult r = run(read_run_config((dir / "run.json").string()));
    ASSERT_EQ(r.exit_code, kExitOk) << r.message;
    const json& passes = r.document.at("sectors")[0].at("passes");
    ASSERT_EQ(passes.size(), 2u);
    EXPECT_NE(passes[0].at("t"), passes[1].at("t"));
    EXPECT_EQ(r.document.at("verdict").at("unstable_directions"), 2);
}

TEST(Run, EquivalentSectorMirrorsItsPartner) {
    fs::path dir = scratch();
    write_toy_run(dir);
    put(dir / "solution.json",
        R"({"sequence":"u0.json","r0":"1e-10","sectors":["c","c2"],"equivalent_sectors":{"c2":"c"}})");
    RunResult r = run(read_run_config((dir / "run.json").string()));
    ASSERT_EQ(r.exit_code, kExitOk) << r.message;
    const json& s = r.document.at("sectors");
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[1].at("mirrors"), "c");
    EXPECT_EQ(s[0].at("clusters"), s[1].at("clusters"));
    EXPECT_EQ(r.document.at("union").at("positive"), 4);
}

TEST(Run, FailuresBecomeReports) {
    fs::path dir = scratch();
    write_toy_run(dir);
    // the odd sector holds the translation eigenvalue at the edge of J
    put(dir / "solution.json", R"({"sequence":"u0.json","r0":"1e-10","sectors":["s"]})");
    RunResult r = run(read_run_config((dir / "run.json").string()));
    EXPECT_EQ(r.exit_code, kExitCertification);
    EXPECT_FALSE(r.document.at("ok"));
    EXPECT_EQ(r.document.at("error").at("kind"), "ClusterExitsDomain");
    EXPECT_EQ(slurp(dir / "cert.json"), canonical_dump(r.document));

    put(dir / "solution.json", R"({"sequence":"u0.json","r0":"0.5","sectors":["c"]})");
    EXPECT_EQ(run(read_run_config((dir / "run.json").string())).exit_code, kExitCondition);

    put(dir / "solution.json", R"({"sequence":"missing.json"})");
    EXPECT_EQ(run(read_run_config((dir / "run.json").string())).exit_code, kExitIo);
}

TEST(Run, TranslationModeCountedWithWiderWindow) {
    fs::path dir = scratch();
    write_toy_run(dir, R"(,"J":{"lo":"-0.5","hi":"4.3"})");
    put(dir / "solution.json", R"({"sequence":"u0.json","r0":"1e-10","sectors":["c","s"],"invariance_dim":{"s":1}})");
    RunResult r = run(read_run_config((dir / "run.json").string()));
    ASSERT_EQ(r.exit_code, kExitOk) << r.message;
    EXPECT_EQ(r.document.at("verdict").at("unstable_directions"), 3);
    EXPECT_EQ(r.document.at("verdict").at("zero_eigenvalues"), 1);
    EXPECT_EQ(r.document.at("verdict").at("contains_zero_candidates"), 0);
}

TEST(Run, NewtonAndEssentialSpectrumModes) {
    fs::path dir = scratch();
    put(dir / "model.json", kModel);
    put(dir / "newton.json", R"({"mode":"newton","model":"model.json","grid":{"N":32,"d":20},"sector":"c",
                                 "seed":{"kind":"gaussian","amplitude":1.5,"width":2},"output":"u.json"})");
    RunResult n = run(read_run_config((dir / "newton.json").string()));
    ASSERT_EQ(n.exit_code, kExitOk) << n.message;
    EXPECT_EQ(n.document.at("schema"), "spectral-newton");
    EXPECT_FALSE(n.document.at("certified"));
    FourierSeq u = seq_from_json(n.document.at("sequence").dump());
    EXPECT_NEAR(u.at({0, 0}).mid(), testsupport::standard_toy().U0.at({0, 0}).mid(), 1e-12);

    put(dir / "ess.json", R"({"mode":"essential-spectrum","model":"model.json","output":"e.json"})");
    RunResult e = run(read_run_config((dir / "ess.json").string()));
    ASSERT_EQ(e.exit_code, kExitOk);
    const json& piece = e.document.at("range").at("pieces")[0];
    EXPECT_TRUE(piece.at("lo").is_null());
    EXPECT_TRUE(interval_from_json(piece.at("hi")).contains(-1.0));
}

TEST(Run, GershgorinOnlyMode) {
    fs::path dir = scratch();
    write_toy_run(dir);
    put(dir / "g.json", R"({"mode":"gershgorin-only","model":"model.json","solution":"solution.json","output":"g_out.json"})");
    RunResult r = run(read_run_config((dir / "g.json").string()));
    ASSERT_EQ(r.exit_code, kExitOk) << r.message;
    EXPECT_EQ(r.document.at("schema"), "spectral-disk-sets");
    EXPECT_FALSE(r.document.at("sectors")[0].at("disks").empty());
}

TEST(Cli, FlagsAndExitCodes) {
    fs::path dir = scratch();
    write_toy_run(dir);
    std::string cfg = (dir / "run.json").string();
    EXPECT_EQ(run_cli("--config " + cfg + " --two-pass --sector c --emit-plot-data " + (dir / "p.csv").string()), 0);
    EXPECT_TRUE(fs::exists(dir / "p.csv"));
    json d = json::parse(slurp(dir / "cert.json"));
    EXPECT_EQ(d.at("sectors")[0].at("passes").size(), 2u);
    EXPECT_EQ(run_cli("--config " + cfg + " --sector s"), kExitCertification);
    EXPECT_EQ(run_cli("--bogus"), kExitUsage);
    EXPECT_EQ(run_cli(""), kExitUsage);
    EXPECT_EQ(run_cli("--config " + (dir / "nope.json").string()), kExitIo);
}
