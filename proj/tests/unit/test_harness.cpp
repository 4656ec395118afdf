#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <regex>
#include <string>

#include <gtest/gtest.h>

#include "corostab/config.hpp"
#include "corostab/errors.hpp"
#include "corostab/report.hpp"
#include "corostab/scan.hpp"
#include "corostab/verify.hpp"

using namespace corostab;
namespace fs = std::filesystem;

namespace {

const char* env_or(const char* name, const char* fallback) {
  const char* v = std::getenv(name);
  return v && *v ? v : fallback;
}

fs::path data(const std::string& name) { return fs::path(env_or("COROSTAB_TEST_DATA", COROSTAB_DEFAULT_TEST_DATA)) / name; }

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() / ("corostab-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter_++));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  static inline int counter_ = 0;
  fs::path path_;
};

ScanConfig config_from(const std::string& text) { return scan_config_from_ini(parse_ini(text), data("")); }

int run_cli(const std::string& args) {
  const char* cli = env_or("COROSTAB_CLI", COROSTAB_DEFAULT_CLI);
  const int status = std::system((std::string(cli) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

int schema_error_line(const std::string& text) {
  try {
    parse_ini(text);
  } catch (const SchemaError& e) {
    return e.line();
  }
  return -1;
}

}  // namespace

TEST(Ini, ParsesSectionsAndComments) {
  const IniDocument doc = parse_ini("# top\n[a]\nk = v # note\nurl = x#y\n\n[b]\nz=1\n");
  ASSERT_EQ(doc.sections.size(), 2u);
  EXPECT_EQ(doc.find("a")->find("k")->value, "v");
  EXPECT_EQ(doc.find("a")->find("url")->value, "x#y");
  EXPECT_EQ(doc.find("b")->find("z")->line, 7);
}

TEST(Ini, ErrorsCarryLineNumbers) {
  EXPECT_EQ(schema_error_line("[a]\nk = 1\nk = 2\n"), 3);
  EXPECT_EQ(schema_error_line("[a]\n[a]\n"), 2);
  EXPECT_EQ(schema_error_line("k = 1\n"), 1);
  EXPECT_EQ(schema_error_line("[a]\n\njust text\n"), 3);
  EXPECT_EQ(schema_error_line("[a\n"), 1);
}

TEST(Ini, StrictNumbers) {
  EXPECT_DOUBLE_EQ(parse_number("1.5e-3", 1), 1.5e-3);
  EXPECT_THROW(parse_number("1.5x", 4), SchemaError);
  EXPECT_THROW(parse_number("", 4), SchemaError);
}

TEST(Material, BuiltinByName) {
  const MaterialLaw law = load_material("hencky", {{"mu", 1.0}, {"lam", 1.0}});
  EXPECT_TRUE(is_hyperelastic(law));
  EXPECT_THROW(load_material("mooney", {}), SchemaError);
}

TEST(Material, CustomEnergyFileMatchesBuiltin) {
  const MaterialLaw custom = load_material(data("hencky_custom.mat"));
  const MaterialLaw builtin = hencky_law(1, 1);
  for (const Vector3& x : {Vector3(0.3, -0.2, 0.1), Vector3(1, 0, 0), Vector3(-0.5, 0.5, 0.9)}) {
    EXPECT_LE((principal_kirchhoff(custom, x) - principal_kirchhoff(builtin, x)).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(Material, SwappedStressFileIsRejected) {
  EXPECT_THROW(load_material(data("swapped_stress.mat")), EquivarianceError);
}

TEST(Material, SyntaxErrorHasPosition) {
  try {
    load_material(data("bad_syntax.mat"));
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_GT(e.position(), 0u);
  }
}

TEST(Material, MissingFile) { EXPECT_THROW(load_material(data("nope.mat")), IoError); }

TEST(Material, UnknownKeysAndKinds) {
  EXPECT_THROW(material_config_from_ini(parse_ini("[material]\nkind = hencky\ncolour = red\n")), SchemaError);
  EXPECT_THROW(material_config_from_ini(parse_ini("[material]\nkind = mooney\n")), SchemaError);
  EXPECT_THROW(material_config_from_ini(parse_ini("[material]\nkind = hencky\n[extra]\n")), SchemaError);
  EXPECT_THROW(material_config_from_ini(parse_ini("[parameters]\nmu = 1\n")), SchemaError);
}

TEST(ScanConfig, Defaults) {
  const ScanConfig c = config_from("[material]\nkind = hencky\n[parameters]\nmu=1\nlam=1\n");
  const auto& g = std::get<GridSpec>(c.sampling);
  EXPECT_EQ(g.points, 9);
  EXPECT_EQ(c.directions, 200);
  EXPECT_EQ(c.flavors.size(), 2u);
  EXPECT_EQ(scan_states(c).size(), 729u);
}

TEST(ScanConfig, Validation) {
  const std::string head = "[material]\nkind = hencky\n[parameters]\nmu=1\nlam=1\n";
  EXPECT_THROW(config_from(head + "[grid]\nmin = 1\nmax = 1\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[grid]\npoints = 1\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[grid]\n[random]\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[audit]\ndirections = 10\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[audit]\nflavors = sigma, pressure\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[output]\nformat = xml\n"), SchemaError);
  EXPECT_THROW(config_from(head + "[audit]\nmargin = -1\n"), SchemaError);
}

TEST(ScanConfig, GridOrderAndRandomDeterminism) {
  const ScanConfig g = load_scan_config(data("hencky_grid.cfg"));
  const std::vector<Vector3> pts = scan_states(g);
  ASSERT_EQ(pts.size(), 125u);
  EXPECT_EQ(pts[0], Vector3(-0.5, -0.5, -0.5));
  EXPECT_EQ(pts[1], Vector3(-0.5, -0.5, -0.25));
  EXPECT_EQ(pts.back(), Vector3(0.5, 0.5, 0.5));

  const ScanConfig r = load_scan_config(data("file_random.cfg"));
  EXPECT_EQ(scan_states(r), scan_states(r));
  for (const Vector3& x : scan_states(r)) EXPECT_LE(x.cwiseAbs().maxCoeff(), 0.8);
  EXPECT_EQ(r.format, OutputFormat::Csv);
  ASSERT_TRUE(r.material_file.has_value());
  EXPECT_FALSE(is_hyperelastic(scan_material(r)));
}

TEST(Scan, HenckyKirchhoffAllPass) {
  const ScanResult r = run_scan(load_scan_config(data("hencky_grid.cfg")), 2);
  EXPECT_EQ(r.exit_code, kExitConsistent);
  EXPECT_TRUE(r.audit.consistent());
  ASSERT_EQ(r.audit.summaries.size(), 2u);
  EXPECT_EQ(r.audit.summaries[1].flavor, StressFlavor::Kirchhoff);
  EXPECT_EQ(r.audit.summaries[1].pass, 125u);
  EXPECT_LE(r.oracles.q1_route_max, 1e-7);
  EXPECT_LE(r.oracles.form_route_max, 1e-6);
  EXPECT_GE(r.oracles.sampling_gap_min, -1e-9);
}

TEST(Scan, NegativeLameFlagsFailStates) {
  const ScanResult r = run_scan(load_scan_config(data("hencky_negative.cfg")));
  EXPECT_EQ(r.exit_code, kExitConsistent);
  EXPECT_EQ(r.audit.summaries[0].fail, 27u);
  const Json j = parse_json(r.body);
  EXPECT_EQ(j["summary"]["flavors"]["tau"]["fail"], 27);
  EXPECT_EQ(j["states"][13]["flavors"]["tau"]["verdict"], "fail");
}

TEST(Scan, DeterministicAcrossRunsAndJobs) {
  const ScanConfig c = load_scan_config(data("hencky_grid.cfg"));
  const std::string a = run_scan(c, 1).body;
  EXPECT_EQ(a, run_scan(c, 1).body);
  EXPECT_EQ(a, run_scan(c, 4).body);
}

TEST(Report, SchemaAndNumberFormat) {
  const ScanResult r = run_scan(load_scan_config(data("hencky_negative.cfg")));
  const Json j = parse_json(r.body);
  EXPECT_EQ(j["schema"], kReportSchema);
  EXPECT_TRUE(j.contains("config") && j.contains("states") && j.contains("summary") && j.contains("oracles"));
  EXPECT_FALSE(j["config"].contains("jobs"));
  // e^0.2 needs all 17 digits to round-trip.
  EXPECT_NE(r.body.find("1.2214027581601699"), std::string::npos);
}

TEST(Report, RoundTripIsByteStable) {
  const std::string body = run_scan(load_scan_config(data("hencky_grid.cfg"))).body;
  const std::string again = dump_json(parse_json(body));
  EXPECT_EQ(body, again);
  EXPECT_EQ(dump_json(parse_json(again)), again);
}

TEST(Report, NonFiniteIsNull) {
  Json j;
  j["a"] = std::numeric_limits<double>::infinity();
  j["b"] = 0.1;
  const std::string s = dump_json(j);
  EXPECT_NE(s.find("null"), std::string::npos);
  EXPECT_NE(s.find("0.10000000000000001"), std::string::npos);
  EXPECT_THROW(parse_json("{"), SchemaError);
}

TEST(Report, Csv) {
  const ScanResult r = run_scan(load_scan_config(data("file_random.cfg")));
  std::istringstream in(r.body);
  std::string header, line;
  std::getline(in, header);
  EXPECT_EQ(header.rfind("index,x1,x2,x3,", 0), 0u);
  EXPECT_NE(header.find("verdict_tau"), std::string::npos);
  const auto columns = std::count(header.begin(), header.end(), ',');
  int rows = 0;
  while (std::getline(in, line)) {
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), columns);
    ++rows;
  }
  EXPECT_EQ(rows, 20);
}

TEST(Io, AtomicWrite) {
  TempDir dir;
  const fs::path p = dir.path() / "out.json";
  write_file_atomically(p, "first");
  write_file_atomically(p, "second");
  EXPECT_EQ(read_file(p), "second");
  EXPECT_FALSE(fs::exists(p.string() + ".tmp"));
  EXPECT_THROW(write_file_atomically(dir.path() / "missing" / "out.json", "x"), IoError);
  EXPECT_FALSE(fs::exists(dir.path() / "missing"));
}

TEST(Verify, DefaultSeedPasses) {
  const VerifySummary s = run_verify();
  EXPECT_TRUE(s.passed());
  ASSERT_EQ(s.suites.size(), verify_suite_names().size());
  ASSERT_TRUE(s.kirchhoff.has_value());
  EXPECT_EQ(s.kirchhoff->factor, KirchhoffFactor::One);
  for (const SuiteResult& suite : s.suites) {
    for (const CheckResult& c : suite.checks) EXPECT_TRUE(c.passed) << suite.name << ": " << c.name;
  }
}

TEST(Verify, SingleSuite) {
  const VerifySummary s = run_verify({.suite = "zj"});
  ASSERT_EQ(s.suites.size(), 1u);
  EXPECT_EQ(s.suites[0].name, "zj");
  EXPECT_TRUE(s.passed());
}

TEST(Verify, MutationFailsLoudly) {
  const VerifySummary s = run_verify({.suite = "quadform", .mutate_q2_sign = true});
  EXPECT_FALSE(s.passed());
  int failed = 0;
  for (const CheckResult& c : s.suites[0].checks) failed += !c.passed;
  EXPECT_GE(failed, 2);
}

TEST(Verify, UnknownSuite) { EXPECT_THROW(run_verify({.suite = "nope"}), Error); }

TEST(Cli, ExitCodes) {
  if (!fs::exists(env_or("COROSTAB_CLI", COROSTAB_DEFAULT_CLI))) GTEST_SKIP() << "command-line tool not built";
  TempDir dir;
  EXPECT_EQ(run_cli("eval --law hencky --param mu=1 --param lam=1 --stretch 2,1,1"), 0);
  EXPECT_EQ(run_cli("eval --law hencky --param mu=1 --stretch 2,1,1"), 1);
  EXPECT_EQ(run_cli("check-material " + data("hencky_custom.mat").string()), 0);
  EXPECT_EQ(run_cli("check-material " + data("swapped_stress.mat").string()), 1);
  const fs::path out = dir.path() / "r.json";
  EXPECT_EQ(run_cli("scan --config " + data("hencky_negative.cfg").string() + " --out " + out.string()), 0);
  EXPECT_EQ(parse_json(read_file(out))["schema"], 1);
  EXPECT_EQ(run_cli("scan --config " + data("nope.cfg").string() + " --out " + out.string()), 1);
  EXPECT_EQ(run_cli("verify --suite zj"), 0);
  EXPECT_EQ(run_cli("verify --suite quadform --mutate-q2-sign"), 2);
  EXPECT_EQ(run_cli("verify --suite nope"), 1);
}
