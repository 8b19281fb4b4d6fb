#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include "mhm/harness/suites.hpp"
#include "mhm/harness/table.hpp"
#include "oracle.hpp"

using namespace mhm;

namespace {

std::string chordal_table_text(std::size_t n) {
  std::ostringstream out;
  write_chordal_table(out, n);
  return out.str();
}

Errc parse_error(const std::string& text, std::string* message = nullptr) {
  std::istringstream in(text);
  try {
    parse_table(in, "t");
  } catch (const Error& e) {
    if (message) *message = e.what();
    return e.code();
  }
  ADD_FAILURE() << "table parsed";
  return Errc::config;
}

// Replaces the k-th whitespace token after the header.
std::string with_entry(std::string text, std::size_t k, const std::string& token) {
  std::istringstream in(text);
  std::string header, tok;
  std::getline(in, header);
  std::ostringstream out;
  out << header << "\n";
  std::size_t i = 0;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    bool first = true;
    while (ls >> tok) {
      out << (first ? "" : " ") << (i++ == k ? token : tok);
      first = false;
    }
    out << "\n";
  }
  return out.str();
}

class ThreadsEnv : public ::testing::Test {
 protected:
  void SetUp() override {
    if (const char* v = std::getenv("MHM_THREADS")) saved_ = v;
  }
  void TearDown() override {
    if (saved_) {
      setenv("MHM_THREADS", saved_->c_str(), 1);
    } else {
      unsetenv("MHM_THREADS");
    }
  }
  std::optional<std::string> saved_;
};

ExperimentConfig quick(const std::string& suite, std::int64_t samples = 50) {
  ExperimentConfig cfg;
  cfg.suite = suite;
  cfg.samples = samples;
  cfg.seed = 11;
  return cfg;
}

}  // namespace

TEST(Sampling, Postconditions) {
  const MoebiusStructure m = canonical_structure();
  Rng rng(5);
  for (int i = 0; i < 300; ++i) {
    const Tetrad t = sample_separating(rng);
    EXPECT_TRUE(separates(PointPair(t.x, t.y), PointPair(t.z, t.u)));
    const auto [a, b] = sample_strong_causal(rng);
    EXPECT_TRUE(strong_causal(a, b));
    const HarmonicPair h = sample_harmonic(m, rng);
    EXPECT_LE(harmonic_defect(m, h.left, h.right), kHarmonicTol);
    for (CirclePoint p : {h.left.p(), h.left.q()})
      for (CirclePoint q : {h.right.p(), h.right.q()}) EXPECT_GE(angular_distance(p, q), kMinSeparation);
  }
}

TEST(Sampling, StreamsAreReproducible) {
  Rng a = Rng::stream(3, 17), b = Rng::stream(3, 17), c = Rng::stream(3, 18);
  const double x = a.uniform();
  EXPECT_EQ(x, b.uniform());
  EXPECT_NE(x, c.uniform());
  EXPECT_EQ(parse_sample_kind("strip"), SampleKind::strip);
  EXPECT_THROW(parse_sample_kind("nope"), Error);
}

TEST(Sampling, PerturbationStaysHarmonicAndNear) {
  const MoebiusStructure m = canonical_structure();
  Rng rng(9);
  for (int i = 0; i < 50; ++i) {
    const HarmonicPair q = sample_harmonic(m, rng, 0.05);
    const HarmonicPair q2 = perturb_harmonic(m, q, 1e-4, rng);
    EXPECT_LE(harmonic_defect(m, q2.left, q2.right), kHarmonicTol);
    EXPECT_LT(chart_displacement(m, q, q2), 1e-2);
    EXPECT_EQ(chart_displacement(m, q, q), 0.0);
  }
}

TEST(Table, ChordalTableReproducesCanonicalStructure) {
  std::istringstream in(chordal_table_text(256));
  const TableStructure t = parse_table(in);
  EXPECT_EQ(t.size(), 256u);
  Rng rng(2);
  for (int i = 0; i < 200; ++i) {
    const CirclePoint x(rng.angle()), y(rng.angle());
    EXPECT_NEAR(t.distance(x, y), CanonicalStructure{}.distance(x, y), 1e-12);
  }
  EXPECT_EQ(t.distance(CirclePoint(1.0), CirclePoint(1.0)), 0.0);
}

TEST(Table, ChordalTableAlphaMatchesCanonical) {
  const std::string path = ::testing::TempDir() + "chordal256.tbl";
  {
    std::ofstream f(path);
    write_chordal_table(f, 256);
  }
  const MoebiusStructure m = make_structure("table:" + path);
  const AxiomParams p{0.5, kHarmonicTol, 5000, 3};
  EXPECT_NEAR(estimate_max_alpha(m, p), estimate_max_alpha(canonical_structure(), p), 1e-3);
}

TEST(Table, RejectsMalformedInput) {
  const std::string good = chordal_table_text(64);
  std::string msg;
  EXPECT_EQ(parse_error("mhm-table v2 64\n"), Errc::format);
  EXPECT_EQ(parse_error("table v1 64\n"), Errc::format);
  EXPECT_EQ(parse_error(""), Errc::format);
  EXPECT_EQ(parse_error("mhm-table v1 64 extra\n"), Errc::format);
  EXPECT_EQ(parse_error("mhm-table v1 8\n", &msg), Errc::format);
  EXPECT_NE(msg.find("below 64"), std::string::npos);

  EXPECT_EQ(parse_error(with_entry(good, 1, "-0.5"), &msg), Errc::format);
  EXPECT_NE(msg.find("t:2:"), std::string::npos) << msg;
  EXPECT_NE(msg.find("nonnegative"), std::string::npos);

  EXPECT_EQ(parse_error(with_entry(good, 64, "0.1"), &msg), Errc::format);  // (1, 0) vs (0, 1)
  EXPECT_NE(msg.find("symmetry"), std::string::npos);
  EXPECT_NE(msg.find("t:3:"), std::string::npos) << msg;

  EXPECT_EQ(parse_error(with_entry(good, 0, "1"), &msg), Errc::format);
  EXPECT_NE(msg.find("diagonal"), std::string::npos);
  EXPECT_EQ(parse_error(with_entry(good, 5, "abc"), &msg), Errc::format);
  EXPECT_NE(msg.find("not a number"), std::string::npos);
  EXPECT_EQ(parse_error(with_entry(good, 5, "nan"), &msg), Errc::format);

  EXPECT_EQ(parse_error(good.substr(0, good.rfind(' ')) + "\n", &msg), Errc::format);
  EXPECT_NE(msg.find("expected 4096 entries"), std::string::npos);
  EXPECT_EQ(parse_error(good + "1\n", &msg), Errc::format);
}

TEST(StructureSpec, ParsesKnownForms) {
  EXPECT_EQ(make_structure("canonical").label(), "canonical");
  const MoebiusStructure s = make_structure("snowflake:0.5");
  const CirclePoint a(0.0), b(std::numbers::pi);
  EXPECT_NEAR(s.distance(a, b), std::sqrt(2.0), 1e-12);
  for (const char* bad : {"snowflake:", "snowflake:x", "snowflake:1.5", "snowflake:0", "table:", "hyperbolic"}) {
    try {
      make_structure(bad);
      ADD_FAILURE() << bad;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::config) << bad;
    }
  }
  try {
    make_structure("table:/nonexistent/file.tbl");
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::structure_load);
  }
}

TEST_F(ThreadsEnv, ThreadCountFromEnvironment) {
  setenv("MHM_THREADS", "3", 1);
  EXPECT_EQ(thread_count(), 3u);
  for (const char* bad : {"0", "-2", "two", "4x"}) {
    setenv("MHM_THREADS", bad, 1);
    EXPECT_THROW(thread_count(), Error) << bad;
  }
  unsetenv("MHM_THREADS");
  EXPECT_GE(thread_count(), 1u);
}

TEST(Parallel, ResultsInIndexOrderForAnyThreadCount) {
  for (unsigned t : {1u, 2u, 7u, 64u}) {
    const auto v = parallel_map<std::int64_t>(37, [](std::int64_t i) { return i * i; }, t);
    ASSERT_EQ(v.size(), 37u);
    for (std::int64_t i = 0; i < 37; ++i) EXPECT_EQ(v[i], i * i);
  }
  EXPECT_TRUE(parallel_map<int>(0, [](std::int64_t) { return 1; }, 4).empty());
  EXPECT_THROW(parallel_map<int>(
                   10, [](std::int64_t i) -> int { if (i == 6) throw Error(Errc::config, "boom"); return 0; }, 3),
               Error);
}

TEST(Report, JsonShapeAndInfinityToken) {
  Report rep;
  rep.config = Json{{"suite", "x"}};
  rep.summary.checks = 2;
  rep.summary.violations = 1;
  rep.summary.min_slack = -0.25;
  rep.records.push_back({0, "c", Json{{"p", point_json(CirclePoint(std::numbers::pi), CirclePoint(std::numbers::pi))}},
                         Json{{"v", 1.5}}, 0.5, true});
  rep.records.push_back({1, "c", Json::object(), Json{{"v", number(HUGE_VAL)}}, -0.25, false});
  const Json j = Json::parse(report_json_text(rep));
  ASSERT_TRUE(j.is_object());
  std::vector<std::string> keys;
  for (const auto& [k, v] : j.items()) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"config", "summary", "records", "version"}));
  EXPECT_EQ(j["version"], kVersion);
  EXPECT_EQ(j["summary"]["passed"], false);
  EXPECT_EQ(j["records"][0]["inputs"]["p"]["chart"], "inf");
  EXPECT_EQ(j["records"][1]["values"]["v"], "inf");
  EXPECT_EQ(decimal(0.1), "0.1");
  EXPECT_EQ(decimal(-HUGE_VAL), "-inf");
}

TEST(Report, CsvFlattensRecords) {
  Report rep;
  rep.records.push_back({0, "a", Json{{"x", Json::array({1.25, "inf"})}}, Json{{"s", "u,v"}}, 0.0, true});
  rep.records.push_back({3, "b", Json::object(), Json{{"t", 2}}, -1.0, false});
  const std::string csv = report_csv_text(rep);
  std::istringstream in(csv);
  std::string header, r0, r1;
  std::getline(in, header);
  std::getline(in, r0);
  std::getline(in, r1);
  EXPECT_EQ(header, "index,check,pass,slack,inputs.x.0,inputs.x.1,values.s,values.t");
  EXPECT_EQ(r0, "0,a,true,0,1.25,inf,\"u,v\",");
  EXPECT_EQ(r1, "3,b,false,-1,,,,2");
}

TEST(Runner, ValidatesConfig) {
  const auto code = [](ExperimentConfig cfg) {
    try {
      run_suite(cfg);
    } catch (const Error& e) {
      return e.code();
    }
    return Errc::boundary;
  };
  ExperimentConfig cfg = quick("axioms");
  cfg.samples = 0;
  EXPECT_EQ(code(cfg), Errc::config);
  cfg = quick("axioms");
  cfg.alpha = 1.0;
  EXPECT_EQ(code(cfg), Errc::config);
  cfg = quick("axioms");
  cfg.epsilon = 0.1;
  EXPECT_EQ(code(cfg), Errc::config);
  cfg = quick("axioms");
  cfg.tol = -1.0;
  EXPECT_EQ(code(cfg), Errc::config);
  EXPECT_EQ(code(quick("no-such-suite")), Errc::config);
  cfg = quick("axioms");
  cfg.structure = "snowflake:2";
  EXPECT_EQ(code(cfg), Errc::config);
}

TEST(Runner, ReportsAreIdenticalAcrossRunsAndThreadCounts) {
  for (const char* suite : {"axioms", "rho-involution", "perpendicular", "parabolic-shift"}) {
    ExperimentConfig cfg = quick(suite, 40);
    cfg.threads = 1;
    const std::string one = report_json_text(run_suite(cfg));
    cfg.threads = 4;
    EXPECT_EQ(report_json_text(run_suite(cfg)), one) << suite;
    EXPECT_EQ(report_json_text(run_suite(cfg)), one) << suite;
    cfg.seed = 12;
    EXPECT_NE(report_json_text(run_suite(cfg)), one) << suite;
  }
}

TEST(Runner, RecordLimitsAndReproducibleIndices) {
  ExperimentConfig cfg = quick("rho-involution", 30);
  cfg.record_limit = 5;
  const Report rep = run_suite(cfg);
  EXPECT_TRUE(rep.passed());
  EXPECT_GT(rep.summary.checks, 30);
  for (const auto& r : rep.records) EXPECT_LT(r.index, 5);
  // the detailed record of sample 3 is the same whether it runs alone or not
  cfg.record_limit = 30;
  const Report full = run_suite(cfg);
  std::vector<Json> a, b;
  for (const auto& r : rep.records)
    if (r.index == 3) a.push_back(record_json(r));
  for (const auto& r : full.records)
    if (r.index == 3) b.push_back(record_json(r));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, b);
}

TEST(Runner, FailuresAreRecordedAndCounted) {
  // snowflake structures violate M(alpha) for every alpha > 0
  ExperimentConfig cfg = quick("axioms", 400);
  cfg.structure = "snowflake:0.5";
  cfg.alpha = 0.9;
  cfg.record_limit = 0;
  const Report rep = run_suite(cfg);
  EXPECT_FALSE(rep.passed());
  EXPECT_LT(rep.summary.min_slack, 0.0);
  ASSERT_FALSE(rep.records.empty());
  bool any_failed = false;
  for (const auto& r : rep.records) any_failed = any_failed || !r.pass;
  EXPECT_TRUE(any_failed);
}

TEST(Runner, FuzzCombinesQuickSuites) {
  ExperimentConfig cfg = quick("", 20);
  cfg.record_limit = 1;
  const Report rep = run_fuzz(canonical_structure(), cfg);
  EXPECT_TRUE(rep.passed());
  const Json j = to_json(rep);
  EXPECT_EQ(j["config"]["suite"], "fuzz");
  EXPECT_EQ(j["config"]["tol"], "suite default");
  EXPECT_EQ(j["summary"]["suites"].size(), kFuzzSuites.size());
  for (const auto& r : rep.records) EXPECT_NE(r.check.find('/'), std::string::npos);
}

TEST(Runner, EverySuiteRunsOnTheCanonicalStructure) {
  for (const auto& def : suite_registry()) {
    ExperimentConfig cfg = quick(def.name, 3);
    const Report rep = run_suite(cfg);
    EXPECT_TRUE(rep.passed()) << def.name;
    EXPECT_GT(rep.summary.checks, 0) << def.name;
  }
}
