// mhm: command line front end for the Moebius-structure library and its
// experiment suites. Exit status: 0 pass, 1 check failure, 2 usage error.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mhm/harness/suites.hpp"
#include "mhm/harness/table.hpp"
#include "mhm/mhm.hpp"

namespace {

using namespace mhm;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string structure = "canonical";
  std::uint64_t seed = 1;
  std::int64_t samples = 1000;
  double alpha = 0.5;
  double epsilon = 1.0 / 32.0;
  std::optional<double> tol;
  std::string out;
  std::string format = "json";
  std::string chart_omega = "3.141592653589793";
  int budget = DeltaBudget{}.evaluations;
};

/// Radians, or "c:<value>" / "c:inf" in the chart at omega.
CirclePoint parse_point(const std::string& s, CirclePoint omega) {
  const auto number = [&](const std::string& t) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(t, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != t.size()) throw Error(Errc::config, "cannot read point '" + s + "'");
    return v;
  };
  if (s.rfind("c:", 0) == 0) {
    const std::string c = s.substr(2);
    if (c == "inf" || c == "-inf") return omega;
    const double v = number(c);
    if (!std::isfinite(v)) throw Error(Errc::config, "chart coordinate must be finite or 'inf': '" + s + "'");
    return CirclePoint::from_chart(v, omega);
  }
  const double v = number(s);
  if (!std::isfinite(v)) throw Error(Errc::config, "angle must be finite: '" + s + "'");
  return CirclePoint(v);
}

std::vector<CirclePoint> parse_points(const std::vector<std::string>& v, CirclePoint omega) {
  std::vector<CirclePoint> out;
  for (const auto& s : v) out.push_back(parse_point(s, omega));
  return out;
}

PointPair make_pair(CirclePoint a, CirclePoint b, const char* what) {
  if (same_point(a, b)) throw Error(Errc::degenerate_tuple, std::string(what) + ": the two points coincide");
  return PointPair(a, b);
}

void emit(const Report& rep, const Globals& g) {
  const std::string text = g.format == "csv" ? report_csv_text(rep) : report_json_text(rep);
  if (g.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(g.out, std::ios::binary);
  if (!f) throw Error(Errc::config, "cannot write '" + g.out + "'");
  f << text;
  if (!f) throw Error(Errc::config, "failed writing '" + g.out + "'");
}

ExperimentConfig experiment(const Globals& g, const std::string& suite, double omega) {
  ExperimentConfig cfg;
  cfg.structure = g.structure;
  cfg.suite = suite;
  cfg.samples = g.samples;
  cfg.seed = g.seed;
  cfg.alpha = g.alpha;
  cfg.epsilon = g.epsilon;
  cfg.tol = g.tol;
  cfg.budget = g.budget;
  cfg.chart_omega = omega;
  return cfg;
}

/// A one-record report for the point computations.
Report single(const Globals& g, const std::string& command, double omega, Json inputs, Json values, bool pass = true) {
  Report rep;
  rep.config = Json{{"structure", g.structure}, {"command", command}, {"chart_omega", omega}};
  rep.summary.checks = 1;
  rep.summary.violations = pass ? 0 : 1;
  rep.summary.min_slack = 0.0;
  rep.records.push_back({0, command, std::move(inputs), std::move(values), 0.0, pass});
  return rep;
}

int exit_code_for(Errc e) {
  switch (e) {
    case Errc::no_convergence:
    case Errc::no_separating_sample:
      return kExitFail;
    default:
      return kExitUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Moebius structures on the circle: harmonic pairs, lines, strips and the zig-zag distance"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--structure", g.structure, "canonical | snowflake:<p> | table:<file>")->capture_default_str();
  app.add_option("--seed", g.seed, "RNG seed")->capture_default_str();
  app.add_option("--samples", g.samples, "samples per suite")->capture_default_str();
  app.add_option("--alpha", g.alpha, "axiom parameter alpha in (0,1)")->capture_default_str();
  app.add_option("--epsilon", g.epsilon, "neighborhood size in (0,1/16]")->capture_default_str();
  app.add_option("--tol", g.tol, "override the check tolerance");
  app.add_option("--budget", g.budget, "delta refinement evaluations")->capture_default_str();
  app.add_option("--out", g.out, "write the report here instead of stdout");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--chart-omega", g.chart_omega, "remote point of the I/O chart (radians)")->capture_default_str();

  auto* check_axioms = app.add_subcommand("check-axioms", "Ptolemy and M(alpha) slacks with an alpha estimate");

  auto* rho_cmd = app.add_subcommand("rho", "reflection rho_a(x)");
  std::vector<std::string> rho_axis;
  std::string rho_point;
  rho_cmd->add_option("--axis", rho_axis, "two points of the axis")->expected(2)->required();
  rho_cmd->add_option("--point", rho_point, "point to reflect")->required();

  auto* perp_cmd = app.add_subcommand("perp", "common perpendicular of two strongly causal pairs");
  std::vector<std::string> perp_b, perp_b2;
  perp_cmd->add_option("--pair", perp_b, "first pair")->expected(2)->required();
  perp_cmd->add_option("--pair2", perp_b2, "second pair")->expected(2)->required();

  auto* delta_cmd = app.add_subcommand("delta", "zig-zag distance bounds between two harmonic pairs");
  std::vector<std::string> dq, dq2;
  delta_cmd->add_option("--q", dq, "x y v w with (x,y), (v,w) harmonic")->expected(4)->required();
  delta_cmd->add_option("--q2", dq2, "second harmonic pair")->expected(4)->required();

  auto* verify_cmd = app.add_subcommand("verify", "run one experiment suite");
  std::string suite_name;
  verify_cmd->add_option("--suite", suite_name, "suite name")->required();

  auto* fuzz_cmd = app.add_subcommand("fuzz", "run the quick suites together");
  auto* list_cmd = app.add_subcommand("list-suites", "print the suite names");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    const double omega_angle = parse_point(g.chart_omega, CirclePoint(std::numbers::pi)).theta();
    const CirclePoint omega(omega_angle);

    if (list_cmd->parsed()) {
      for (const auto& d : suite_registry()) std::cout << d.name << "  " << d.about << "\n";
      return kExitPass;
    }
    if (check_axioms->parsed() || verify_cmd->parsed()) {
      const Report rep = run_suite(experiment(g, check_axioms->parsed() ? "axioms" : suite_name, omega_angle));
      emit(rep, g);
      return rep.passed() ? kExitPass : kExitFail;
    }
    if (fuzz_cmd->parsed()) {
      ExperimentConfig cfg = experiment(g, "fuzz", omega_angle);
      validate(cfg);
      const Report rep = run_fuzz(make_structure(cfg.structure), cfg);
      emit(rep, g);
      return rep.passed() ? kExitPass : kExitFail;
    }

    const MoebiusStructure m = make_structure(g.structure);
    if (rho_cmd->parsed()) {
      const auto ax = parse_points(rho_axis, omega);
      const PointPair a = make_pair(ax[0], ax[1], "--axis");
      const CirclePoint x = parse_point(rho_point, omega);
      const CirclePoint y = rho(m, a, x);
      emit(single(g, "rho", omega_angle, Json{{"axis", pair_json(a, omega)}, {"x", point_json(x, omega)}},
                  Json{{"rho", point_json(y, omega)}, {"harmonic_defect", a.has_endpoint(x) ? 0.0 : harmonic_defect(m, a, PointPair(x, y))}}),
           g);
      return kExitPass;
    }
    if (perp_cmd->parsed()) {
      const auto b = parse_points(perp_b, omega), b2 = parse_points(perp_b2, omega);
      const PointPair p1 = make_pair(b[0], b[1], "--pair"), p2 = make_pair(b2[0], b2[1], "--pair2");
      const Perpendicular s = common_perpendicular(m, p1, p2);
      emit(single(g, "perp", omega_angle, Json{{"pair", pair_json(p1, omega)}, {"pair2", pair_json(p2, omega)}},
                  Json{{"v", point_json(s.v, omega)},
                       {"w", point_json(s.w, omega)},
                       {"defect_pair", harmonic_defect(m, s.pair(), p1)},
                       {"defect_pair2", harmonic_defect(m, s.pair(), p2)}}),
           g);
      return kExitPass;
    }
    if (delta_cmd->parsed()) {
      const double htol = g.tol.value_or(kHarmonicTol);
      const auto read = [&](const std::vector<std::string>& v, const char* what) {
        const auto p = parse_points(v, omega);
        const HarmonicPair q{make_pair(p[0], p[1], what), make_pair(p[2], p[3], what)};
        const double defect = harmonic_defect(m, q.left, q.right);
        if (!(defect <= htol)) {
          throw Error(Errc::config, std::string(what) + " is not harmonic (defect " + decimal(defect) + ")");
        }
        return q;
      };
      const HarmonicPair q = read(dq, "--q"), q2 = read(dq2, "--q2");
      const CertificateParams cp{g.alpha, g.epsilon};
      if (!cp.applicable()) throw Error(Errc::config, "certificate needs alpha in (0,1) and epsilon in (0,1/16]");
      const DeltaEstimate est = delta_upper_path(m, q, q2, DeltaBudget{g.budget});
      const auto cert = delta_lower_certificate(m, q, q2, cp);
      Json path = Json::array();
      for (const auto& v : est.path.vertices) {
        path.push_back(Json{{"left", pair_json(v.left, omega)}, {"right", pair_json(v.right, omega)}});
      }
      const bool ok = cert && *cert <= est.length;
      emit(single(g, "delta", omega_angle,
                  Json{{"q", Json{{"left", pair_json(q.left, omega)}, {"right", pair_json(q.right, omega)}}},
                       {"q2", Json{{"left", pair_json(q2.left, omega)}, {"right", pair_json(q2.right, omega)}}},
                       {"alpha", cp.alpha},
                       {"epsilon", cp.epsilon},
                       {"budget", g.budget}},
                  Json{{"upper", est.length},
                       {"certificate", cert ? number(*cert) : Json(nullptr)},
                       {"displacement", chart_displacement(m, q, q2)},
                       {"sides", est.path.sides()},
                       {"path", path}},
                  ok),
           g);
      return ok ? kExitPass : kExitFail;
    }
  } catch (const Error& e) {
    std::cerr << "mhm: " << errc_name(e.code()) << ": " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "mhm: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
