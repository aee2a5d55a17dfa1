// owk: command-line front end.

#include <chrono>
#include <cmath>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "owk/errors.hpp"
#include "owk/io.hpp"
#include "owk/verify.hpp"

using namespace owk;

namespace {

struct Globals {
  double p = 1.0 / 3.0;
  std::string form = "published";
  std::uint64_t seed = 1;
  std::string config;
  std::string output;
  std::string format;
  QuadratureSpec spec;
};

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  // "a,b,c" or "a:b" (inclusive range)
  std::vector<std::int64_t> out;
  const auto colon = s.find(':');
  try {
    if (colon != std::string::npos) {
      const long long a = std::stoll(s.substr(0, colon)), b = std::stoll(s.substr(colon + 1));
      if (b < a || b - a > 1000000) throw ValidationError("bad range");
      for (long long v = a; v <= b; ++v) out.push_back(v);
      return out;
    }
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  } catch (const std::exception&) {
    throw ValidationError("cannot parse integer list '" + s + "'");
  }
  if (out.empty()) throw ValidationError("empty integer list");
  return out;
}

RunConfig make_config(const Globals& g, const std::string& default_format, const CLI::App& app,
                      std::optional<CfModel> model_default = std::nullopt) {
  RunConfig c;
  c.model = {g.p, parse_form(g.form)};
  if (model_default && app.count("--p") == 0 && app.count("--form") == 0) c.model = *model_default;
  c.spec = g.spec;
  c.seed = g.seed;
  c.output = g.output;
  c.format = g.format.empty() ? default_format : g.format;
  if (!g.config.empty()) {
    json j;
    try {
      j = json::parse(read_file(g.config));
    } catch (const json::exception& e) {
      throw ValidationError("config " + g.config + ": " + e.what());
    }
    c.merge(j);
  }
  c.walk.p = c.model.p;
  c.validate();
  return c;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green functions, hitting laws and Martin kernels of the half-plane oriented lattice walk"};
  app.require_subcommand(1);
  Globals g;
  auto add_globals = [&](CLI::App* sc) {
    sc->add_option("--p", g.p, "geometric parameter of the characteristic function");
    sc->add_option("--form", g.form, "characteristic function form: published | lattice");
    sc->add_option("--seed", g.seed, "Monte Carlo seed");
    sc->add_option("--config", g.config, "JSON config; its keys override flags");
    sc->add_option("--output", g.output, "output path (default stdout; manifest goes to <path>.manifest.json)");
    sc->add_option("--format", g.format, "csv | json");
    sc->add_option("--split", g.spec.split, "singular/regular split point");
    sc->add_option("--nodes-singular", g.spec.nodes_singular);
    sc->add_option("--nodes-regular", g.spec.nodes_regular);
    sc->add_option("--abs-tol", g.spec.abs_tol);
    sc->add_option("--rel-tol", g.spec.rel_tol);
    sc->add_option("--max-panels", g.spec.max_panels);
  };

  auto* phi = app.add_subcommand("phi", "characteristic function of the axis displacement on a grid of (0, pi]");
  int grid = 100;
  std::string closed_variant = "published";
  phi->add_option("--grid", grid, "number of points");
  phi->add_option("--closed", closed_variant, "closed-form variant: published | corrected");
  add_globals(phi);

  auto* gam = app.add_subcommand("gamma", "gamma(x) and the embedded Green function");
  std::string xs = "0:10";
  gam->add_option("--x", xs, "list a,b,c or range a:b");
  add_globals(gam);

  auto* green = app.add_subcommand("green", "half-plane Green integral and lattice Green function");
  std::int64_t z = 0;
  std::vector<std::string> ys;
  green->add_option("--z", z, "axis start z");
  green->add_option("--y", ys, "target y1,y2 (repeatable)")->required();
  add_globals(green);

  auto* nu = app.add_subcommand("nu", "law of the first axis point reached from y");
  std::string nu_y;
  double tail = 1e-3;
  nu->add_option("--y", nu_y, "start y1,y2")->required();
  nu->add_option("--tail", tail, "excluded mass bound");
  add_globals(nu);

  auto* mu = app.add_subcommand("mu", "height law at the first visit to column y1");
  std::string mu_x;
  std::int64_t mu_y1 = 0, umax = 50;
  std::string mu_variant = "lattice";
  mu->add_option("--x", mu_x, "start x1,x2")->required();
  mu->add_option("--y1", mu_y1, "column")->required();
  mu->add_option("--umax", umax, "largest height");
  mu->add_option("--variant", mu_variant, "lattice | published");
  add_globals(mu);

  auto* sim = app.add_subcommand("simulate", "excursions from x until the first return to the axis");
  std::string sim_x = "0,0";
  std::int64_t episodes = 10000, horizon = 100000;
  sim->add_option("--x", sim_x, "start x1,x2");
  sim->add_option("--episodes", episodes);
  sim->add_option("--horizon", horizon);
  add_globals(sim);

  auto* mart = app.add_subcommand("martin", "Martin kernel along direction sweeps");
  std::string m_x = "2,3";
  std::vector<std::string> sweeps;
  double m_tail = 1e-8, max_norm = 1000.0;
  std::int64_t mc_budget = 1000000;
  mart->add_option("--x", m_x, "start x1,x2");
  mart->add_option("--sweep", sweeps, "lambda=<v> | horizontal[=<exponent>] | vertical[=<y1>] (repeatable)");
  mart->add_option("--tail", m_tail, "tail tolerance recorded with the report (the averaged kernel is closed form)");
  mart->add_option("--max-norm", max_norm, "|y| at the end of each sweep");
  mart->add_option("--mc-budget", mc_budget, "episodes per sweep");
  add_globals(mart);

  auto* ver = app.add_subcommand("verify", "run acceptance checks");
  std::string suite = "all";
  VerifyBudgets budgets;
  ver->add_option("--suite", suite, "cf | embedded | green | full | poisson | all");
  ver->add_option("--mc-budget", budgets.martin_mc, "episodes per Martin sweep");
  ver->add_option("--cf-episodes", budgets.cf_episodes);
  ver->add_option("--hitting-episodes", budgets.hitting_episodes);
  add_globals(ver);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 1;
  }

  const auto t0 = std::chrono::steady_clock::now();
  RunManifest manifest;
  for (int i = 1; i < argc; ++i) {
    if (i > 1) manifest.command += ' ';
    manifest.command += argv[i];
  }
  auto finish = [&](const RunConfig& cfg, const std::string& content) {
    manifest.config = cfg.to_json();
    manifest.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(cfg.output, content, manifest);
  };

  try {
    if (phi->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *phi);
      if (grid < 1) throw ValidationError("--grid must be >= 1");
      const auto variant = closed_variant == "corrected" ? ClosedFormVariant::corrected : ClosedFormVariant::as_published;
      if (closed_variant != "corrected" && closed_variant != "published") throw ValidationError("--closed: published | corrected");
      CsvWriter csv({"t", "phi_prob", "phi_closed", "absdiff"});
      json rows = json::array();
      for (int k = 1; k <= grid; ++k) {
        const double t = std::numbers::pi * k / grid;
        const double a = axis_cf(t, cfg.model);
        const double b = embedded_cf_closed(t, cfg.model.p, variant);
        csv.row({fmt17(t), fmt17(a), fmt17(b), fmt17(std::abs(a - b))});
        rows.push_back({{"t", t}, {"phi_prob", a}, {"phi_closed", b}, {"absdiff", std::abs(a - b)}});
      }
      finish(cfg, cfg.format == "csv" ? csv.str() : dump({{"model", to_json(cfg.model)}, {"rows", rows}}));
    } else if (gam->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *gam);
      CsvWriter csv({"x", "gamma", "sqrtx_gamma", "green"});
      json rows = json::array();
      for (std::int64_t x : parse_int_list(xs)) {
        const double v = gamma(x, cfg.model, cfg.spec);
        const double sv = std::sqrt(std::abs(static_cast<double>(x))) * v;
        csv.row({std::to_string(x), fmt17(v), fmt17(sv), fmt17(v / std::numbers::pi)});
        rows.push_back({{"x", x}, {"gamma", v}, {"sqrtx_gamma", sv}, {"green", v / std::numbers::pi}});
      }
      finish(cfg, cfg.format == "csv" ? csv.str() : dump({{"model", to_json(cfg.model)}, {"normalization", "green = gamma / pi"}, {"rows", rows}}));
    } else if (green->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *green);
      CsvWriter csv({"z", "y1", "y2", "integral", "imag", "green_lattice"});
      json rows = json::array();
      for (const auto& s : ys) {
        const LatticePoint y = parse_point(s);
        const HalfPlaneIntegral r = green_halfplane_detail(z, y, cfg.model, cfg.spec);
        const double gl = green_lattice(z, y, cfg.model, cfg.spec);
        csv.row({std::to_string(z), std::to_string(y.v1), std::to_string(y.v2), fmt17(r.value), fmt17(r.imag), fmt17(gl)});
        rows.push_back({{"z", z}, {"y", to_json(y)}, {"integral", r.value}, {"imag", r.imag}, {"panels", r.panels}, {"green_lattice", gl}});
      }
      finish(cfg, cfg.format == "csv" ? csv.str() : dump({{"model", to_json(cfg.model)}, {"rows", rows}}));
    } else if (nu->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *nu, CfModel::half_plane_walk());
      const LatticePoint y = parse_point(nu_y);
      const ProbabilityTable t = hitting_distribution(y, cfg.model.p, tail);
      CsvWriter csv({"v", "nu_mass"});
      for (std::size_t i = 0; i < t.support.size(); ++i) csv.row({std::to_string(t.support[i]), fmt17(t.masses[i])});
      manifest.diagnostics = {{"tail_bound", t.tail_bound}, {"total", t.total()}};
      finish(cfg, cfg.format == "csv" ? csv.str() : dump({{"y", to_json(y)}, {"p", cfg.model.p}, {"table", to_json(t)}}));
    } else if (mu->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *mu);
      if (mu_variant != "lattice" && mu_variant != "published") throw ValidationError("--variant: lattice | published");
      const auto variant = mu_variant == "lattice" ? MuVariant::lattice : MuVariant::published;
      const LatticePoint x = parse_point(mu_x);
      if (umax < 0) throw ValidationError("--umax must be >= 0");
      CsvWriter csv({"u", "mu"});
      json rows = json::array();
      double total = 0.0;
      for (std::int64_t u = 0; u <= umax; ++u) {
        const double v = owk::mu_x(u, x, mu_y1, cfg.spec, variant);
        total += v;
        csv.row({std::to_string(u), fmt17(v)});
        rows.push_back({{"u", u}, {"mu", v}});
      }
      manifest.diagnostics = {{"sum", total}};
      finish(cfg, cfg.format == "csv" ? csv.str()
                                      : dump({{"x", to_json(x)}, {"y1", mu_y1}, {"variant", mu_variant}, {"sum", total}, {"rows", rows}}));
    } else if (sim->parsed()) {
      const RunConfig cfg = make_config(g, "csv", *sim);
      const LatticePoint x = parse_point(sim_x);
      if (episodes < 1 || horizon < 1) throw ValidationError("--episodes and --horizon must be >= 1");
      CsvWriter csv({"episode_id", "tau1", "x_sigma1", "truncated"});
      MeanAccumulator tau, disp;
      std::int64_t truncated = 0;
      const StreamPlan plan{cfg.seed, 0x5100};
      for (std::int64_t i = 0; i < episodes; ++i) {
        SeededStream rng = plan.episode(i);
        const EpisodeStats s = run_excursion(x, cfg.orientation, cfg.walk, rng, horizon, false);
        csv.row({std::to_string(i), std::to_string(s.tau1), std::to_string(s.x_sigma1), s.truncated ? "1" : "0"});
        if (s.truncated) {
          ++truncated;
        } else {
          tau.add(static_cast<double>(s.tau1));
          disp.add(static_cast<double>(s.x_sigma1));
        }
      }
      const json summary = {{"start", to_json(x)},
                            {"episodes", episodes},
                            {"truncated", truncated},
                            {"mean_tau1", to_json(tau.estimate())},
                            {"mean_x_sigma1", to_json(disp.estimate())}};
      manifest.diagnostics = {{"truncation_rate", static_cast<double>(truncated) / static_cast<double>(episodes)}};
      finish(cfg, cfg.format == "csv" ? csv.str() : dump(summary));
    } else if (mart->parsed()) {
      const RunConfig cfg = make_config(g, "json", *mart, CfModel::half_plane_walk());
      if (!(m_tail > 0.0)) throw ValidationError("--tail must be > 0");
      if (sweeps.empty()) sweeps = {"lambda=0", "lambda=1", "horizontal"};
      std::vector<DirectionSpec> specs;
      for (const auto& s : sweeps) specs.push_back(DirectionSpec::parse(s, max_norm));
      const MartinReport rep =
          boundary_triviality_report(parse_point(m_x), specs, cfg.model, cfg.spec, {mc_budget, cfg.seed, 1000000});
      json j = to_json(rep);
      j["tail_tol"] = m_tail;
      manifest.diagnostics = {{"truncated", rep.truncated}, {"episodes", rep.episodes}};
      finish(cfg, cfg.format == "csv" ? martin_csv(rep) : dump(j));
    } else if (ver->parsed()) {
      const RunConfig cfg = make_config(g, "json", *ver);
      VerifyConfig vc;
      vc.seed = cfg.seed;
      vc.spec = cfg.spec;
      vc.budgets = budgets;
      const SuiteResult res = run_suite(suite, vc);
      json timing = json::array();
      for (const auto& c : res.criteria)
        timing.push_back({{"id", c.id}, {"seconds", c.seconds}, {"time_limit", c.time_limit}});
      manifest.diagnostics = {{"timings", timing}};
      if (cfg.format == "csv") {
        CsvWriter csv({"id", "passed", "measured", "threshold", "name"});
        for (const auto& c : res.criteria)
          csv.row({c.id, c.passed ? "1" : "0", fmt17(c.measured), fmt17(c.threshold), "\"" + c.name + "\""});
        finish(cfg, csv.str());
      } else {
        finish(cfg, dump(to_json(res)));
      }
      for (const auto& c : res.criteria)
        std::cerr << (c.passed ? "PASS " : "FAIL ") << c.id << ' ' << c.name << " measured=" << fmt17(c.measured)
                  << " threshold=" << fmt17(c.threshold) << '\n';
      return res.all_passed() ? 0 : 3;
    }
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 1;
  } catch (const StructuralError& e) {
    std::cerr << "structural error: " << e.what() << '\n';
    return 1;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what();
    if (e.has_partial()) std::cerr << " (partial value " << fmt17(e.partial()) << ")";
    std::cerr << '\n';
    return 2;
  }
  return 0;
}
