#include "favlab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "favlab/emit.hpp"
#include "favlab/error.hpp"
#include "favlab/favard.hpp"
#include "favlab/ifs.hpp"
#include "favlab/lemmas.hpp"
#include "favlab/parallel.hpp"
#include "favlab/shadow.hpp"
#include "favlab/spectral.hpp"
#include "favlab/stacks.hpp"
#include "json.hpp"

namespace favlab::cli {

namespace {

using nlohmann::json;

// Parameter ceilings. Going past one is a cap error (exit 3), not a usage error.
constexpr int kMaxDepth = 64;
constexpr std::uint64_t kMaxTrials = std::uint64_t{1} << 32;
constexpr std::size_t kMaxGrid = std::size_t{1} << 26;
constexpr std::size_t kMaxThetaGrid = std::size_t{1} << 16;

struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string subcommand;
  std::string preset;
  std::string system_file;
  std::optional<int> n;
  std::optional<int> big_n;
  std::optional<std::int64_t> k;
  std::optional<std::int64_t> big_m;
  std::optional<int> m;
  std::optional<int> ell;
  double tau = 0.5;
  double beta = 3.0;
  std::optional<double> theta;
  std::optional<double> t;
  std::optional<std::size_t> grid;
  std::size_t theta_grid = 256;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
  int threads = 0;
  std::string output;
  bool json = false;
  std::string config;
  std::string suite;
  std::string check = "product";
  std::string mode = "products";
  std::optional<double> threshold;
  int refine = 10;
  double tol = 1e-6;
  int l_max = 4;
  std::optional<double> lambda;
  std::optional<double> range;
  std::string fit;
  bool profile = false;
  double limit = 0.0;
};

template <class T>
void take(const json& doc, const char* key, T& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

template <class T>
void take(const json& doc, const char* key, std::optional<T>& field) {
  if (doc.contains(key)) field = doc.at(key).get<T>();
}

// Values in the config file win over the command line.
void apply_config(RunConfig& cfg) {
  std::ifstream in(cfg.config);
  if (!in) raise(ErrorKind::IoError, "cannot open config file '" + cfg.config + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    raise(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
  if (!doc.is_object()) raise(ErrorKind::ParseError, "config: top level must be an object");
  static const std::vector<std::string> known = {
      "preset", "system_file", "n",     "N",      "K",         "M",     "m",      "ell",
      "tau",    "beta",        "theta", "t",      "grid",      "theta_grid", "trials", "seed",
      "threads", "output",     "json",  "suite",  "check",     "mode",  "threshold", "refine",
      "tol",    "l_max",       "lambda", "range", "fit",       "profile", "limit"};
  for (const auto& item : doc.items()) {
    if (std::find(known.begin(), known.end(), item.key()) == known.end()) {
      raise(ErrorKind::ParseError, "config: unknown key '" + item.key() + "'");
    }
  }
  try {
    take(doc, "preset", cfg.preset);
    take(doc, "system_file", cfg.system_file);
    take(doc, "n", cfg.n);
    take(doc, "N", cfg.big_n);
    take(doc, "K", cfg.k);
    take(doc, "M", cfg.big_m);
    take(doc, "m", cfg.m);
    take(doc, "ell", cfg.ell);
    take(doc, "tau", cfg.tau);
    take(doc, "beta", cfg.beta);
    take(doc, "theta", cfg.theta);
    take(doc, "t", cfg.t);
    take(doc, "grid", cfg.grid);
    take(doc, "theta_grid", cfg.theta_grid);
    take(doc, "trials", cfg.trials);
    take(doc, "seed", cfg.seed);
    take(doc, "threads", cfg.threads);
    take(doc, "output", cfg.output);
    take(doc, "json", cfg.json);
    take(doc, "suite", cfg.suite);
    take(doc, "check", cfg.check);
    take(doc, "mode", cfg.mode);
    take(doc, "threshold", cfg.threshold);
    take(doc, "refine", cfg.refine);
    take(doc, "tol", cfg.tol);
    take(doc, "l_max", cfg.l_max);
    take(doc, "lambda", cfg.lambda);
    take(doc, "range", cfg.range);
    take(doc, "fit", cfg.fit);
    take(doc, "profile", cfg.profile);
    take(doc, "limit", cfg.limit);
  } catch (const json::exception& e) {
    raise(ErrorKind::ParseError, std::string("config: ") + e.what());
  }
}

void check_caps(const RunConfig& cfg) {
  auto depth_ok = [](const std::optional<int>& v) { return !v || *v <= kMaxDepth; };
  // For the ergodic sampler --N is a sample count, capped by the sampler itself.
  const bool n_is_count = cfg.subcommand == "spectral" && cfg.mode == "ergodic";
  if (!depth_ok(cfg.n) || (!n_is_count && !depth_ok(cfg.big_n))) {
    throw CapExceeded("depth above " + std::to_string(kMaxDepth));
  }
  if (cfg.trials && *cfg.trials > kMaxTrials) throw CapExceeded("trials above 2^32");
  if (cfg.grid && *cfg.grid > kMaxGrid) throw CapExceeded("grid above 2^26");
  if (cfg.theta_grid > kMaxThetaGrid) throw CapExceeded("theta grid above 2^16");
  if (cfg.refine > 20) throw CapExceeded("refinement limit above 20");
  if (cfg.l_max > 16) throw CapExceeded("l_max above 16");
}

int require(const std::optional<int>& v, const char* flag) {
  if (!v) throw UsageError(std::string("missing ") + flag);
  return *v;
}

std::uint64_t require_seed(const RunConfig& cfg) {
  if (!cfg.seed) throw UsageError("--seed is required for " + cfg.subcommand);
  return *cfg.seed;
}

SimilaritySystem load(const RunConfig& cfg) {
  if (!cfg.preset.empty() && !cfg.system_file.empty()) {
    throw UsageError("give either --preset or --system-file, not both");
  }
  if (!cfg.system_file.empty()) return load_system_file(cfg.system_file);
  if (cfg.preset.empty()) throw UsageError("missing --preset or --system-file");
  return preset(cfg.preset);
}

Direction direction_of(const RunConfig& cfg) {
  if (cfg.t && cfg.theta) throw UsageError("give either --theta or --t, not both");
  if (cfg.t) return Direction::slope(*cfg.t);
  return Direction::angle(cfg.theta.value_or(0.0));
}

ProductSpec spec_of(const RunConfig& cfg) {
  ProductSpec spec{require(cfg.n, "--n"), require(cfg.m, "--m"), require(cfg.ell, "--ell")};
  validate(spec);
  return spec;
}

std::string word_label(const std::vector<std::size_t>& word, std::size_t letters) {
  std::string s;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (letters > 10 && i > 0) s += '.';
    s += std::to_string(word[i]);
  }
  return s;
}

std::string run_gen(const RunConfig& cfg) {
  const auto system = load(cfg);
  if (!cfg.n) return system_to_json(system) + "\n";
  CsvTable table({"word", "center_re", "center_im", "size"});
  PieceCursor cursor(system, *cfg.n);
  while (auto piece = cursor.next()) {
    table.add_row({word_label(cursor.word(), system.size()), format_double(piece->center.real()),
                   format_double(piece->center.imag()), format_double(piece->size)});
  }
  return table.str();
}

std::string run_shadow(const RunConfig& cfg) {
  const auto system = load(cfg);
  const int n = require(cfg.n, "--n");
  const double theta = cfg.theta.value_or(0.0);
  const StepFunction f =
      cfg.profile ? maximal_profile(system, n, theta) : multiplicity(system, n, theta);
  if (cfg.json) {
    JsonObject o;
    o.add("system", system.label())
        .add("n", n)
        .add("theta", theta)
        .add("profile", cfg.profile)
        .add("support", support_measure(f))
        .add("mass", mass(f))
        .add("l2_sq", l2_norm_sq(f))
        .add("max", static_cast<std::int64_t>(f.max_value()))
        .add("cells", static_cast<std::uint64_t>(f.cell_count()));
    return o.str() + "\n";
  }
  std::ostringstream s;
  write_step_function_csv(s, f, {system.label(), n, theta});
  return s.str();
}

const std::vector<std::string> kFavardHeader = {"system", "n",       "method", "value",
                                                "error",  "samples", "seed"};

std::vector<std::string> favard_row(const FavardResult& r) {
  return {r.label, std::to_string(r.n), "quadrature", format_double(r.value),
          format_double(r.error_estimate), std::to_string(r.grid), ""};
}

std::string run_favard(const RunConfig& cfg) {
  const auto system = load(cfg);
  const int n = require(cfg.n, "--n");
  QuadratureConfig q;
  q.grid_size = static_cast<int>(cfg.grid.value_or(64));
  q.refinement_limit = cfg.refine;
  q.target_rel_error = cfg.tol;

  if (cfg.fit.empty()) {
    const auto r = favard_length(system, n, q);
    if (cfg.json) {
      JsonObject o;
      o.add("system", r.label)
          .add("n", r.n)
          .add("method", "quadrature")
          .add("value", r.value)
          .add("error", r.error_estimate)
          .add("samples", r.grid)
          .add("converged", r.converged);
      return o.str() + "\n";
    }
    CsvTable table(kFavardHeader);
    table.add_row(favard_row(r));
    return table.str();
  }

  // Series n = 1..N followed by the fitted decay law.
  const auto model = decay_model_from_string(cfg.fit);
  std::vector<std::pair<int, double>> series;
  CsvTable table(kFavardHeader);
  std::vector<JsonObject> rows;
  for (int k = 1; k <= n; ++k) {
    const auto r = favard_length(system, k, q);
    series.emplace_back(k, r.value);
    table.add_row(favard_row(r));
    JsonObject o;
    o.add("n", k).add("value", r.value).add("error", r.error_estimate).add("samples", r.grid);
    rows.push_back(o);
  }
  const auto fit = fit_decay(series, model);
  if (cfg.json) {
    JsonObject f;
    f.add("model", to_string(fit.model))
        .add("c", fit.c)
        .add("exponent", fit.exponent)
        .add("residual", fit.residual);
    JsonObject o;
    o.add("system", system.label()).add("series", rows).add("fit", f);
    return o.str() + "\n";
  }
  return table.str() + "# fit model=" + std::string(to_string(fit.model)) +
         " c=" + format_double(fit.c) + " exponent=" + format_double(fit.exponent) +
         " residual=" + format_double(fit.residual) + "\n";
}

std::string run_buffon(const RunConfig& cfg) {
  const auto system = load(cfg);
  const int n = require(cfg.n, "--n");
  const auto seed = require_seed(cfg);
  const auto trials = cfg.trials.value_or(100000);
  const auto b = buffon_estimate(system, n, trials, seed);
  if (cfg.json) {
    JsonObject o;
    o.add("system", system.label())
        .add("n", n)
        .add("method", "buffon")
        .add("value", b.estimate)
        .add("error", b.std_error)
        .add("samples", b.trials)
        .add("seed", seed)
        .add("hits", b.hits);
    return o.str() + "\n";
  }
  CsvTable table(kFavardHeader);
  table.add_row({system.label(), std::to_string(n), "buffon", format_double(b.estimate),
                 format_double(b.std_error), std::to_string(b.trials), std::to_string(seed)});
  return table.str();
}

JsonObject direction_json(const Direction& d) {
  JsonObject o;
  o.add("kind", d.kind == Direction::Kind::theta ? "theta" : "t").add("value", d.value);
  return o;
}

std::string run_spectral(const RunConfig& cfg) {
  if (cfg.mode == "ergodic") {
    if (!cfg.lambda) throw UsageError("missing --lambda");
    const int count = cfg.big_n.value_or(1024);
    const auto s = ergodic_sample(*cfg.lambda, count);
    if (cfg.json) {
      JsonObject o;
      o.add("lambda", *cfg.lambda)
          .add("N", count)
          .add("classification", static_cast<int>(s.classification))
          .add("p", s.p)
          .add("q", s.q)
          .add("preperiod", s.preperiod)
          .add("period", s.period)
          .add("final_mean", s.running_mean.back());
      return o.str() + "\n";
    }
    CsvTable table({"k", "a_k", "running_mean"});
    for (std::size_t i = 0; i < s.a.size(); ++i) {
      table.add_row({std::to_string(i + 1), format_double(s.a[i]),
                     format_double(s.running_mean[i])});
    }
    return "# classification=" + std::to_string(static_cast<int>(s.classification)) + "\n" +
           table.str();
  }

  const auto system = load(cfg);
  const Direction dir = direction_of(cfg);

  if (cfg.mode == "parseval") {
    if (dir.kind != Direction::Kind::theta) throw UsageError("parseval needs --theta");
    const int n = require(cfg.n, "--n");
    const double range =
        cfg.range.value_or(std::pow(1.0 / system.ratio(), static_cast<double>(n + 3)));
    const auto r = parseval_check(system, dir.value, n, range, cfg.grid.value_or(0));
    JsonObject o;
    o.add("system", system.label())
        .add("n", n)
        .add("theta", dir.value)
        .add("spectral", r.spectral)
        .add("spatial", r.spatial)
        .add("rel_error", r.rel_error)
        .add("range", r.range)
        .add("nodes", static_cast<std::uint64_t>(r.nodes));
    return o.str() + "\n";
  }

  const ProductSpec spec = spec_of(cfg);
  const Interval window = product_window(spec, system);
  const double big_l = 1.0 / system.ratio();

  if (cfg.mode == "ssv") {
    const double thr = cfg.threshold.value_or(std::pow(big_l, -static_cast<double>(spec.ell)));
    const auto cover = ssv_scan(system, dir, spec, thr, std::max<std::size_t>(cfg.grid.value_or(0), 1000));
    std::string intervals = "[";
    for (std::size_t i = 0; i < cover.intervals.size(); ++i) {
      const auto& iv = cover.intervals.intervals()[i];
      if (i) intervals += ',';
      intervals += "[" + json_number(iv.lo) + "," + json_number(iv.hi) + "]";
    }
    intervals += "]";
    JsonObject o;
    o.add("system", system.label())
        .add("n", spec.n)
        .add("m", spec.m)
        .add("ell", spec.ell)
        .add("direction", direction_json(dir))
        .add("threshold", cover.threshold)
        .add("window", std::vector<double>{cover.window.lo, cover.window.hi})
        .add("step", cover.step)
        .add("samples", static_cast<std::uint64_t>(cover.samples))
        .add("small_samples", static_cast<std::uint64_t>(cover.small_samples))
        .add("component_count", static_cast<std::uint64_t>(cover.component_count))
        .add("measure", cover.intervals.measure())
        .add_raw("intervals", intervals);
    return o.str() + "\n";
  }

  if (cfg.mode != "products") throw UsageError("unknown spectral mode '" + cfg.mode + "'");
  const std::size_t grid = cfg.grid.value_or(1000);
  if (grid < 2) throw UsageError("--grid must be at least 2");
  const auto rows = map_indices(grid, [&](std::size_t i) {
    const double x =
        window.lo + window.length() * static_cast<double>(i) / static_cast<double>(grid - 1);
    const auto p = split_products(spec, system, dir, x);
    const auto nu = nu_hat_eval(system, dir, spec.n, x);
    return std::vector<std::string>{format_double(x),
                                    format_double(std::abs(p.p1)),
                                    format_double(std::abs(p.p2)),
                                    format_double(std::abs(p.sharp)),
                                    format_double(std::abs(p.flat)),
                                    format_double(std::abs(nu))};
  });
  CsvTable table({"x", "abs_p1", "abs_p2", "abs_sharp", "abs_flat", "abs_nu_hat"});
  for (auto row : rows) table.add_row(std::move(row));
  return table.str();
}

std::string run_verify(const RunConfig& cfg, bool& failed) {
  if (cfg.suite.empty()) throw UsageError("missing --suite");
  SuiteConfig sc;
  sc.trials = cfg.trials.value_or(100);
  sc.seed = require_seed(cfg);
  sc.limit = cfg.limit;
  const auto r = run_suite(cfg.suite, sc);
  failed = !r.pass;
  JsonObject o;
  o.add("suite", r.suite)
      .add("trials", r.trials)
      .add("worst_case", r.worst_case)
      .add("pass", r.pass)
      .add("failures", r.failures)
      .add("limit", r.limit)
      .add("seed", sc.seed);
  return o.str() + "\n";
}

std::string run_scan(const RunConfig& cfg, bool& failed) {
  const auto system = load(cfg);
  const int big_n = cfg.big_n.value_or(4);
  const auto thetas = uniform_angles(cfg.theta_grid, std::numbers::pi);
  JsonObject o;
  o.add("check", cfg.check).add("system", system.label());

  if (cfg.check == "product") {
    const auto kmax = cfg.k.value_or(3);
    const auto mmax = cfg.big_m.value_or(3);
    std::vector<std::pair<int, int>> pairs;
    for (int k = 1; k <= kmax; ++k) {
      for (int m = 1; m <= mmax; ++m) pairs.emplace_back(k, m);
    }
    const auto r = product_inequality_report(system, big_n, thetas, pairs);
    failed = !r.level_identity_holds;
    o.add("N", big_n)
        .add("theta_grid", static_cast<std::uint64_t>(thetas.size()))
        .add("worst_ratio", r.worst_ratio)
        .add("worst_theta", r.worst_theta)
        .add("worst_K", r.worst_pair.first)
        .add("worst_M", r.worst_pair.second)
        .add("level_identity_holds", r.level_identity_holds);
  } else if (cfg.check == "escan" || cfg.check == "l2") {
    EScanConfig ec;
    ec.depth = big_n;
    ec.k = cfg.k.value_or(2);
    ec.thetas = thetas;
    ec.k_exponent = cfg.beta;
    const auto e = e_scan(ec, system);
    o.add("N", big_n)
        .add("K", ec.k)
        .add("beta", ec.k_exponent)
        .add("theta_grid", static_cast<std::uint64_t>(thetas.size()))
        .add("threshold", e.threshold)
        .add("members", static_cast<std::uint64_t>(e.members))
        .add("measure", e.measure);
    if (cfg.check == "escan") {
      o.add("level_measure", e.level_measure);
    } else {
      std::vector<double> members;
      for (std::size_t i = 0; i < thetas.size(); ++i) {
        if (e.in_e[i]) members.push_back(thetas[i]);
      }
      if (members.empty()) {
        o.add("vacuous", true).add("c", 0.0);
      } else {
        const auto l2 = l2_bound_report(system, big_n, ec.k, members);
        o.add("vacuous", l2.vacuous)
            .add("c", l2.c)
            .add("worst_theta", l2.worst_theta)
            .add("worst_n", l2.worst_n);
      }
    }
  } else if (cfg.check == "bootstrap") {
    const double theta = cfg.theta.value_or(0.5);
    const auto r = bootstrap_report(system, theta, big_n, cfg.l_max);
    failed = !r.nonincreasing;
    std::vector<double> values;
    for (const auto& [l, v] : r.series) values.push_back(v);
    JsonObject fit;
    fit.add("a", r.fit.a).add("q", r.fit.q).add("residual", r.fit.residual).add("limit", r.fit.limit);
    o.add("N", big_n)
        .add("theta", theta)
        .add("l_max", cfg.l_max)
        .add("series", values)
        .add("nonincreasing", r.nonincreasing)
        .add("fit", fit);
  } else if (cfg.check == "baddir") {
    const ProductSpec spec = spec_of(cfg);
    std::vector<Direction> dirs;
    for (std::size_t j = 0; j < cfg.theta_grid; ++j) {
      dirs.push_back(Direction::slope(static_cast<double>(j) / static_cast<double>(cfg.theta_grid)));
    }
    const auto r = bad_direction_scan(system, spec, cfg.tau, dirs, 1.0, cfg.grid.value_or(0));
    o.add("n", spec.n)
        .add("m", spec.m)
        .add("ell", spec.ell)
        .add("tau", cfg.tau)
        .add("t_grid", static_cast<std::uint64_t>(dirs.size()))
        .add("threshold", r.threshold)
        .add("x_samples", static_cast<std::uint64_t>(r.x_samples))
        .add("bad_count", static_cast<std::uint64_t>(r.bad_count))
        .add("measure", r.measure);
  } else {
    throw UsageError("unknown check '" + cfg.check + "'");
  }
  o.add("pass", !failed);
  return o.str() + "\n";
}

void report_error(std::ostream& err, bool as_json, std::string_view kind, const std::string& msg) {
  if (as_json) {
    JsonObject o;
    o.add("error", kind).add("message", msg);
    err << o.str() << '\n';
  } else {
    err << "favlab: " << msg << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Favard length lab", "favlab"};
  app.fallthrough();
  app.require_subcommand(1);

  app.add_option("--preset", cfg.preset, "gasket | corner4 | random-L-seed");
  app.add_option("--system-file", cfg.system_file, "system definition JSON");
  app.add_option("--n", cfg.n, "depth n");
  app.add_option("--N", cfg.big_n, "maximal depth N (ergodic: sample count)");
  app.add_option("--K", cfg.k, "level K");
  app.add_option("--M", cfg.big_m, "level M");
  app.add_option("--m", cfg.m, "product split m");
  app.add_option("--ell", cfg.ell, "product split ell");
  app.add_option("--tau", cfg.tau, "bad-direction decay rate");
  app.add_option("--beta", cfg.beta, "E-set exponent");
  app.add_option("--theta", cfg.theta, "direction angle");
  app.add_option("--t", cfg.t, "direction slope in the normalized frame");
  app.add_option("--grid", cfg.grid, "sample count (meaning depends on the subcommand)");
  app.add_option("--theta-grid", cfg.theta_grid, "number of scanned directions");
  app.add_option("--trials", cfg.trials, "trial count");
  app.add_option("--seed", cfg.seed, "seed for stochastic subcommands");
  app.add_option("--threads", cfg.threads, "OpenMP threads (default: FAVLAB_THREADS)");
  app.add_option("--output", cfg.output, "output file (default: stdout)");
  app.add_flag("--json", cfg.json, "JSON output and JSON diagnostics");
  app.add_option("--config", cfg.config, "JSON file whose keys override the flags");
  app.add_option("--threshold", cfg.threshold, "SSV threshold (default L^-ell)");
  app.add_option("--refine", cfg.refine, "quadrature refinement limit");
  app.add_option("--tol", cfg.tol, "quadrature target relative error");
  app.add_option("--l-max", cfg.l_max, "bootstrap depth multiples");
  app.add_option("--lambda", cfg.lambda, "ergodic parameter");
  app.add_option("--range", cfg.range, "Parseval frequency range");
  app.add_option("--fit", cfg.fit, "favard decay model: power | sqrtlog | loglower");
  app.add_flag("--profile", cfg.profile, "shadow: maximal profile f*_N with N = n");
  app.add_option("--limit", cfg.limit, "verify: suite-specific limit");

  auto* gen = app.add_subcommand("gen", "system JSON, or piece CSV with --n");
  auto* shadow = app.add_subcommand("shadow", "multiplicity step function");
  auto* favard = app.add_subcommand("favard", "Favard length by quadrature");
  auto* buffon = app.add_subcommand("buffon", "Favard length by Buffon needles");
  auto* spectral = app.add_subcommand("spectral", "products | ssv | parseval | ergodic");
  spectral->add_option("--mode", cfg.mode, "products | ssv | parseval | ergodic");
  auto* verify = app.add_subcommand("verify", "lemma verification suites");
  verify->add_option("--suite", cfg.suite,
                     "blaschke | cover | turan | doubling | cetsq | keyobs | sine | dist");
  auto* scan = app.add_subcommand("scan", "stacking checks");
  scan->add_option("--check", cfg.check, "product | escan | l2 | bootstrap | baddir");

  // Peek for --json so parse errors are reported in the requested format.
  const bool json_requested = std::find(args.begin(), args.end(), "--json") != args.end();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    report_error(err, json_requested, "UsageError", e.what());
    return kExitUsage;
  }

  for (auto* sub : {gen, shadow, favard, buffon, spectral, verify, scan}) {
    if (sub->parsed()) cfg.subcommand = sub->get_name();
  }

  try {
    if (!cfg.config.empty()) apply_config(cfg);
    check_caps(cfg);
    const int threads = cfg.threads > 0 ? cfg.threads : thread_count_from_env();
    if (threads > 0) set_thread_count(threads);

    bool failed = false;
    std::string text;
    if (cfg.subcommand == "gen") {
      text = run_gen(cfg);
    } else if (cfg.subcommand == "shadow") {
      text = run_shadow(cfg);
    } else if (cfg.subcommand == "favard") {
      text = run_favard(cfg);
    } else if (cfg.subcommand == "buffon") {
      text = run_buffon(cfg);
    } else if (cfg.subcommand == "spectral") {
      text = run_spectral(cfg);
    } else if (cfg.subcommand == "verify") {
      text = run_verify(cfg, failed);
    } else {
      text = run_scan(cfg, failed);
    }
    emit(text, cfg.output, out);
    return failed ? kExitVerificationFailed : kExitOk;
  } catch (const UsageError& e) {
    report_error(err, cfg.json || json_requested, "UsageError", e.what());
    return kExitUsage;
  } catch (const CapExceeded& e) {
    report_error(err, cfg.json || json_requested, "CapExceeded", e.what());
    return kExitCapExceeded;
  } catch (const Error& e) {
    report_error(err, cfg.json || json_requested, to_string(e.kind()), e.what());
    return e.kind() == ErrorKind::EnumerationCapExceeded ? kExitCapExceeded : kExitUsage;
  }
}

}  // namespace favlab::cli
