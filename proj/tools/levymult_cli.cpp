// levymult: config-driven runs over the multiplier, kernel and stochastic modules.
#include <chrono>
#include <cmath>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "levymult/corpus.hpp"
#include "levymult/error.hpp"
#include "levymult/grid_function.hpp"
#include "levymult/json_io.hpp"
#include "levymult/kernel.hpp"
#include "levymult/stochastic.hpp"
#include "levymult/symbol.hpp"
#include "levymult/transform.hpp"

namespace fs = std::filesystem;
using namespace levymult;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

struct Globals {
  std::string config;
  std::string out = ".";
  std::optional<std::uint64_t> seed;
  unsigned workers = 0;
};

struct Loaded {
  Json json;
  fs::path dir;
};

Loaded load_config(const Globals& g) {
  if (g.config.empty()) throw InvalidInput("--config is required");
  const fs::path path(g.config);
  return {read_json_file(path), path.parent_path()};
}

fs::path out_file(const Globals& g, const std::string& name) {
  fs::create_directories(g.out);
  return fs::path(g.out) / name;
}

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw InvalidInput("cannot write " + p.string());
  return out;
}

unsigned workers_of(const Globals& g) {
  return g.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : g.workers;
}

void write_json(const fs::path& p, const Json& j) {
  auto out = open_out(p);
  out << j.dump(2) << '\n';
}

void write_metadata(const Globals& g, const std::string& command) {
  const auto now = std::chrono::system_clock::now();
  const std::time_t tt = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&tt, &tm);
  std::ostringstream ts;
  ts << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  Json meta{{"command", command}, {"config", g.config}, {"timestamp", ts.str()}, {"workers", workers_of(g)}};
  meta["seed_override"] = g.seed ? Json(*g.seed) : Json(nullptr);
  write_json(out_file(g, command + ".meta.json"), meta);
}

Json estimate_json(const MeanEstimate& e) {
  return Json{{"re", number_to_json(e.mean.real())},
              {"im", number_to_json(e.mean.imag())},
              {"stderr_re", number_to_json(e.stderr_re)},
              {"stderr_im", number_to_json(e.stderr_im)}};
}

const Json& field(const Json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(std::string("config: missing field \"") + key + "\"");
  return *it;
}

std::vector<double> numbers(const Json& j, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + ": expected an array");
  std::vector<double> v;
  for (const auto& e : j) v.push_back(number_from_json(e, what));
  return v;
}

// symbol

int cmd_symbol(const Globals& g) {
  const Loaded cfg = load_config(g);
  const MultiplierSymbol symbol = symbol_from_json(field(cfg.json, "symbol"));
  const Json& grid = field(cfg.json, "grid");
  const std::size_t d = grid.at("dimension").get<std::size_t>();
  std::array<std::size_t, 2> sizes{1, 1};
  std::array<double, 2> lengths{1.0, 1.0};
  for (std::size_t k = 0; k < d; ++k) {
    sizes[k] = grid.at("sizes").at(k).get<std::size_t>();
    lengths[k] = grid.contains("lengths") ? number_from_json(grid["lengths"].at(k), "grid.lengths")
                                          : 2.0 * std::numbers::pi;
  }
  const GridFunction shape = GridFunction::zeros(d, sizes, lengths);
  const std::vector<Complex> table = symbol_table(symbol, shape, workers_of(g));

  auto out = open_out(out_file(g, "symbol.csv"));
  out << (d == 2 ? "xi_1,xi_2,re,im\n" : "xi_1,re,im\n");
  // Ascending frequency order: signed index -N/2 .. N/2-1 on each axis.
  auto order = [](std::size_t n, std::size_t r) { return (r + n / 2) % n; };
  const std::size_t n1 = d == 2 ? sizes[1] : 1;
  for (std::size_t r0 = 0; r0 < sizes[0]; ++r0) {
    const std::size_t i = order(sizes[0], r0);
    for (std::size_t r1 = 0; r1 < n1; ++r1) {
      const std::size_t j = d == 2 ? order(n1, r1) : 0;
      const Complex m = table[i * n1 + j];
      out << format_double(shape.frequency(0, i)) << ',';
      if (d == 2) out << format_double(shape.frequency(1, j)) << ',';
      out << format_double(m.real()) << ',' << format_double(m.imag()) << '\n';
    }
  }
  write_metadata(g, "symbol");
  return kExitPass;
}

// apply

int cmd_apply(const Globals& g) {
  const Loaded cfg = load_config(g);
  const MultiplierSymbol symbol = symbol_from_json(field(cfg.json, "symbol"));
  const GridFunction f = grid_from_json(field(cfg.json, "input"), cfg.dir);
  const GridFunction mf = apply_multiplier(f, symbol, workers_of(g));
  write_grid_file(out_file(g, cfg.json.value("output", std::string("applied.lmgf"))).string(), mf);
  write_metadata(g, "apply");
  return kExitPass;
}

// normratio

int cmd_normratio(const Globals& g) {
  const Loaded cfg = load_config(g);
  CorpusConfig cc = corpus_config_from_json(field(cfg.json, "corpus"));
  if (g.seed) cc.seed = *g.seed;
  const auto corpus = build_corpus(cc);
  const std::vector<double> p_list = numbers(field(cfg.json, "p"), "p");
  const double slack = cfg.json.contains("slack") ? number_from_json(cfg.json["slack"], "slack") : kNormRatioSlack;
  const Json& symbols = field(cfg.json, "symbols");
  if (!symbols.is_array() || symbols.empty()) throw InvalidInput("symbols: expected a nonempty array");

  auto csv = open_out(out_file(g, "normratio.csv"));
  csv << "symbol,p,p_star_minus_1,max_ratio,argmax_id,violation\n";
  Json summary = Json::array();
  bool violation = false;
  for (const auto& sj : symbols) {
    const MultiplierSymbol symbol = symbol_from_json(sj);
    const auto rows = norm_ratio_sweep(symbol, corpus, p_list, workers_of(g), slack);
    for (const auto& r : rows) {
      csv << symbol.label() << ',' << format_double(r.p) << ',' << format_double(r.p_star_minus_1) << ','
          << format_double(r.max_ratio) << ',' << r.argmax_id << ',' << (r.violation ? 1 : 0) << '\n';
      summary.push_back({{"symbol", symbol.label()},
                         {"p", r.p},
                         {"max_ratio", r.max_ratio},
                         {"bound", r.p_star_minus_1},
                         {"violation", r.violation}});
      violation = violation || r.violation;
    }
  }
  write_json(out_file(g, "normratio.json"), Json{{"rows", summary}, {"pass", !violation}});
  write_metadata(g, "normratio");
  std::cout << (violation ? "FAIL" : "PASS") << " normratio\n";
  return violation ? kExitFailure : kExitPass;
}

// kernel

std::vector<double> axis_points(const Json& a) {
  const double lo = number_from_json(field(a, "min"), "min");
  const double hi = number_from_json(field(a, "max"), "max");
  const std::size_t n = a.at("count").get<std::size_t>();
  const bool log = a.value("log", false);
  if (n == 0 || (log && !(lo > 0.0 && hi > 0.0))) throw InvalidInput("kernel grid: bad axis range");
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
    v[i] = log ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo))) : lo + t * (hi - lo);
  }
  return v;
}

int cmd_kernel(const Globals& g) {
  const Loaded cfg = load_config(g);
  const Json& j = cfg.json;
  std::vector<std::pair<double, double>> pts;
  if (j.contains("points")) {
    for (const auto& p : j["points"]) {
      pts.emplace_back(number_from_json(p.at(0), "points"), number_from_json(p.at(1), "points"));
    }
  }
  if (j.contains("grid")) {
    for (double x : axis_points(j["grid"].at("x"))) {
      for (double y : axis_points(j["grid"].at("y"))) pts.emplace_back(x, y);
    }
  }
  const bool truncated = j.contains("eps") || j.contains("T");
  const double eps = j.contains("eps") ? number_from_json(j["eps"], "eps") : 0.0;
  const double T = j.contains("T") ? number_from_json(j["T"], "T") : std::numeric_limits<double>::infinity();
  const double tol = j.contains("tol") ? number_from_json(j["tol"], "tol") : 0.0;
  if (!pts.empty()) {
    auto out = open_out(out_file(g, "kernel.csv"));
    out << "x,y,K\n";
    for (const auto& [x, y] : pts) {
      const double k = truncated ? kernel_truncated(eps, T, x, y, tol) : kernel_closed_form(x, y);
      out << format_double(x) << ',' << format_double(y) << ',' << format_double(k) << '\n';
    }
  }
  if (j.contains("pv")) {
    const Json& pv = j["pv"];
    const GridFunction f = grid_from_json(field(pv, "input"), cfg.dir);
    const double rho = number_from_json(field(pv, "rho"), "pv.rho");
    const std::size_t axis = pv.value("axis", std::size_t{1});
    const std::string mode = pv.value("mode", std::string("pv"));
    GridFunction r = f;
    if (mode == "pv") {
      r = pv_convolve(f, rho, PvKernel{axis, eps, T});
    } else if (mode == "singular_integral") {
      r = singular_integral_apply(f, rho, axis);
    } else {
      throw InvalidInput("pv.mode: expected \"pv\" or \"singular_integral\"");
    }
    write_grid_file(out_file(g, pv.value("output", std::string("pv.lmgf"))).string(), r);
  }
  if (pts.empty() && !j.contains("pv")) throw InvalidInput("kernel: nothing to do (no points, grid or pv block)");
  write_metadata(g, "kernel");
  return kExitPass;
}

// verify

Json scenario_report(const Scenario& sc, const Json& sj, const Globals& g, bool& pass) {
  const unsigned workers = workers_of(g);
  const Ensemble e = run_ensemble(sc, workers);
  Json r{{"id", sc.id}, {"n_paths", sc.n_paths}, {"seed", sc.seed}};
  const bool sub_ok = e.subordination_violations == 0;
  r["subordination"] = {{"violations", e.subordination_violations},
                        {"increments_checked", e.increments_checked},
                        {"pass", sub_ok}};
  pass = pass && sub_ok;

  const auto* c = std::get_if<JumpModulator::Constant>(&sc.modulator.kind());
  if (c != nullptr && c->value == Complex(1.0, 0.0)) {
    const bool ok = e.identity_gap <= 1e-9 * std::max(1.0, sc.u - sc.s);
    r["identity"] = {{"max_gap", number_to_json(e.identity_gap)}, {"pass", ok}};
    pass = pass && ok;
  }

  Json mart = Json::array();
  for (std::size_t a = 0; a + 1 < e.times.size(); ++a) {
    for (std::size_t b = a + 1; b < e.times.size(); ++b) {
      const auto m = martingale_property_check(e, e.times[a], e.times[b]);
      mart.push_back({{"t1", m.t1}, {"t2", m.t2}, {"dF", estimate_json(m.dF)}, {"dG", estimate_json(m.dG)},
                      {"pass", m.pass}});
      pass = pass && m.pass;
    }
  }
  r["martingale"] = mart;

  const std::vector<double> p_list = sj.contains("p_list") ? numbers(sj["p_list"], "p_list")
                                                           : std::vector<double>{1.5, 2.0, 3.0};
  Json burk = Json::array();
  for (const auto& row : burkholder_bound_check(e, p_list)) {
    burk.push_back({{"p", row.p},
                    {"lhs", number_to_json(row.lhs)},
                    {"lhs_stderr", number_to_json(row.lhs_stderr)},
                    {"rhs", number_to_json(row.rhs)},
                    {"rhs_stderr", number_to_json(row.rhs_stderr)},
                    {"margin", number_to_json(row.margin)},
                    {"pass", row.pass}});
    pass = pass && row.pass;
  }
  r["burkholder"] = burk;

  const Torus torus = Torus::of(sc.f);
  if (sj.contains("levy_system")) {
    const Json& ls = sj["levy_system"];
    const std::size_t n = ls.value("n_paths", sc.n_paths);
    const std::uint64_t seed = g.seed ? *g.seed : ls.value("seed", sc.seed);
    const double t = ls.contains("t") ? number_from_json(ls["t"], "levy_system.t") : sc.u;
    const auto h = torus.spacing();
    Json rows = Json::array();
    for (const auto& row : levy_system_check(sc.measure, standard_functionals(sc.measure), sc.s, t, n, seed, workers,
                                             std::span<const double>(h.data(), torus.dimension))) {
      rows.push_back({{"functional", row.functional},
                      {"lhs", number_to_json(row.lhs)},
                      {"lhs_stderr", number_to_json(row.lhs_stderr)},
                      {"rhs", number_to_json(row.rhs)},
                      {"rhs_error", number_to_json(row.rhs_error)},
                      {"pass", row.pass}});
      pass = pass && row.pass;
    }
    r["levy_system"] = rows;
  }
  if (sj.contains("exchangeability")) {
    const Json& ex = sj["exchangeability"];
    const std::size_t n = ex.value("n_paths", sc.n_paths);
    const std::uint64_t seed = g.seed ? *g.seed : ex.value("seed", sc.seed);
    std::vector<std::size_t> n_values;
    for (double v : numbers(field(ex, "n_values"), "exchangeability.n_values")) n_values.push_back(static_cast<std::size_t>(v));
    Json rows = Json::array();
    for (const auto& row : exchangeability_check(sc.measure, sc.s, sc.u, n, seed, n_values, workers)) {
      rows.push_back({{"n", row.n},
                      {"samples", row.samples},
                      {"ks_statistic", number_to_json(row.ks_statistic)},
                      {"critical", number_to_json(row.critical)},
                      {"pass", row.pass}});
      pass = pass && row.pass;
    }
    r["exchangeability"] = rows;
  }
  return r;
}

DiscreteLevyMeasure discrete_measure(const Json& j) {
  const LevyMeasure m = measure_from_json(j);
  const auto* d = std::get_if<DiscreteLevyMeasure>(&m);
  if (d == nullptr) throw InvalidInput("simulation needs a discrete measure");
  return *d;
}

int cmd_verify(const Globals& g) {
  const Loaded cfg = load_config(g);
  const unsigned workers = workers_of(g);
  bool pass = true;
  Json report = Json::object();

  Json scenarios = Json::array();
  if (cfg.json.contains("scenarios")) {
    for (const auto& sj : cfg.json["scenarios"]) {
      Scenario sc = scenario_from_json(sj, cfg.dir);
      if (g.seed) sc.seed = *g.seed;
      scenarios.push_back(scenario_report(sc, sj, g, pass));
    }
  }
  report["scenarios"] = scenarios;

  Json projections = Json::array();
  if (cfg.json.contains("projection")) {
    for (const auto& pj : cfg.json["projection"]) {
      const auto measure = discrete_measure(field(pj, "measure"));
      const auto phi = modulator_from_json(field(pj, "modulator"));
      const GridFunction f = grid_from_json(field(pj, "f"), cfg.dir);
      const double s = number_from_json(field(pj, "s"), "projection.s");
      const std::size_t n = pj.value("n_paths", std::size_t{100000});
      const std::uint64_t seed = g.seed ? *g.seed : pj.value("seed", std::uint64_t{1});
      const auto r = projection_identity_check(measure, phi, f, s, n, seed, workers);
      projections.push_back({{"id", pj.value("id", std::string("projection"))},
                             {"n_paths", n},
                             {"error_l2", number_to_json(r.error_l2)},
                             {"stderr_l2", number_to_json(r.stderr_l2)},
                             {"spec_l2", number_to_json(r.spec_l2)},
                             {"pass", r.pass}});
      pass = pass && r.pass;
    }
  }
  report["projection"] = projections;

  Json l1 = Json::array();
  if (cfg.json.contains("l1_mass")) {
    for (const auto& lj : cfg.json["l1_mass"]) {
      const auto measure = discrete_measure(field(lj, "measure"));
      const auto phi = modulator_from_json(field(lj, "modulator"));
      const GridFunction f = grid_from_json(field(lj, "f"), cfg.dir);
      const double s = number_from_json(field(lj, "s"), "l1_mass.s");
      const double t = number_from_json(field(lj, "t"), "l1_mass.t");
      const double u = lj.contains("u") ? number_from_json(lj["u"], "l1_mass.u") : t;
      const std::size_t n = lj.value("n_paths", std::size_t{100000});
      const std::uint64_t seed = g.seed ? *g.seed : lj.value("seed", std::uint64_t{1});
      const auto r = l1_mass_check(measure, phi, f, s, t, u, n, seed, workers);
      l1.push_back({{"id", lj.value("id", std::string("l1_mass"))},
                    {"n_paths", n},
                    {"estimate", estimate_json(r.estimate)},
                    {"expected", number_to_json(r.expected)},
                    {"pass", r.pass}});
      pass = pass && r.pass;
    }
  }
  report["l1_mass"] = l1;
  report["pass"] = pass;

  write_json(out_file(g, "verify.json"), report);
  write_metadata(g, "verify");
  std::cout << (pass ? "PASS" : "FAIL") << " verify\n";
  return pass ? kExitPass : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Levy-process Fourier multipliers: symbols, transforms, kernels and stochastic checks"};
  app.require_subcommand(1);
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--config", g.config, "JSON config file");
  app.add_option("--out", g.out, "Output directory")->capture_default_str();
  auto* seed_opt = app.add_option("--seed", seed, "Override every seed in the config");
  app.add_option("--workers", g.workers, "Worker threads (0 = hardware concurrency)")->capture_default_str();

  struct Sub {
    const char* name;
    const char* help;
    int (*run)(const Globals&);
  };
  const Sub subs[] = {
      {"symbol", "Tabulate a symbol on a frequency grid (CSV)", cmd_symbol},
      {"apply", "Apply a symbol to a grid function (LMGF)", cmd_apply},
      {"normratio", "Lp norm-ratio sweep over a corpus (CSV + JSON)", cmd_normratio},
      {"kernel", "Kernel tables (CSV) and principal-value convolutions (LMGF)", cmd_kernel},
      {"verify", "Stochastic verification report (JSON)", cmd_verify},
  };
  for (const auto& s : subs) app.add_subcommand(s.name, s.help)->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }
  if (seed_opt->count() > 0) g.seed = seed;

  for (const auto& s : subs) {
    if (!app.got_subcommand(s.name)) continue;
    try {
      return s.run(g);
    } catch (const InvalidInput& e) {
      std::cerr << "levymult " << s.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const UnsupportedMeasure& e) {
      std::cerr << "levymult " << s.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const SingularPoint& e) {
      std::cerr << "levymult " << s.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const Json::exception& e) {
      std::cerr << "levymult " << s.name << ": config: " << e.what() << '\n';
      return kExitUsage;
    } catch (const fs::filesystem_error& e) {
      std::cerr << "levymult " << s.name << ": " << e.what() << '\n';
      return kExitUsage;
    } catch (const std::exception& e) {
      std::cerr << "levymult " << s.name << ": " << e.what() << '\n';
      return kExitFailure;
    }
  }
  return kExitUsage;
}
