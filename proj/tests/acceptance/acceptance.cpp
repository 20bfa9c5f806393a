// Acceptance suite: one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "levymult/corpus.hpp"
#include "levymult/json_io.hpp"
#include "levymult/kernel.hpp"
#include "levymult/stochastic.hpp"
#include "levymult/symbol.hpp"
#include "levymult/transform.hpp"
#include "levymult/transition.hpp"

namespace fs = std::filesystem;
using namespace levymult;

namespace {

constexpr double kPi = std::numbers::pi;
const fs::path kConfigs = LEVYMULT_CONFIG_DIR;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

DiscreteLevyMeasure discrete(const Json& j) { return std::get<DiscreteLevyMeasure>(measure_from_json(j)); }

const Json& verify_config() {
  static const Json j = read_json_file(kConfigs / "verify.json");
  return j;
}

std::vector<Scenario> scenarios() {
  std::vector<Scenario> out;
  for (const auto& sj : verify_config()["scenarios"]) out.push_back(scenario_from_json(sj, kConfigs));
  return out;
}

Outcome norm_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const Json cfg = read_json_file(kConfigs / "normratio.json");
  const auto corpus = build_corpus(corpus_config_from_json(cfg["corpus"]));
  std::vector<double> ps;
  for (const auto& p : cfg["p"]) ps.push_back(number_from_json(p));
  bool ok = true;
  double worst = 0.0;
  std::string where;
  for (const auto& sj : cfg["symbols"]) {
    const auto sym = symbol_from_json(sj);
    for (const auto& row : norm_ratio_sweep(sym, corpus, ps, 0)) {
      const double rel = row.max_ratio / row.p_star_minus_1;
      if (rel > worst) {
        worst = rel;
        where = sym.label() + " p=" + fmt("%.4g", row.p);
      }
      ok = ok && !row.violation;
    }
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 60.0, fmt("max ratio/(p*-1) = %.6f at %s; corpus %zu at %zu^2; %.1f s", worst, where.c_str(),
                                   corpus.size(), corpus.front().function.sizes()[0], secs)};
}

// int_0^inf (d/dt p_t(x)) p_t(y) dt by Boost tanh-sinh and exp-sinh.
double kernel_oracle(double x, double y) {
  auto f = [&](double t) { return cauchy_density_dt(t, x) * cauchy_density(t, y); };
  const double m = std::max(std::abs(x), std::abs(y));
  boost::math::quadrature::tanh_sinh<double> ts;
  boost::math::quadrature::exp_sinh<double> es;
  return ts.integrate(f, 0.0, m, 1e-14) + es.integrate(f, m, std::numeric_limits<double>::infinity(), 1e-14);
}

Outcome kernel_closed_form_check() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> logu(std::log(0.05), std::log(20.0));
  std::bernoulli_distribution sign(0.5);
  double worst_oracle = 0.0;
  double worst_numeric = 0.0;
  double worst_homog = 0.0;
  int n = 0;
  while (n < 400) {
    const double x = std::exp(logu(rng)) * (sign(rng) ? 1 : -1);
    const double y = std::exp(logu(rng)) * (sign(rng) ? 1 : -1);
    if (std::abs(std::abs(x) - std::abs(y)) < 1e-2 * std::max(std::abs(x), std::abs(y))) continue;
    ++n;
    const double k = kernel_closed_form(x, y);
    worst_oracle = std::max(worst_oracle, std::abs(k - kernel_oracle(x, y)) / std::abs(k));
    worst_numeric = std::max(worst_numeric, std::abs(k - kernel_numeric(x, y)) / std::abs(k));
    for (double h : {0.5, 3.0, 10.0}) {
      worst_homog = std::max(worst_homog, std::abs(h * h * kernel_closed_form(h * x, h * y) - k) / std::abs(k));
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = worst_oracle <= 1e-8 && worst_numeric <= 1e-8 && worst_homog <= 1e-12 && secs <= 10.0;
  return {ok, fmt("400 points: rel err vs oracle %.2e, vs library quadrature %.2e; homogeneity %.2e; %.1f s",
                  worst_oracle, worst_numeric, worst_homog, secs)};
}

Outcome spectral_spatial() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sym = MultiplierSymbol::power(1.0, 1, 2);
  std::vector<double> errs;
  for (std::size_t n : {128u, 256u, 512u}) {
    CorpusConfig cc;
    cc.n = n;
    cc.count = 6;
    cc.smooth_only = true;
    double worst = 0.0;
    for (const auto& m : build_corpus(cc)) {
      const auto& f = m.function;
      const auto spatial = singular_integral_apply(f, 2.0 * f.spacing(0));
      const auto spectral = apply_multiplier(f, sym);
      double num = 0.0;
      double den = 0.0;
      for (std::size_t i = 0; i < f.size(); ++i) {
        num += std::norm(spatial[i] - spectral[i]);
        den += std::norm(spectral[i]);
      }
      if (den > 0.0) worst = std::max(worst, std::sqrt(num / den));
    }
    errs.push_back(worst);
  }
  const double secs = seconds_since(t0);
  const bool ok = errs[2] <= 5e-2 && errs[0] > errs[1] && errs[1] > errs[2] && secs <= 120.0;
  return {ok, fmt("max rel l2 at N=128/256/512: %.3e / %.3e / %.3e; %.1f s", errs[0], errs[1], errs[2], secs)};
}

Outcome limits() {
  std::vector<std::array<double, 2>> grid;
  for (double a = -6.0; a <= 6.0; a += 0.4) {
    for (double b = -6.0; b <= 6.0; b += 0.4) {
      if (std::hypot(a, b) > 1e-3) grid.push_back({a, b});
    }
  }
  bool monotone = true;
  std::string eps_detail;
  for (double alpha : {0.5, 1.0, 1.5}) {
    const auto power = MultiplierSymbol::power(alpha, 1, 2);
    double prev = std::numeric_limits<double>::infinity();
    for (int e = 1; e <= 6; ++e) {
      const auto m = MultiplierSymbol::general(TruncatedStableMeasure::axis_stable(2, alpha, std::pow(10.0, -e)),
                                               JumpModulator::axis_indicator(1));
      double sup = 0.0;
      for (const auto& xi : grid) sup = std::max(sup, std::abs(m(xi) - power(xi)));
      monotone = monotone && sup < prev;
      prev = sup;
    }
    eps_detail += fmt(" a=%.1f:%.1e", alpha, prev);
  }
  const auto p = MultiplierSymbol::power(1.99, 1, 2);
  const auto r = MultiplierSymbol::riesz2(1, 2);
  double gap = 0.0;
  for (const auto& xi : grid) gap = std::max(gap, std::abs(std::abs(p(xi)) - std::abs(r(xi))));
  return {monotone && gap <= 1e-2,
          fmt("eps sweep monotone=%s, sup at eps=1e-6%s; alpha=1.99 gap %.3e", monotone ? "yes" : "no",
              eps_detail.c_str(), gap)};
}

Outcome levy_system() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::size_t rows_checked = 0;
  double worst_z = 0.0;
  double const_gap = 0.0;
  for (const auto& sj : verify_config()["scenarios"]) {
    const auto m = discrete(sj["measure"]);
    const double s = number_from_json(sj["s"]);
    const double u = number_from_json(sj["u"]);
    const auto rows = levy_system_check(m, standard_functionals(m), s, u, 100000, sj.value("seed", 1) + 1000, 0);
    for (const auto& r : rows) {
      ok = ok && r.pass;
      ++rows_checked;
      if (r.lhs_stderr > 0.0) worst_z = std::max(worst_z, std::abs(r.lhs - r.rhs) / r.lhs_stderr);
    }
    Functional one;
    const auto c = levy_system_check(m, {one}, s, u, 1000, 1, 0);
    const double exact = m.total_mass() * (u - s);
    const_gap = std::max(const_gap, std::abs(c[0].rhs - exact) / exact);
    ok = ok && const_gap <= 1e-10;
  }
  const double secs = seconds_since(t0);
  return {ok && secs <= 60.0, fmt("%zu rows, worst |lhs-rhs|/stderr %.2f; F=1 rhs rel gap %.1e; %.1f s", rows_checked,
                                   worst_z, const_gap, secs)};
}

struct EnsembleResults {
  std::vector<Scenario> scenarios;
  std::vector<Ensemble> ensembles;
};

const EnsembleResults& ensembles() {
  static const EnsembleResults r = [] {
    EnsembleResults e;
    e.scenarios = scenarios();
    for (const auto& sc : e.scenarios) e.ensembles.push_back(run_ensemble(sc, 0));
    return e;
  }();
  return r;
}

Outcome subordination() {
  const auto& r = ensembles();
  std::size_t violations = 0;
  std::size_t increments = 0;
  std::size_t paths = 0;
  bool enough = true;
  for (const auto& e : r.ensembles) {
    violations += e.subordination_violations;
    increments += e.increments_checked;
    paths += e.n_paths;
    enough = enough && e.n_paths >= 100000;
  }
  return {violations == 0 && enough, fmt("%zu scenarios, %zu paths, %zu increments, %zu violations",
                                         r.ensembles.size(), paths, increments, violations)};
}

Outcome burkholder() {
  bool ok = true;
  double worst = -std::numeric_limits<double>::infinity();
  std::string where;
  for (const auto& e : ensembles().ensembles) {
    for (const auto& row : burkholder_bound_check(e, {1.5, 2.0, 3.0})) {
      ok = ok && row.pass;
      const double ratio = row.lhs / row.rhs;
      if (ratio > worst) {
        worst = ratio;
        where = e.scenario_id + fmt(" p=%.1f", row.p);
      }
    }
  }
  return {ok, fmt("max E|F|^p / ((p*-1)^p E|G|^p) = %.4f at %s", worst, where.c_str())};
}

Outcome projection() {
  bool ok = true;
  std::string detail;
  const std::vector<double> ns = {1000, 4000, 16000, 64000};
  const int replicates = 6;
  for (const auto& pj : verify_config()["projection"]) {
    const auto m = discrete(pj["measure"]);
    const auto phi = modulator_from_json(pj["modulator"]);
    const auto f = grid_from_json(pj["f"], kConfigs);
    const double s = number_from_json(pj["s"]);
    const auto full = projection_identity_check(m, phi, f, s, pj.value("n_paths", 100000), pj.value("seed", 1), 0);
    ok = ok && full.pass;
    std::vector<double> rms;
    for (double n : ns) {
      double acc = 0.0;
      for (int k = 0; k < replicates; ++k) {
        const auto r = projection_identity_check(m, phi, f, s, static_cast<std::size_t>(n),
                                                 1000003ULL * static_cast<std::uint64_t>(n) + k, 0);
        ok = ok && r.pass;
        acc += r.error_l2 * r.error_l2;
      }
      rms.push_back(std::sqrt(acc / replicates));
    }
    const double slope = loglog_slope(ns, rms);
    ok = ok && std::abs(slope + 0.5) <= 0.15;
    detail += fmt("%s%s: err %.2e <= 5*%.2e, slope %.3f", detail.empty() ? "" : "; ",
                  pj.value("id", std::string("projection")).c_str(), full.error_l2, full.stderr_l2, slope);
  }
  return {ok, detail};
}

Outcome l1_mass() {
  bool ok = true;
  std::string detail;
  std::size_t count = 0;
  for (const auto& lj : verify_config()["l1_mass"]) {
    const auto m = discrete(lj["measure"]);
    const auto phi = modulator_from_json(lj["modulator"]);
    const auto f = grid_from_json(lj["f"], kConfigs);
    const double s = number_from_json(lj["s"]);
    const double t = number_from_json(lj["t"]);
    const double u = lj.contains("u") ? number_from_json(lj["u"]) : t;
    const auto r = l1_mass_check(m, phi, f, s, t, u, lj.value("n_paths", 100000), lj.value("seed", 1), 0);
    ok = ok && r.pass;
    ++count;
    detail += fmt("%s%s: %.5f +- %.5f vs %.5f", detail.empty() ? "" : "; ", lj.value("id", std::string("l1")).c_str(),
                  r.estimate.mean.real(), r.estimate.stderr_re, r.expected);
  }
  return {ok && count >= 2, detail};
}

Outcome levy_khinchin() {
  const std::vector<DiscreteLevyMeasure> measures = {
      DiscreteLevyMeasure::symmetrized(1, {{{1.0}, 1.0}}),
      DiscreteLevyMeasure::symmetrized(1, {{{1.0}, 0.7}, {{3.0}, 0.2}}),
      DiscreteLevyMeasure::symmetrized(2, {{{1.0, 0.0}, 1.0}, {{0.0, 1.0}, 0.5}, {{1.0, 1.0}, 0.25}}),
  };
  const double limit = 10.0 * kTransitionTolerance;
  double worst_lk = 0.0;
  double worst_sg = 0.0;
  for (const auto& m : measures) {
    for (double t : {0.05, 0.3, 1.0, 2.5, 5.0}) {
      for (double a : {0.0, 0.4, 1.3, kPi / 2, 2.9, kPi}) {
        std::vector<double> xi(m.dimension(), a);
        if (m.dimension() == 2) xi[1] = 0.7 - a / 3.0;
        const auto r = levy_khinchin_check(m, t, xi);
        worst_lk = std::max(worst_lk, std::abs(r.lhs - Complex(r.rhs, 0.0)));
      }
    }
    for (auto [a, b] : {std::pair{0.2, 0.5}, std::pair{1.0, 1.5}, std::pair{0.05, 2.0}}) {
      const auto ab = convolve(transition_measure(m, a), transition_measure(m, b));
      const auto c = transition_measure(m, a + b);
      c.for_each([&](LatticePoint z, double w) { worst_sg = std::max(worst_sg, std::abs(ab.at(z) - w)); });
      ab.for_each([&](LatticePoint z, double w) { worst_sg = std::max(worst_sg, std::abs(c.at(z) - w)); });
    }
  }
  return {worst_lk <= limit && worst_sg <= limit,
          fmt("max |sum e^{i xi z} p_t - e^{t Psi}| %.2e, semigroup %.2e, limit %.1e", worst_lk, worst_sg, limit)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"norm bound", norm_bound},
      {"kernel closed form", kernel_closed_form_check},
      {"spectral-spatial agreement", spectral_spatial},
      {"epsilon and alpha limits", limits},
      {"Levy system", levy_system},
      {"differential subordination", subordination},
      {"Burkholder bound", burkholder},
      {"projection identity", projection},
      {"L1 mass", l1_mass},
      {"Levy-Khinchin and semigroup", levy_khinchin},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    if (!o.pass) ++failures;
    std::printf("%s criterion %zu: %s -- %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
