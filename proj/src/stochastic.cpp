#include "levymult/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <boost/math/quadrature/gauss.hpp>

#include "levymult/error.hpp"
#include "levymult/fft.hpp"
#include "levymult/parallel.hpp"
#include "levymult/symbol.hpp"
#include "levymult/transform.hpp"

namespace levymult {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::size_t kBlock = 1000;  // paths per reduction block

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

class PathRng {
 public:
  explicit PathRng(std::uint64_t seed) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)};
    rng_.seed(seq);
  }
  double uniform() { return static_cast<double>(rng_() >> 11) * 0x1p-53; }  // [0, 1)

 private:
  std::mt19937_64 rng_;
};

std::int64_t wrap_index(std::int64_t i, std::size_t n) {
  const auto nn = static_cast<std::int64_t>(n);
  const std::int64_t r = i % nn;
  return r < 0 ? r + nn : r;
}

LatticePoint add(LatticePoint a, LatticePoint b) { return {a[0] + b[0], a[1] + b[1]}; }

template <typename Body>
void for_blocks(std::size_t n_paths, unsigned workers, Body&& body) {
  const std::size_t blocks = (n_paths + kBlock - 1) / kBlock;
  parallel_for(blocks, workers, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    body(b, lo, std::min(n_paths, lo + kBlock));
  });
}

std::size_t block_count(std::size_t n_paths) { return (n_paths + kBlock - 1) / kBlock; }

std::size_t time_index(const Ensemble& e, double t) {
  for (std::size_t i = 0; i < e.times.size(); ++i) {
    if (std::abs(e.times[i] - t) <= 1e-12 * std::max(1.0, std::abs(t))) return i;
  }
  throw InvalidInput("time is not among the ensemble's recorded times");
}

std::vector<double> real_parts(const std::vector<Complex>& v, bool imag) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = imag ? v[i].imag() : v[i].real();
  return out;
}

std::pair<double, double> mean_and_stderr(const std::vector<double>& x) {
  const std::size_t n = x.size();
  if (n == 0) return {0.0, 0.0};
  const double mean = pairwise_sum(x) / static_cast<double>(n);
  if (n < 2) return {mean, 0.0};
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = (x[i] - mean) * (x[i] - mean);
  const double var = pairwise_sum(dev) / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

std::string vec_str(const Vector& v) {
  std::ostringstream s;
  s << '(';
  for (std::size_t i = 0; i < v.size(); ++i) s << (i ? "," : "") << v[i];
  s << ')';
  return s.str();
}

}  // namespace

Torus Torus::of(const GridFunction& f) { return Torus{f.dimension(), f.sizes(), f.lengths()}; }

std::array<double, 2> Torus::spacing() const {
  return {lengths[0] / static_cast<double>(sizes[0]),
          dimension == 2 ? lengths[1] / static_cast<double>(sizes[1]) : 1.0};
}

std::size_t Torus::index(LatticePoint p) const {
  const auto i = static_cast<std::size_t>(wrap_index(p[0], sizes[0]));
  if (dimension == 1) return i;
  return i * sizes[1] + static_cast<std::size_t>(wrap_index(p[1], sizes[1]));
}

std::uint64_t path_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

PoissonPath sample_path(const DiscreteLevyMeasure& measure, double s, double u, std::uint64_t seed) {
  if (measure.atoms().empty() || !(measure.total_mass() > 0.0)) throw InvalidInput("sample_path: empty measure");
  if (!(u > s) || !std::isfinite(s) || !std::isfinite(u)) throw InvalidInput("sample_path: need a finite window s < u");
  PoissonPath path;
  path.s = s;
  path.u = u;
  path.seed = seed;
  PathRng rng(seed);
  const double rate = measure.total_mass();
  const auto& atoms = measure.atoms();
  double t = s;
  for (;;) {
    t += -std::log1p(-rng.uniform()) / rate;
    if (!(t <= u)) break;
    if (t == path.s || (!path.times.empty() && t == path.times.back())) continue;  // keep times strictly increasing
    double target = rng.uniform() * rate;
    std::size_t a = 0;
    while (a + 1 < atoms.size() && target >= atoms[a].weight) {
      target -= atoms[a].weight;
      ++a;
    }
    path.times.push_back(t);
    path.atoms.push_back(a);
  }
  return path;
}

LatticePoint path_position(const PoissonPath& path, const LatticeAtoms& atoms, double t, bool left_limit) {
  LatticePoint x{0, 0};
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    if (path.times[i] > t || (left_limit && path.times[i] == t)) break;
    x = add(x, atoms.offsets[path.atoms[i]]);
  }
  return x;
}

std::vector<Complex> jump_weights(const DiscreteLevyMeasure& measure, const JumpModulator& modulator) {
  const auto phi = modulator.on_atoms(LevyMeasure(measure));
  std::vector<Complex> w(phi.size());
  for (std::size_t a = 0; a < phi.size(); ++a) w[a] = measure.atoms()[a].weight * phi[a];
  return w;
}

LatticeAtoms torus_atoms(const DiscreteLevyMeasure& measure, const Torus& torus) {
  if (measure.dimension() != torus.dimension) throw InvalidInput("measure and lattice differ in dimension");
  const auto h = torus.spacing();
  return lattice_atoms(measure, std::span<const double>(h.data(), torus.dimension));
}

SpectralSemigroup::SpectralSemigroup(const LatticeAtoms& atoms, std::vector<Complex> weights, const GridFunction& f,
                                     double u)
    : torus_(Torus::of(f)), u_(u) {
  if (atoms.dimension != torus_.dimension) throw InvalidInput("SpectralSemigroup: dimension mismatch");
  if (weights.size() != atoms.offsets.size()) throw InvalidInput("SpectralSemigroup: one weight per atom required");
  f_hat_ = f.samples();
  fft::forward(f_hat_, torus_.dimension, torus_.sizes);
  const std::size_t n0 = torus_.sizes[0];
  const std::size_t n1 = torus_.dimension == 2 ? torus_.sizes[1] : 1;
  for (std::size_t k = 0; k < torus_.dimension; ++k) {
    std::vector<Complex> r(torus_.sizes[k]);
    for (std::size_t j = 0; j < r.size(); ++j) {
      r[j] = std::polar(1.0, 2.0 * kPi * static_cast<double>(j) / static_cast<double>(torus_.sizes[k]));
    }
    roots_.push_back(std::move(r));
  }
  for (const auto& w : weights) weight_sum_ += w;
  modes_.resize(n0 * n1);
  psi_.assign(n0 * n1, 0.0);
  psi_w_.assign(n0 * n1, Complex{});
  for (std::size_t i = 0; i < n0; ++i) {
    for (std::size_t j = 0; j < n1; ++j) {
      const std::size_t m = i * n1 + j;
      modes_[m] = {GridFunction::signed_index(i, n0), torus_.dimension == 2 ? GridFunction::signed_index(j, n1) : 0};
      for (std::size_t a = 0; a < atoms.offsets.size(); ++a) {
        const Complex e = phase(m, atoms.offsets[a]);
        psi_[m] += atoms.weights[a] * (e.real() - 1.0);
        psi_w_[m] += weights[a] * (e - 1.0);
      }
    }
  }
}

Complex SpectralSemigroup::phase(std::size_t mode, LatticePoint y) const {
  const auto& k = modes_[mode];
  Complex p = roots_[0][static_cast<std::size_t>(wrap_index(k[0] * y[0], torus_.sizes[0]))];
  if (torus_.dimension == 2) p *= roots_[1][static_cast<std::size_t>(wrap_index(k[1] * y[1], torus_.sizes[1]))];
  return p;
}

double SpectralSemigroup::time_factor(std::size_t mode, double a, double b) const {
  const double psi = psi_[mode];
  if (psi == 0.0) return b - a;
  return std::exp((u_ - b) * psi) * std::expm1((b - a) * psi) / psi;
}

Complex SpectralSemigroup::value(double v, LatticePoint y) const {
  if (v > u_) throw InvalidInput("SpectralSemigroup: time after the terminal time");
  Complex sum{};
  for (std::size_t m = 0; m < f_hat_.size(); ++m) {
    if (f_hat_[m] == Complex{}) continue;
    sum += f_hat_[m] * std::exp((u_ - v) * psi_[m]) * phase(m, y);
  }
  return sum / static_cast<double>(f_hat_.size());
}

Complex SpectralSemigroup::compensator(double a, double b, LatticePoint y) const {
  if (!(a <= b) || b > u_) throw InvalidInput("SpectralSemigroup: need a <= b <= u");
  Complex sum{};
  for (std::size_t m = 0; m < f_hat_.size(); ++m) {
    if (f_hat_[m] == Complex{} || psi_w_[m] == Complex{}) continue;
    sum += f_hat_[m] * psi_w_[m] * time_factor(m, a, b) * phase(m, y);
  }
  return sum / static_cast<double>(f_hat_.size());
}

ConvolutionSemigroup::ConvolutionSemigroup(const LatticeAtoms& atoms, std::vector<Complex> weights,
                                           const GridFunction& f, double u, double transition_tol,
                                           double quadrature_tol)
    : atoms_(atoms),
      weights_(std::move(weights)),
      torus_(Torus::of(f)),
      f_(f.samples()),
      u_(u),
      transition_tol_(transition_tol),
      quadrature_tol_(quadrature_tol) {
  if (atoms.dimension != torus_.dimension) throw InvalidInput("ConvolutionSemigroup: dimension mismatch");
  if (weights_.size() != atoms.offsets.size()) throw InvalidInput("ConvolutionSemigroup: one weight per atom required");
}

Complex ConvolutionSemigroup::value(double v, LatticePoint y) const {
  if (v > u_) throw InvalidInput("ConvolutionSemigroup: time after the terminal time");
  const auto p = transition_measure(atoms_, u_ - v, transition_tol_);
  Complex sum{};
  p.for_each([&](LatticePoint z, double w) { sum += w * f_[torus_.index(add(y, z))]; });
  return sum;
}

Complex ConvolutionSemigroup::integrand(double v, LatticePoint y) const {
  const auto p = transition_measure(atoms_, u_ - v, transition_tol_);
  Complex sum{};
  p.for_each([&](LatticePoint z, double w) {
    const LatticePoint q = add(y, z);
    const Complex base = f_[torus_.index(q)];
    Complex inner{};
    for (std::size_t a = 0; a < weights_.size(); ++a) inner += weights_[a] * (f_[torus_.index(add(q, atoms_.offsets[a]))] - base);
    sum += w * inner;
  });
  return sum;
}

Complex ConvolutionSemigroup::compensator(double a, double b, LatticePoint y) const {
  if (!(a <= b) || b > u_) throw InvalidInput("ConvolutionSemigroup: need a <= b <= u");
  if (a == b) return {};
  using GL = boost::math::quadrature::gauss<double, 8>;
  auto composite = [&](std::size_t panels) {
    const double h = (b - a) / static_cast<double>(panels);
    Complex total{};
    for (std::size_t p = 0; p < panels; ++p) {
      const double mid = a + (static_cast<double>(p) + 0.5) * h;
      const auto& x = GL::abscissa();
      const auto& w = GL::weights();
      for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k] == 0.0) {
          total += 0.5 * h * w[k] * integrand(mid, y);
        } else {
          total += 0.5 * h * w[k] * (integrand(mid - 0.5 * h * x[k], y) + integrand(mid + 0.5 * h * x[k], y));
        }
      }
    }
    return total;
  };
  // Eight nodes per unit time to start.
  std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(b - a)));
  Complex prev = composite(panels);
  for (int level = 0; level < 12; ++level) {
    panels *= 2;
    const Complex next = composite(panels);
    if (std::abs(next - prev) <= quadrature_tol_ * std::max(1.0, b - a)) return next;
    prev = next;
  }
  throw ConvergenceFailure("ConvolutionSemigroup: compensator quadrature did not stabilize", prev.real(), 0.0);
}

MartingalePair evolve_martingales(const PoissonPath& path, LatticePoint x, const Semigroup& field,
                                  const LatticeAtoms& atoms, const std::vector<Complex>& phi_on_atoms,
                                  std::span<const double> checkpoints) {
  const double u = field.terminal_time();
  if (path.u != u) throw InvalidInput("evolve_martingales: path window must end at the terminal time");
  if (phi_on_atoms.size() != atoms.offsets.size()) throw InvalidInput("evolve_martingales: phi undefined on some atom");
  std::vector<double> cps(checkpoints.begin(), checkpoints.end());
  std::sort(cps.begin(), cps.end());
  for (double c : cps) {
    if (c < path.s || c > u) throw InvalidInput("evolve_martingales: checkpoint outside the window");
  }
  MartingalePair out;
  out.x = x;
  out.s = path.s;
  out.u = u;
  LatticePoint y = x;
  double t_prev = path.s;
  const Complex g0 = field.value(path.s, y);
  MartingaleSample cur{path.s, g0, Complex{}, std::norm(g0), 0.0, std::norm(g0)};
  out.trajectory.push_back(cur);
  std::size_t ci = 0;
  auto advance_to = [&](double t) {
    cur.F -= field.compensator(t_prev, t, y);
    cur.t = t;
    t_prev = t;
  };
  auto flush_checkpoints = [&](double before) {
    while (ci < cps.size() && cps[ci] < before) {
      advance_to(cps[ci]);
      cur.G = field.value(cps[ci], y);
      out.checkpoints.push_back(cur);
      ++ci;
    }
  };
  for (std::size_t i = 0; i < path.times.size(); ++i) {
    const double S = path.times[i];
    const std::size_t a = path.atoms[i];
    if (a >= phi_on_atoms.size()) throw InvalidInput("evolve_martingales: phi undefined on a jump of the path");
    flush_checkpoints(S);
    advance_to(S);
    const LatticePoint z = atoms.offsets[a];
    const Complex before = field.value(S, y);
    const Complex after = field.value(S, add(y, z));
    const Complex dG = after - before;
    const double g2 = std::norm(dG);
    const double f2 = g2 * std::norm(phi_on_atoms[a]);  // <= g2 exactly since |phi|^2 <= 1
    const double dD = g2 - f2;
    cur.F += phi_on_atoms[a] * dG;
    cur.G = after;
    cur.GG += g2;
    cur.FF += f2;
    const double next_D = cur.D + dD;
    if (dD < 0.0 || next_D < cur.D || next_D < 0.0) ++out.subordination_violations;
    cur.D = next_D;
    y = add(y, z);
    out.trajectory.push_back(cur);
  }
  flush_checkpoints(std::nextafter(u, std::numeric_limits<double>::infinity()));
  advance_to(u);
  cur.G = field.value(u, y);
  out.trajectory.push_back(cur);
  return out;
}

Ensemble run_ensemble(const Scenario& sc, unsigned workers) {
  const Torus torus = Torus::of(sc.f);
  const LatticeAtoms atoms = torus_atoms(sc.measure, torus);
  const auto phi = sc.modulator.on_atoms(LevyMeasure(sc.measure));
  const SpectralSemigroup field(atoms, jump_weights(sc.measure, sc.modulator), sc.f, sc.u);
  if (sc.n_paths == 0) throw InvalidInput("run_ensemble: n_paths must be positive");
  for (double c : sc.checkpoints) {
    if (!(c > sc.s && c < sc.u)) throw InvalidInput("run_ensemble: checkpoints must lie strictly inside (s, u)");
  }
  std::vector<double> cps = sc.checkpoints;
  std::sort(cps.begin(), cps.end());

  Ensemble e;
  e.scenario_id = sc.id;
  e.n_paths = sc.n_paths;
  e.times.push_back(sc.s);
  e.times.insert(e.times.end(), cps.begin(), cps.end());
  e.times.push_back(sc.u);
  e.F.assign(e.times.size(), std::vector<Complex>(sc.n_paths));
  e.G.assign(e.times.size(), std::vector<Complex>(sc.n_paths));
  e.FF_u.assign(sc.n_paths, 0.0);
  e.GG_u.assign(sc.n_paths, 0.0);
  e.jump_counts.assign(sc.n_paths, 0);

  const auto* c = std::get_if<JumpModulator::Constant>(&sc.modulator.kind());
  const bool identity = c != nullptr && c->value == Complex(1.0, 0.0);

  const std::size_t blocks = block_count(sc.n_paths);
  std::vector<std::size_t> violations(blocks, 0);
  std::vector<std::size_t> checked(blocks, 0);
  std::vector<double> gaps(blocks, 0.0);
  for_blocks(sc.n_paths, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const PoissonPath path = sample_path(sc.measure, sc.s, sc.u, path_seed(sc.seed, p));
      const MartingalePair pair = evolve_martingales(path, sc.x, field, atoms, phi, cps);
      const auto& first = pair.trajectory.front();
      const auto& last = pair.trajectory.back();
      e.F[0][p] = first.F;
      e.G[0][p] = first.G;
      for (std::size_t k = 0; k < pair.checkpoints.size(); ++k) {
        e.F[k + 1][p] = pair.checkpoints[k].F;
        e.G[k + 1][p] = pair.checkpoints[k].G;
      }
      e.F.back()[p] = last.F;
      e.G.back()[p] = last.G;
      e.FF_u[p] = last.FF;
      e.GG_u[p] = last.GG;
      e.jump_counts[p] = static_cast<std::uint32_t>(path.jump_count());
      violations[b] += pair.subordination_violations;
      checked[b] += path.jump_count();
      if (identity) {
        for (std::size_t k = 0; k < e.times.size(); ++k) {
          gaps[b] = std::max(gaps[b], std::abs(e.F[k][p] - (e.G[k][p] - first.G)));
        }
      }
    }
  });
  for (std::size_t b = 0; b < blocks; ++b) {
    e.subordination_violations += violations[b];
    e.increments_checked += checked[b];
    e.identity_gap = std::max(e.identity_gap, gaps[b]);
  }
  return e;
}

bool MeanEstimate::within(double k, double slack) const {
  return std::abs(mean.real()) <= k * stderr_re + slack && std::abs(mean.imag()) <= k * stderr_im + slack;
}

MeanEstimate estimate_mean(const std::vector<Complex>& samples) {
  const auto re = mean_and_stderr(real_parts(samples, false));
  const auto im = mean_and_stderr(real_parts(samples, true));
  return {Complex(re.first, im.first), re.second, im.second};
}

MeanEstimate estimate_mean(const std::vector<double>& samples) {
  const auto re = mean_and_stderr(samples);
  return {Complex(re.first, 0.0), re.second, 0.0};
}

MartingaleReport martingale_property_check(const Ensemble& e, double t1, double t2) {
  if (!(t1 < t2)) throw InvalidInput("martingale_property_check: need t1 < t2");
  const std::size_t i1 = time_index(e, t1);
  const std::size_t i2 = time_index(e, t2);
  std::vector<Complex> dF(e.n_paths);
  std::vector<Complex> dG(e.n_paths);
  double scale = 0.0;
  for (std::size_t p = 0; p < e.n_paths; ++p) {
    dF[p] = e.F[i2][p] - e.F[i1][p];
    dG[p] = e.G[i2][p] - e.G[i1][p];
    scale = std::max(scale, std::abs(e.G[i1][p]));
  }
  MartingaleReport r;
  r.t1 = t1;
  r.t2 = t2;
  r.dF = estimate_mean(dF);
  r.dG = estimate_mean(dG);
  const double slack = 1e-12 * std::max(1.0, scale);
  r.pass = r.dF.within(3.0, slack) && r.dG.within(3.0, slack);
  return r;
}

std::vector<BurkholderRow> burkholder_bound_check(const Ensemble& e, const std::vector<double>& p_list) {
  std::vector<BurkholderRow> rows;
  const auto& F = e.F.back();
  const auto& G = e.G.back();
  for (double p : p_list) {
    const PStar ps(p);
    std::vector<double> fp(e.n_paths);
    std::vector<double> gp(e.n_paths);
    for (std::size_t i = 0; i < e.n_paths; ++i) {
      fp[i] = std::pow(std::abs(F[i]), p);
      gp[i] = std::pow(std::abs(G[i]), p);
    }
    const auto l = mean_and_stderr(fp);
    const auto g = mean_and_stderr(gp);
    const double c = std::pow(ps.bound(), p);
    BurkholderRow row;
    row.p = p;
    row.lhs = l.first;
    row.lhs_stderr = l.second;
    row.rhs = c * g.first;
    row.rhs_stderr = c * g.second;
    row.margin = row.rhs - row.lhs;
    row.pass = row.lhs <= row.rhs + 3.0 * std::hypot(row.lhs_stderr, row.rhs_stderr);
    rows.push_back(row);
  }
  return rows;
}

std::string Functional::name() const {
  std::ostringstream s;
  switch (kind) {
    case Kind::constant: s << "constant(" << value << ")"; break;
    case Kind::jump_indicator: s << "jump_indicator" << vec_str(point); break;
    case Kind::jump_coordinate: s << "jump_coordinate(" << axis << ")"; break;
    case Kind::time_weighted: s << "time_weighted(" << axis << ")"; break;
    case Kind::position_cosine: s << "position_cosine" << vec_str(point); break;
    case Kind::endpoint_indicator: s << "endpoint_indicator(" << radius << ")"; break;
    case Kind::position_coordinate: s << "position_coordinate(" << axis << ")"; break;
  }
  return s.str();
}

double Functional::bound(const DiscreteLevyMeasure& measure) const {
  const std::size_t d = measure.dimension();
  auto check_axis = [&] {
    if (axis == 0 || axis > d) throw InvalidInput("functional: axis out of range");
  };
  double zmax = 0.0;
  switch (kind) {
    case Kind::constant:
      return std::isfinite(value) ? std::abs(value) : std::numeric_limits<double>::infinity();
    case Kind::jump_indicator:
      if (point.size() != d) throw InvalidInput("functional: jump_indicator point has the wrong dimension");
      return 1.0;
    case Kind::jump_coordinate:
    case Kind::time_weighted:
      check_axis();
      for (const auto& a : measure.atoms()) zmax = std::max(zmax, std::abs(a.location[axis - 1]));
      return kind == Kind::jump_coordinate ? zmax : zmax * zmax;
    case Kind::position_cosine:
      if (point.size() != d) throw InvalidInput("functional: position_cosine frequency has the wrong dimension");
      return 1.0;
    case Kind::endpoint_indicator:
      return 1.0;
    case Kind::position_coordinate:
      check_axis();
      return std::numeric_limits<double>::infinity();
  }
  return std::numeric_limits<double>::infinity();
}

double Functional::operator()(double v, std::span<const double> y, std::span<const double> w, double s,
                              double t) const {
  switch (kind) {
    case Kind::constant:
      return value;
    case Kind::jump_indicator: {
      for (std::size_t k = 0; k < y.size(); ++k) {
        if (std::abs((w[k] - y[k]) - point[k]) > 1e-9 * std::max(1.0, std::abs(point[k]))) return 0.0;
      }
      return 1.0;
    }
    case Kind::jump_coordinate:
      return w[axis - 1] - y[axis - 1];
    case Kind::time_weighted: {
      const double dz = w[axis - 1] - y[axis - 1];
      return (v - s) / (t - s) * dz * dz;
    }
    case Kind::position_cosine: {
      double ph = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) ph += point[k] * y[k];
      return std::cos(ph);
    }
    case Kind::endpoint_indicator: {
      double m = 0.0;
      for (double c : w) m = std::max(m, std::abs(c));
      return m <= radius * (1.0 + 1e-12) ? 1.0 : 0.0;
    }
    case Kind::position_coordinate:
      return y[axis - 1];
  }
  return 0.0;
}

std::vector<Functional> standard_functionals(const DiscreteLevyMeasure& measure) {
  using K = Functional::Kind;
  const std::size_t d = measure.dimension();
  double rmax = 0.0;
  for (const auto& a : measure.atoms()) {
    for (double c : a.location) rmax = std::max(rmax, std::abs(c));
  }
  std::vector<Functional> out;
  out.push_back({K::constant, 1.0, {}, 1, 0.0});
  out.push_back({K::jump_indicator, 1.0, measure.atoms().front().location, 1, 0.0});
  out.push_back({K::jump_coordinate, 1.0, {}, 1, 0.0});
  out.push_back({K::time_weighted, 1.0, {}, 1, 0.0});
  out.push_back({K::position_cosine, 1.0, Vector(d, 0.9 / rmax), 1, 0.0});
  out.push_back({K::endpoint_indicator, 1.0, {}, 1, rmax});
  return out;
}

std::vector<LevySystemRow> levy_system_check(const DiscreteLevyMeasure& measure,
                                             const std::vector<Functional>& functionals, double s, double t,
                                             std::size_t n_paths, std::uint64_t seed, unsigned workers,
                                             std::span<const double> lattice_scale) {
  if (!(t > s)) throw InvalidInput("levy_system_check: need s < t");
  if (n_paths < 2) throw InvalidInput("levy_system_check: need at least two paths");
  for (const auto& fn : functionals) {
    if (!std::isfinite(fn.bound(measure))) throw InvalidInput("levy_system_check: functional " + fn.name() + " is unbounded");
  }
  const LatticeAtoms atoms = lattice_atoms(measure, lattice_scale);
  const std::size_t d = measure.dimension();
  auto physical = [&](LatticePoint p) {
    Vector v(d);
    for (std::size_t k = 0; k < d; ++k) v[k] = static_cast<double>(p[k]) * atoms.scale[k];
    return v;
  };

  // Left side: Monte Carlo over paths.
  std::vector<std::vector<double>> samples(functionals.size(), std::vector<double>(n_paths));
  for_blocks(n_paths, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) {
      const PoissonPath path = sample_path(measure, s, t, path_seed(seed, p));
      std::vector<double> acc(functionals.size(), 0.0);
      LatticePoint x{0, 0};
      for (std::size_t i = 0; i < path.times.size(); ++i) {
        const LatticePoint next = add(x, atoms.offsets[path.atoms[i]]);
        const Vector y = physical(x);
        const Vector w = physical(next);
        for (std::size_t f = 0; f < functionals.size(); ++f) acc[f] += functionals[f](path.times[i], y, w, s, t);
        x = next;
      }
      for (std::size_t f = 0; f < functionals.size(); ++f) samples[f][p] = acc[f];
    }
  });

  // Right side: composite Gauss-Legendre in v against p_{v-s}, doubled until stable.
  using GL = boost::math::quadrature::gauss<double, 8>;
  auto integrand = [&](double v, std::vector<double>& out) {
    const auto p = transition_measure(atoms, v - s);
    std::fill(out.begin(), out.end(), 0.0);
    p.for_each([&](LatticePoint y, double py) {
      const Vector yv = physical(y);
      for (std::size_t a = 0; a < atoms.offsets.size(); ++a) {
        const Vector wv = physical(add(y, atoms.offsets[a]));
        for (std::size_t f = 0; f < functionals.size(); ++f) {
          out[f] += py * atoms.weights[a] * functionals[f](v, yv, wv, s, t);
        }
      }
    });
  };
  auto composite = [&](std::size_t panels) {
    std::vector<double> total(functionals.size(), 0.0);
    std::vector<double> val(functionals.size());
    const double h = (t - s) / static_cast<double>(panels);
    for (std::size_t q = 0; q < panels; ++q) {
      const double mid = s + (static_cast<double>(q) + 0.5) * h;
      for (std::size_t k = 0; k < GL::abscissa().size(); ++k) {
        const double x = GL::abscissa()[k];
        const double w = GL::weights()[k];
        for (double sign : {-1.0, 1.0}) {
          if (x == 0.0 && sign > 0.0) continue;
          integrand(mid + sign * 0.5 * h * x, val);
          for (std::size_t f = 0; f < val.size(); ++f) total[f] += 0.5 * h * w * val[f];
        }
      }
    }
    return total;
  };
  std::size_t panels = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t - s)));
  std::vector<double> prev = composite(panels);
  std::vector<double> diff(functionals.size(), std::numeric_limits<double>::infinity());
  for (int level = 0; level < 8; ++level) {
    panels *= 2;
    const std::vector<double> next = composite(panels);
    double worst = 0.0;
    for (std::size_t f = 0; f < next.size(); ++f) {
      diff[f] = std::abs(next[f] - prev[f]);
      worst = std::max(worst, diff[f] / std::max(1.0, std::abs(next[f])));
    }
    prev = next;
    if (worst <= 1e-12) break;
  }

  std::vector<LevySystemRow> rows;
  for (std::size_t f = 0; f < functionals.size(); ++f) {
    const auto [mean, se] = mean_and_stderr(samples[f]);
    LevySystemRow row;
    row.functional = functionals[f].name();
    row.lhs = mean;
    row.lhs_stderr = se;
    row.rhs = prev[f];
    row.rhs_error = diff[f];
    row.pass = std::abs(row.lhs - row.rhs) <= 3.0 * se + row.rhs_error + 1e-12 * std::max(1.0, std::abs(row.rhs));
    rows.push_back(row);
  }
  return rows;
}

std::vector<ExchangeabilityRow> exchangeability_check(const DiscreteLevyMeasure& measure, double s, double t,
                                                      std::size_t n_paths, std::uint64_t seed,
                                                      const std::vector<std::size_t>& n_values, unsigned workers) {
  std::vector<PoissonPath> paths(n_paths);
  for_blocks(n_paths, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    for (std::size_t p = lo; p < hi; ++p) paths[p] = sample_path(measure, s, t, path_seed(seed, p));
  });
  std::vector<ExchangeabilityRow> rows;
  for (std::size_t n : n_values) {
    std::vector<double> pooled;
    for (const auto& path : paths) {
      if (path.jump_count() != n) continue;
      for (double x : path.times) pooled.push_back((x - s) / (t - s));
    }
    ExchangeabilityRow row;
    row.n = n;
    row.samples = pooled.size();
    if (!pooled.empty()) {
      std::sort(pooled.begin(), pooled.end());
      const double m = static_cast<double>(pooled.size());
      for (std::size_t i = 0; i < pooled.size(); ++i) {
        const double x = pooled[i];
        row.ks_statistic = std::max({row.ks_statistic, (static_cast<double>(i) + 1.0) / m - x, x - static_cast<double>(i) / m});
      }
      row.critical = 1.628 / std::sqrt(m);
      row.pass = row.ks_statistic <= row.critical;
    }
    rows.push_back(row);
  }
  return rows;
}

ProjectionResult projection_identity_check(const DiscreteLevyMeasure& measure, const JumpModulator& modulator,
                                           const GridFunction& f, double s, std::size_t n_paths,
                                           std::uint64_t seed, unsigned workers) {
  if (!(s < 0.0)) throw InvalidInput("projection_identity_check: need s < 0");
  if (measure.total_mass() * std::abs(s) > kProjectionWindowGuard) {
    throw InvalidInput("projection_identity_check: window too long for the Monte Carlo variance guard");
  }
  if (n_paths < 2) throw InvalidInput("projection_identity_check: need at least two paths");
  const double u = 0.0;
  const Torus torus = Torus::of(f);
  const LatticeAtoms atoms = torus_atoms(measure, torus);
  const auto phi = modulator.on_atoms(LevyMeasure(measure));
  const SpectralSemigroup field(atoms, jump_weights(measure, modulator), f, u);
  const std::size_t n = torus.size();

  ProjectionResult r;
  r.h_spec = apply_multiplier(f, MultiplierSymbol::finite_time(LevyMeasure(measure), modulator, s)).samples();

  const std::size_t blocks = block_count(n_paths);
  std::vector<std::vector<Complex>> sum(blocks, std::vector<Complex>(n));
  std::vector<std::vector<double>> sum_sq(blocks, std::vector<double>(n));
  for_blocks(n_paths, workers, [&](std::size_t b, std::size_t lo, std::size_t hi) {
    fft::Plan inverse(torus.dimension, torus.sizes, false);
    std::vector<Complex> fh(n);
    for (std::size_t p = lo; p < hi; ++p) {
      const PoissonPath path = sample_path(measure, s, u, path_seed(seed, p));
      std::fill(fh.begin(), fh.end(), Complex{});
      LatticePoint x{0, 0};
      double t_prev = s;
      auto compensate = [&](double a, double c) {
        for (std::size_t m = 0; m < n; ++m) {
          if (field.psi_weighted()[m] == Complex{}) continue;
          fh[m] -= field.f_hat()[m] * field.psi_weighted()[m] * field.time_factor(m, a, c) * field.phase(m, x);
        }
      };
      for (std::size_t i = 0; i < path.times.size(); ++i) {
        const double S = path.times[i];
        const std::size_t a = path.atoms[i];
        compensate(t_prev, S);
        const LatticePoint z = atoms.offsets[a];
        for (std::size_t m = 0; m < n; ++m) {
          const Complex e = std::exp((u - S) * field.psi()[m]) * field.f_hat()[m];
          fh[m] += phi[a] * e * (field.phase(m, add(x, z)) - field.phase(m, x));
        }
        x = add(x, z);
        t_prev = S;
      }
      compensate(t_prev, u);
      // h(y) = F_u(y - X_{s,u}).
      for (std::size_t m = 0; m < n; ++m) fh[m] *= std::conj(field.phase(m, x));
      inverse.execute(fh);
      for (std::size_t y = 0; y < n; ++y) {
        sum[b][y] += fh[y];
        sum_sq[b][y] += std::norm(fh[y]);
      }
    }
  });
  std::vector<Complex> total(n);
  std::vector<double> total_sq(n);
  for (std::size_t b = 0; b < blocks; ++b) {
    for (std::size_t y = 0; y < n; ++y) {
      total[y] += sum[b][y];
      total_sq[y] += sum_sq[b][y];
    }
  }
  const double np = static_cast<double>(n_paths);
  r.h_mc.resize(n);
  r.h_stderr.resize(n);
  double err2 = 0.0;
  double se2 = 0.0;
  double spec2 = 0.0;
  for (std::size_t y = 0; y < n; ++y) {
    r.h_mc[y] = total[y] / np;
    const double var = std::max(0.0, (total_sq[y] - np * std::norm(r.h_mc[y])) / (np - 1.0));
    r.h_stderr[y] = std::sqrt(var / np);
    err2 += std::norm(r.h_mc[y] - r.h_spec[y]);
    se2 += r.h_stderr[y] * r.h_stderr[y];
    spec2 += std::norm(r.h_spec[y]);
  }
  r.error_l2 = std::sqrt(err2);
  r.stderr_l2 = std::sqrt(se2);
  r.spec_l2 = std::sqrt(spec2);
  r.pass = r.error_l2 <= 5.0 * r.stderr_l2 + 1e-12 * r.spec_l2;
  return r;
}

L1MassResult l1_mass_check(const DiscreteLevyMeasure& measure, const JumpModulator& modulator,
                           const GridFunction& f, double s, double t, double u, std::size_t n_paths,
                           std::uint64_t seed, unsigned workers) {
  if (!(s < t && t <= u)) throw InvalidInput("l1_mass_check: need s < t <= u");
  const auto phi = modulator.on_atoms(LevyMeasure(measure));
  for (const auto& v : phi) {
    if (std::abs(std::abs(v) - 1.0) > 1e-15) throw InvalidInput("l1_mass_check: requires |phi| == 1 on every atom");
  }
  const Torus torus = Torus::of(f);
  const LatticeAtoms atoms = torus_atoms(measure, torus);
  GridFunction abs_f = f;
  for (auto& v : abs_f.samples()) v = std::abs(v);
  std::vector<Complex> weights(phi.size());
  for (std::size_t a = 0; a < phi.size(); ++a) weights[a] = atoms.weights[a] * std::abs(phi[a]);
  const SpectralSemigroup field(atoms, weights, abs_f, u);
  const std::size_t n = torus.size();
  const double cell = f.cell_volume();

  std::vector<double> samples(n_paths);
  for_blocks(n_paths, workers, [&](std::size_t, std::size_t lo, std::size_t hi) {
    fft::Plan inverse(torus.dimension, torus.sizes, false);
    std::vector<Complex> acc(n);
    for (std::size_t p = lo; p < hi; ++p) {
      const PoissonPath path = sample_path(measure, s, t, path_seed(seed, p));
      std::fill(acc.begin(), acc.end(), Complex{});
      LatticePoint x{0, 0};
      double t_prev = s;
      // |F|_t(.) for every base point, assembled in Fourier space.
      auto compensate = [&](double a, double c) {
        for (std::size_t m = 0; m < n; ++m) {
          const Complex mult = field.psi_weighted()[m] + 2.0 * field.weight_sum();
          acc[m] += field.f_hat()[m] * mult * field.time_factor(m, a, c) * field.phase(m, x);
        }
      };
      for (std::size_t i = 0; i < path.times.size(); ++i) {
        const double S = path.times[i];
        const std::size_t a = path.atoms[i];
        compensate(t_prev, S);
        const LatticePoint z = atoms.offsets[a];
        for (std::size_t m = 0; m < n; ++m) {
          const Complex e = std::exp((u - S) * field.psi()[m]) * field.f_hat()[m];
          acc[m] += std::abs(phi[a]) * e * (field.phase(m, add(x, z)) + field.phase(m, x));
        }
        x = add(x, z);
        t_prev = S;
      }
      compensate(t_prev, t);
      inverse.execute(acc);
      double total = 0.0;
      for (const auto& v : acc) total += v.real();
      samples[p] = total * cell;
    }
  });
  double norm1 = 0.0;
  for (const auto& v : f.samples()) norm1 += std::abs(v);
  norm1 *= cell;
  L1MassResult r;
  r.estimate = estimate_mean(samples);
  r.expected = 4.0 * (t - s) * measure.total_mass() * norm1;
  r.pass = std::abs(r.estimate.mean.real() - r.expected) <= 3.0 * r.estimate.stderr_re + 1e-12 * r.expected;
  return r;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidInput("loglog_slope: need two or more matching points");
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += std::log(x[i]);
    my += std::log(y[i]);
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace levymult
