#include "levymult/json_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

#include "levymult/error.hpp"

namespace levymult {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const Json& require(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  const auto it = j.find(key);
  if (it == j.end()) throw InvalidInput(where + ": missing field \"" + key + "\"");
  return *it;
}

std::string kind_of(const Json& j, const std::string& where) {
  const Json& k = require(j, "kind", where);
  if (!k.is_string()) throw InvalidInput(where + ": \"kind\" must be a string");
  return k.get<std::string>();
}

std::size_t size_from_json(const Json& j, const std::string& where) {
  const double v = number_from_json(j, where);
  if (!(v >= 0.0) || v != std::floor(v) || v > 9.007199254740992e15) {
    throw InvalidInput(where + ": expected a nonnegative integer");
  }
  return static_cast<std::size_t>(v);
}

std::uint64_t u64_from_json(const Json& j, const std::string& where) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    std::uint64_t v = 0;
    const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec == std::errc() && p == s.data() + s.size()) return v;
  }
  if (j.is_number_integer() && j.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(j.get<std::int64_t>());
  throw InvalidInput(where + ": expected an unsigned 64-bit integer");
}

std::size_t get_size(const Json& j, const char* key, const std::string& where, std::size_t fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : size_from_json(*it, where + "." + key);
}

double get_number(const Json& j, const char* key, const std::string& where, double fallback) {
  const auto it = j.find(key);
  return it == j.end() ? fallback : number_from_json(*it, where + "." + key);
}

Vector vector_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw InvalidInput(where + ": expected an array");
  Vector v;
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_from_json(j[i], where + "[" + std::to_string(i) + "]"));
  return v;
}

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(number_to_json(x));
  return a;
}

bool parse_decimal(std::string_view s, double& out) {
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && p == s.data() + s.size();
}

}  // namespace

double number_from_json(const Json& j, const std::string& where) {
  if (j.is_number()) return j.get<double>();
  if (!j.is_string()) throw InvalidInput(where + ": expected a number or a numeric string");
  const std::string s = j.get<std::string>();
  if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const std::string_view body = !s.empty() && s[0] == '+' ? std::string_view(s).substr(1) : std::string_view(s);
  if (const auto slash = body.find('/'); slash != std::string_view::npos) {
    double num = 0.0;
    double den = 0.0;
    if (parse_decimal(body.substr(0, slash), num) && parse_decimal(body.substr(slash + 1), den) && den != 0.0) {
      return num / den;
    }
  } else if (parse_decimal(body, v) && std::isfinite(v)) {
    return v;
  }
  throw InvalidInput(where + ": cannot parse \"" + s + "\" as a number");
}

Json number_to_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Complex complex_from_json(const Json& j, const std::string& where) {
  if (j.is_object()) {
    return {get_number(j, "re", where, 0.0), get_number(j, "im", where, 0.0)};
  }
  return {number_from_json(j, where), 0.0};
}

Json complex_to_json(Complex c) {
  if (c.imag() == 0.0) return number_to_json(c.real());
  return Json{{"re", number_to_json(c.real())}, {"im", number_to_json(c.imag())}};
}

LevyMeasure measure_from_json(const Json& j) {
  const std::string where = "measure";
  const std::string kind = kind_of(j, where);
  if (kind == "discrete") {
    const std::size_t d = size_from_json(require(j, "dimension", where), where + ".dimension");
    const Json& atoms = require(j, "atoms", where);
    if (!atoms.is_array() || atoms.empty()) throw InvalidInput(where + ".atoms: expected a nonempty array");
    std::vector<Atom> list;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      const std::string w = where + ".atoms[" + std::to_string(i) + "]";
      list.push_back({vector_from_json(require(atoms[i], "location", w), w + ".location"),
                      number_from_json(require(atoms[i], "weight", w), w + ".weight")});
    }
    const bool symmetrize = j.value("symmetrize", false);
    return symmetrize ? DiscreteLevyMeasure::symmetrized(d, list) : DiscreteLevyMeasure(d, std::move(list));
  }
  if (kind == "stable") {
    const std::size_t d = size_from_json(require(j, "dimension", where), where + ".dimension");
    const double alpha = number_from_json(require(j, "alpha", where), where + ".alpha");
    const double eps = get_number(j, "epsilon", where, 0.0);
    double outer = std::numeric_limits<double>::infinity();
    if (const auto it = j.find("outer_radius"); it != j.end() && !it->is_null()) {
      outer = number_from_json(*it, where + ".outer_radius");
    }
    const auto it = j.find("angular");
    if (it == j.end()) return TruncatedStableMeasure::axis_stable(d, alpha, eps, outer);
    if (!it->is_array()) throw InvalidInput(where + ".angular: expected an array");
    std::vector<AngularAtom> list;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const std::string w = where + ".angular[" + std::to_string(i) + "]";
      list.push_back({vector_from_json(require((*it)[i], "direction", w), w + ".direction"),
                      number_from_json(require((*it)[i], "weight", w), w + ".weight")});
      if (list.back().direction.size() != d) throw InvalidInput(w + ": direction has the wrong dimension");
    }
    return TruncatedStableMeasure(alpha, eps, outer, std::move(list));
  }
  throw InvalidInput(where + ": unknown kind \"" + kind + "\"");
}

Json measure_to_json(const LevyMeasure& measure) {
  return std::visit(overloaded{
                        [](const DiscreteLevyMeasure& m) {
                          Json atoms = Json::array();
                          for (const auto& a : m.atoms()) {
                            atoms.push_back({{"location", vector_to_json(a.location)},
                                             {"weight", number_to_json(a.weight)}});
                          }
                          return Json{{"kind", "discrete"}, {"dimension", m.dimension()}, {"atoms", atoms}};
                        },
                        [](const TruncatedStableMeasure& m) {
                          Json angular = Json::array();
                          for (const auto& a : m.angular_atoms()) {
                            angular.push_back({{"direction", vector_to_json(a.direction)},
                                               {"weight", number_to_json(a.weight)}});
                          }
                          Json out{{"kind", "stable"},
                                   {"dimension", m.dimension()},
                                   {"alpha", number_to_json(m.alpha())},
                                   {"epsilon", number_to_json(m.epsilon())},
                                   {"angular", angular}};
                          out["outer_radius"] = std::isinf(m.outer_radius()) ? Json(nullptr)
                                                                              : number_to_json(m.outer_radius());
                          return out;
                        },
                    },
                    measure);
}

JumpModulator modulator_from_json(const Json& j) {
  const std::string where = "modulator";
  const std::string kind = kind_of(j, where);
  if (kind == "constant") return JumpModulator::constant(complex_from_json(require(j, "value", where), where + ".value"));
  if (kind == "axis_indicator") {
    return JumpModulator::axis_indicator(size_from_json(require(j, "axis", where), where + ".axis"));
  }
  if (kind == "per_axis") {
    return JumpModulator(JumpModulator::PerAxis{vector_from_json(require(j, "coefficients", where), where + ".coefficients")});
  }
  if (kind == "sign_pattern") {
    return JumpModulator(JumpModulator::SignPattern{vector_from_json(require(j, "signs", where), where + ".signs")});
  }
  if (kind == "table") {
    const Json& entries = require(j, "entries", where);
    if (!entries.is_array()) throw InvalidInput(where + ".entries: expected an array");
    JumpModulator::Table t;
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string w = where + ".entries[" + std::to_string(i) + "]";
      t.entries.emplace_back(vector_from_json(require(entries[i], "location", w), w + ".location"),
                             complex_from_json(require(entries[i], "value", w), w + ".value"));
    }
    return JumpModulator(std::move(t));
  }
  throw InvalidInput(where + ": unknown kind \"" + kind + "\"");
}

Json modulator_to_json(const JumpModulator& modulator) {
  return std::visit(overloaded{
                        [](const JumpModulator::Constant& c) {
                          return Json{{"kind", "constant"}, {"value", complex_to_json(c.value)}};
                        },
                        [](const JumpModulator::AxisIndicator& a) {
                          return Json{{"kind", "axis_indicator"}, {"axis", a.axis}};
                        },
                        [](const JumpModulator::PerAxis& p) {
                          return Json{{"kind", "per_axis"}, {"coefficients", vector_to_json(p.coefficients)}};
                        },
                        [](const JumpModulator::SignPattern& s) {
                          return Json{{"kind", "sign_pattern"}, {"signs", vector_to_json(s.signs)}};
                        },
                        [](const JumpModulator::Table& t) {
                          Json entries = Json::array();
                          for (const auto& [z, v] : t.entries) {
                            entries.push_back({{"location", vector_to_json(z)}, {"value", complex_to_json(v)}});
                          }
                          return Json{{"kind", "table"}, {"entries", entries}};
                        },
                    },
                    modulator.kind());
}

MeasureDocument measure_document_from_json(const Json& j) {
  MeasureDocument doc{measure_from_json(j), std::nullopt};
  if (const auto it = j.find("modulator"); it != j.end()) doc.modulator = modulator_from_json(*it);
  return doc;
}

namespace {

std::pair<LevyMeasure, JumpModulator> measure_and_modulator(const Json& j, const std::string& where) {
  const MeasureDocument doc = measure_document_from_json(require(j, "measure", where));
  if (const auto it = j.find("modulator"); it != j.end()) return {doc.measure, modulator_from_json(*it)};
  if (!doc.modulator) throw InvalidInput(where + ": missing field \"modulator\"");
  return {doc.measure, *doc.modulator};
}

}  // namespace

MultiplierSymbol symbol_from_json(const Json& j) {
  const std::string where = "symbol";
  const std::string kind = kind_of(j, where);
  auto idx = [&](const char* key) { return size_from_json(require(j, key, where), where + "." + key); };
  if (kind == "general") {
    auto [m, phi] = measure_and_modulator(j, where);
    return MultiplierSymbol::general(std::move(m), std::move(phi));
  }
  if (kind == "finite_time") {
    auto [m, phi] = measure_and_modulator(j, where);
    return MultiplierSymbol::finite_time(std::move(m), std::move(phi),
                                         number_from_json(require(j, "s", where), where + ".s"));
  }
  if (kind == "power") {
    return MultiplierSymbol::power(number_from_json(require(j, "alpha", where), where + ".alpha"), idx("j"), idx("d"));
  }
  if (kind == "riesz2") return MultiplierSymbol::riesz2(idx("j"), idx("d"));
  if (kind == "riesz_pair") return MultiplierSymbol::riesz_pair(idx("j"), idx("k"), idx("d"));
  if (kind == "riesz_combo") {
    return MultiplierSymbol::riesz_combo(vector_from_json(require(j, "coefficients", where), where + ".coefficients"));
  }
  if (kind == "beurling_ahlfors") return MultiplierSymbol::beurling_ahlfors();
  if (kind == "first_order_riesz") return MultiplierSymbol::first_order_riesz(idx("j"), idx("d"));
  if (kind == "constant") {
    return MultiplierSymbol::constant(complex_from_json(require(j, "value", where), where + ".value"),
                                      get_size(j, "d", where, 0));
  }
  if (kind == "product") {
    const Json& f = require(j, "factors", where);
    if (!f.is_array()) throw InvalidInput(where + ".factors: expected an array");
    std::vector<MultiplierSymbol> factors;
    for (const auto& e : f) factors.push_back(symbol_from_json(e));
    return MultiplierSymbol::product(std::move(factors));
  }
  throw InvalidInput(where + ": unknown kind \"" + kind + "\"");
}

Json symbol_to_json(const MultiplierSymbol& symbol) {
  using S = MultiplierSymbol;
  return std::visit(overloaded{
                        [](const S::General& g) {
                          return Json{{"kind", "general"},
                                      {"measure", measure_to_json(g.symbol.measure())},
                                      {"modulator", modulator_to_json(g.symbol.modulator())}};
                        },
                        [](const S::FiniteTime& f) {
                          return Json{{"kind", "finite_time"},
                                      {"measure", measure_to_json(f.symbol.measure())},
                                      {"modulator", modulator_to_json(f.symbol.modulator())},
                                      {"s", number_to_json(f.s)}};
                        },
                        [](const S::Power& p) {
                          return Json{{"kind", "power"}, {"alpha", number_to_json(p.alpha)}, {"j", p.j}, {"d", p.d}};
                        },
                        [](const S::Riesz2& r) { return Json{{"kind", "riesz2"}, {"j", r.j}, {"d", r.d}}; },
                        [](const S::RieszPair& r) {
                          return Json{{"kind", "riesz_pair"}, {"j", r.j}, {"k", r.k}, {"d", r.d}};
                        },
                        [](const S::RieszCombo& r) {
                          return Json{{"kind", "riesz_combo"}, {"coefficients", vector_to_json(r.coefficients)}};
                        },
                        [](const S::BeurlingAhlfors&) { return Json{{"kind", "beurling_ahlfors"}}; },
                        [](const S::FirstOrderRiesz& r) {
                          return Json{{"kind", "first_order_riesz"}, {"j", r.j}, {"d", r.d}};
                        },
                        [](const S::Constant& c) {
                          return Json{{"kind", "constant"}, {"value", complex_to_json(c.value)}, {"d", c.d}};
                        },
                        [](const S::Product& p) {
                          Json factors = Json::array();
                          for (const auto& f : p.factors) factors.push_back(symbol_to_json(f));
                          return Json{{"kind", "product"}, {"factors", factors}};
                        },
                    },
                    symbol.kind());
}

GridFunction grid_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string where = "grid";
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  if (const auto it = j.find("file"); it != j.end()) {
    if (!it->is_string()) throw InvalidInput(where + ".file: expected a path string");
    std::filesystem::path p = it->get<std::string>();
    if (p.is_relative()) p = base_dir / p;
    return read_grid_file(p.string());
  }
  const std::size_t d = size_from_json(require(j, "dimension", where), where + ".dimension");
  if (d != 1 && d != 2) throw InvalidInput(where + ".dimension: must be 1 or 2");
  const Vector sizes = vector_from_json(require(j, "sizes", where), where + ".sizes");
  const Vector lengths = vector_from_json(require(j, "lengths", where), where + ".lengths");
  if (sizes.size() != d || lengths.size() != d) throw InvalidInput(where + ": sizes and lengths need one entry per axis");
  std::array<std::size_t, 2> n{1, 1};
  std::array<double, 2> len{1.0, 1.0};
  for (std::size_t k = 0; k < d; ++k) {
    n[k] = size_from_json(sizes[k], where + ".sizes");
    len[k] = lengths[k];
  }
  const Json& values = require(j, "values", where);
  if (!values.is_array()) throw InvalidInput(where + ".values: expected an array");
  std::vector<Complex> samples;
  for (std::size_t i = 0; i < values.size(); ++i) {
    samples.push_back(complex_from_json(values[i], where + ".values[" + std::to_string(i) + "]"));
  }
  if (samples.size() != n[0] * n[1]) throw InvalidInput(where + ".values: length does not match sizes");
  return GridFunction(d, n, len, std::move(samples));
}

Json grid_to_json(const GridFunction& f) {
  const std::size_t d = f.dimension();
  Json sizes = Json::array();
  Json lengths = Json::array();
  for (std::size_t k = 0; k < d; ++k) {
    sizes.push_back(f.sizes()[k]);
    lengths.push_back(number_to_json(f.lengths()[k]));
  }
  Json values = Json::array();
  for (const auto& v : f.samples()) values.push_back(complex_to_json(v));
  return Json{{"dimension", d}, {"sizes", sizes}, {"lengths", lengths}, {"values", values}};
}

Scenario scenario_from_json(const Json& j, const std::filesystem::path& base_dir) {
  const std::string where = "scenario";
  const Json& mj = require(j, "measure", where);
  const LevyMeasure measure = measure_from_json(mj);
  const auto* discrete = std::get_if<DiscreteLevyMeasure>(&measure);
  if (discrete == nullptr) throw InvalidInput(where + ".measure: simulation needs a discrete measure");
  std::optional<JumpModulator> phi;
  if (const auto it = j.find("modulator"); it != j.end()) {
    phi = modulator_from_json(*it);
  } else if (const auto it2 = mj.find("modulator"); it2 != mj.end()) {
    phi = modulator_from_json(*it2);
  } else {
    throw InvalidInput(where + ": missing field \"modulator\"");
  }
  Scenario sc{j.value("id", std::string("scenario")), *discrete, *phi,
              grid_from_json(require(j, "f", where), base_dir), {0, 0}, 0.0, 1.0, {}, 100000, 1};
  if (const auto it = j.find("x"); it != j.end()) {
    const Vector x = vector_from_json(*it, where + ".x");
    if (x.size() != sc.f.dimension()) throw InvalidInput(where + ".x: wrong dimension");
    for (std::size_t k = 0; k < x.size(); ++k) {
      if (x[k] != std::floor(x[k])) throw InvalidInput(where + ".x: lattice coordinates must be integers");
      sc.x[k] = static_cast<std::int64_t>(x[k]);
    }
  }
  sc.s = get_number(j, "s", where, 0.0);
  sc.u = get_number(j, "u", where, 1.0);
  if (const auto it = j.find("checkpoints"); it != j.end()) sc.checkpoints = vector_from_json(*it, where + ".checkpoints");
  sc.n_paths = get_size(j, "n_paths", where, sc.n_paths);
  if (const auto it = j.find("seed"); it != j.end()) sc.seed = u64_from_json(*it, where + ".seed");
  // Validates phi against the atoms (|phi| <= 1 is enforced by the modulator itself).
  (void)sc.modulator.on_atoms(LevyMeasure(sc.measure));
  return sc;
}

Json scenario_to_json(const Scenario& sc) {
  Json x = Json::array();
  for (std::size_t k = 0; k < sc.f.dimension(); ++k) x.push_back(sc.x[k]);
  return Json{{"id", sc.id},
              {"measure", measure_to_json(LevyMeasure(sc.measure))},
              {"modulator", modulator_to_json(sc.modulator)},
              {"f", grid_to_json(sc.f)},
              {"x", x},
              {"s", number_to_json(sc.s)},
              {"u", number_to_json(sc.u)},
              {"checkpoints", vector_to_json(sc.checkpoints)},
              {"n_paths", sc.n_paths},
              {"seed", sc.seed}};
}

CorpusConfig corpus_config_from_json(const Json& j) {
  const std::string where = "corpus";
  if (!j.is_object()) throw InvalidInput(where + ": expected an object");
  CorpusConfig c;
  c.dimension = get_size(j, "dimension", where, c.dimension);
  c.n = get_size(j, "n", where, c.n);
  c.length = get_number(j, "length", where, c.length);
  c.count = get_size(j, "count", where, c.count);
  if (const auto it = j.find("seed"); it != j.end()) c.seed = u64_from_json(*it, where + ".seed");
  c.smooth_only = j.value("smooth_only", c.smooth_only);
  return c;
}

Json corpus_config_to_json(const CorpusConfig& c) {
  return Json{{"dimension", c.dimension}, {"n", c.n},       {"length", number_to_json(c.length)},
              {"count", c.count},         {"seed", c.seed}, {"smooth_only", c.smooth_only}};
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidInput(path.string() + ": " + e.what());
  }
}

}  // namespace levymult
