#include "levymult/transform.hpp"

#include <cmath>

#include "levymult/error.hpp"
#include "levymult/fft.hpp"
#include "levymult/parallel.hpp"

namespace levymult {

PStar::PStar(double p_) : p(p_), q(0.0), p_star(0.0) {
  if (!(p > 1.0) || !std::isfinite(p)) throw InvalidInput("PStar: p must lie in (1, inf)");
  q = p / (p - 1.0);
  p_star = std::max(p, q);
}

double PStar::bound() const { return std::max(p - 1.0, 1.0 / (p - 1.0)); }

std::vector<Complex> symbol_table(const MultiplierSymbol& symbol, const GridFunction& shape, unsigned workers) {
  const std::size_t d = shape.dimension();
  if (symbol.dimension() != 0 && symbol.dimension() != d) {
    throw InvalidInput("symbol dimension does not match the grid dimension");
  }
  const std::size_t n0 = shape.sizes()[0];
  const std::size_t n1 = d == 2 ? shape.sizes()[1] : 1;
  std::vector<Complex> table(n0 * n1);
  parallel_for(n0, workers, [&](std::size_t i) {
    double xi[2] = {shape.frequency(0, i), 0.0};
    for (std::size_t j = 0; j < n1; ++j) {
      if (d == 2) xi[1] = shape.frequency(1, j);
      table[i * n1 + j] = symbol(std::span<const double>(xi, d));
    }
  });
  return table;
}

GridFunction apply_multiplier(const GridFunction& f, const std::vector<Complex>& table) {
  if (table.size() != f.size()) throw InvalidInput("apply_multiplier: symbol table size mismatch");
  std::vector<Complex> data = f.samples();
  fft::forward(data, f.dimension(), f.sizes());
  for (std::size_t i = 0; i < data.size(); ++i) data[i] *= table[i];
  fft::inverse(data, f.dimension(), f.sizes());
  return GridFunction(f.dimension(), f.sizes(), f.lengths(), std::move(data));
}

GridFunction apply_multiplier(const GridFunction& f, const MultiplierSymbol& symbol, unsigned workers) {
  if (const auto* c = std::get_if<MultiplierSymbol::Constant>(&symbol.kind())) {
    if (c->d != 0 && c->d != f.dimension()) throw InvalidInput("apply_multiplier: symbol and grid differ in dimension");
    GridFunction out = f;
    if (c->value != Complex(1.0, 0.0)) {
      for (auto& v : out.samples()) v *= c->value;
    }
    return out;
  }
  return apply_multiplier(f, symbol_table(symbol, f, workers));
}

double lp_norm(const GridFunction& f, double p) {
  if (!(p >= 1.0)) throw InvalidInput("lp_norm: p must be at least 1");
  std::vector<double> terms(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) terms[i] = std::pow(std::abs(f[i]), p);
  return std::pow(pairwise_sum(terms) * f.cell_volume(), 1.0 / p);
}

std::vector<SweepRow> norm_ratio_sweep(const MultiplierSymbol& symbol, const std::vector<CorpusMember>& corpus,
                                       const std::vector<double>& p_list, unsigned workers, double slack) {
  if (corpus.empty()) throw InvalidInput("norm_ratio_sweep: empty corpus");
  if (p_list.empty()) throw InvalidInput("norm_ratio_sweep: empty p list");
  std::vector<PStar> ps;
  for (double p : p_list) ps.emplace_back(p);

  for (const auto& member : corpus) {
    for (double p : p_list) {
      if (!(lp_norm(member.function, p) > 0.0)) {
        throw InvalidInput("norm_ratio_sweep: corpus member " + member.id + " has zero norm");
      }
    }
  }
  // Corpora normally share one grid shape; other shapes get their own table.
  const std::vector<Complex> table = symbol_table(symbol, corpus.back().function, workers);
  std::vector<std::vector<double>> ratios(corpus.size(), std::vector<double>(p_list.size()));
  parallel_for(corpus.size(), workers, [&](std::size_t c) {
    const auto& f = corpus[c].function;
    std::vector<Complex> local;
    const std::vector<Complex>* tab = &table;
    if (!f.same_shape(corpus.back().function)) {
      local = symbol_table(symbol, f, 1);
      tab = &local;
    }
    const GridFunction mf = apply_multiplier(f, *tab);
    for (std::size_t k = 0; k < p_list.size(); ++k) ratios[c][k] = lp_norm(mf, p_list[k]) / lp_norm(f, p_list[k]);
  });

  std::vector<SweepRow> rows;
  for (std::size_t k = 0; k < p_list.size(); ++k) {
    SweepRow row{p_list[k], ps[k].bound(), -1.0, "", false};
    for (std::size_t c = 0; c < corpus.size(); ++c) {
      if (ratios[c][k] > row.max_ratio) {
        row.max_ratio = ratios[c][k];
        row.argmax_id = corpus[c].id;
      }
    }
    row.violation = row.max_ratio > row.p_star_minus_1 * (1.0 + slack);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace levymult
