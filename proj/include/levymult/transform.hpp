#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

#include "levymult/grid_function.hpp"
#include "levymult/symbol.hpp"

namespace levymult {

/// p, its conjugate q = p/(p-1) and p* = max(p, q).
struct PStar {
  double p;
  double q;
  double p_star;

  explicit PStar(double p);
  /// max(p - 1, 1/(p - 1)), which equals p* - 1.
  double bound() const;
};

/// M at every grid frequency, in the grid's sample order.
std::vector<Complex> symbol_table(const MultiplierSymbol& symbol, const GridFunction& shape, unsigned workers = 1);

/// Inverse DFT of M(xi) * DFT(f). The DC bin receives M(0).
/// A constant symbol is applied pointwise, so the identity returns f bitwise.
GridFunction apply_multiplier(const GridFunction& f, const MultiplierSymbol& symbol, unsigned workers = 1);
GridFunction apply_multiplier(const GridFunction& f, const std::vector<Complex>& table);

/// (sum |f_i|^p h^d)^{1/p}.
double lp_norm(const GridFunction& f, double p);

struct CorpusMember {
  std::string id;
  GridFunction function;
};

struct SweepRow {
  double p;
  double p_star_minus_1;
  double max_ratio;
  std::string argmax_id;
  bool violation;
};

/// Relative slack above p* - 1 before a ratio counts as a violation.
inline constexpr double kNormRatioSlack = 5e-3;

/// Max over the corpus of ||M f||_p / ||f||_p for every p.
std::vector<SweepRow> norm_ratio_sweep(const MultiplierSymbol& symbol, const std::vector<CorpusMember>& corpus,
                                       const std::vector<double>& p_list, unsigned workers = 1,
                                       double slack = kNormRatioSlack);

}  // namespace levymult
