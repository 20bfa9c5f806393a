#include "levymult/error.hpp"

#include <sstream>

namespace levymult {

namespace {

std::string describe(const std::string& what, double estimate, double error_estimate) {
  std::ostringstream s;
  s.precision(6);
  s << what << " (estimate " << estimate << ", error " << error_estimate << ")";
  return s.str();
}

}  // namespace

ConvergenceFailure::ConvergenceFailure(const std::string& what, double estimate, double error_estimate)
    : std::runtime_error(describe(what, estimate, error_estimate)),
      estimate_(estimate),
      error_estimate_(error_estimate) {}

}  // namespace levymult
