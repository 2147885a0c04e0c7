#include "oureflect/skorohod.hpp"

#include <algorithm>
#include <string>

#include "oureflect/errors.hpp"

namespace oureflect {

void SampledPath::validate() const {
  if (grid.empty() || grid.size() != values.size()) {
    throw ArgumentError("sampled path needs matching, nonempty grid and values");
  }
  if (grid.front() != 0.0) throw ArgumentError("sampled path grid must start at t = 0");
  for (std::size_t k = 1; k < grid.size(); ++k) {
    if (!(grid[k] > grid[k - 1])) {
      throw ArgumentError("sampled path grid is not strictly increasing at index " + std::to_string(k));
    }
  }
}

ReflectionSolution reflect(const SampledPath& psi) {
  psi.validate();
  if (psi.values.front() < 0.0) throw DomainError("reflection requires psi(0) >= 0");
  ReflectionSolution out{psi, psi};
  double running_min = psi.values.front();
  for (std::size_t k = 0; k < psi.size(); ++k) {
    running_min = std::min(running_min, psi.values[k]);
    const double phi = std::max(0.0, -running_min);
    out.regulator.values[k] = phi;
    out.reflected.values[k] = psi.values[k] + phi;
  }
  return out;
}

double complementarity_defect(const ReflectionSolution& solution, double eps) {
  const auto& x = solution.reflected.values;
  const auto& phi = solution.regulator.values;
  if (x.size() != phi.size()) throw ArgumentError("reflection solution components differ in length");
  double defect = 0.0;
  for (std::size_t k = 1; k < x.size(); ++k) {
    if (std::min(x[k - 1], x[k]) > eps) defect += std::max(0.0, phi[k] - phi[k - 1]);
  }
  return defect;
}

bool check_majorisation(const SampledPath& psi1, const SampledPath& psi2) {
  psi1.validate();
  psi2.validate();
  if (psi1.grid != psi2.grid) throw ArgumentError("majorisation check needs a common grid");
  if (!(psi1.values.front() >= psi2.values.front() && psi2.values.front() >= 0.0)) {
    throw DomainError("majorisation check needs psi1(0) >= psi2(0) >= 0");
  }
  for (std::size_t k = 1; k < psi1.size(); ++k) {
    if (psi1.values[k] - psi2.values[k] < psi1.values[k - 1] - psi2.values[k - 1]) return false;
  }
  const auto high = reflect(psi1);
  const auto low = reflect(psi2);
  for (std::size_t k = 0; k < psi1.size(); ++k) {
    if (high.reflected.values[k] < low.reflected.values[k]) {
      throw NumericalError("majorisation violated: Gamma(psi1) < Gamma(psi2) at index " + std::to_string(k));
    }
  }
  return true;
}

}  // namespace oureflect
