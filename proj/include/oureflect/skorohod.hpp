#pragma once

#include <vector>

namespace oureflect {

enum class Interpolation { Step, Linear };

/// Real path sampled on a strictly increasing grid starting at t = 0.
struct SampledPath {
  std::vector<double> grid;
  std::vector<double> values;
  Interpolation interpolation = Interpolation::Step;

  std::size_t size() const noexcept { return values.size(); }
  // Throws ArgumentError unless grid and values have equal nonzero length,
  // grid[0] == 0 and the grid is strictly increasing.
  void validate() const;
};

/// Solution (Gamma(psi), phi) of the one-sided Skorohod problem at 0.
struct ReflectionSolution {
  SampledPath reflected;
  SampledPath regulator;
};

// Gamma(psi)(t) = psi(t) - min(0, inf_{s<=t} psi(s)), in one pass over the
// grid. The regulator is phi = -min(0, running infimum) and the reflected path
// is computed as psi + phi, so reflected == psi + regulator holds exactly in
// floating point. Throws DomainError if psi(0) < 0.
ReflectionSolution reflect(const SampledPath& psi);

// Total regulator increase over grid intervals on which the reflected path
// stays above eps at both endpoints. Zero for an exact solution.
double complementarity_defect(const ReflectionSolution& solution, double eps = 1e-9);

// True iff psi1 - psi2 is nondecreasing on the common grid (psi1 strongly
// majorises psi2). When true, also checks the ordering Gamma(psi1) >=
// Gamma(psi2) and throws NumericalError if it fails. Throws ArgumentError on
// grid mismatch and DomainError unless psi1(0) >= psi2(0) >= 0.
bool check_majorisation(const SampledPath& psi1, const SampledPath& psi2);

}  // namespace oureflect
