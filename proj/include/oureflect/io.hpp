#pragma once

#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "oureflect/ctmc.hpp"
#include "oureflect/distribution.hpp"
#include "oureflect/sde.hpp"
#include "oureflect/skorohod.hpp"

namespace oureflect {

// Locale-free, 17 significant digits: every finite double round-trips.
std::string format_double(double value);

// "t,v0,...": a t = 0 row with the initial state, then one row per event.
void write_trajectory_csv(const CtmcTrajectory& trajectory, std::ostream& out);

// "state_index,x0,...,prob".
void write_distribution_csv(const DistributionTable& table, std::ostream& out);

// "t,value". The reader accepts an optional header line and '#' comments;
// throws ParseError with the line number on malformed rows.
void write_path_csv(const SampledPath& path, std::ostream& out);
SampledPath read_path_csv(std::istream& in);

// "t,psi,gamma,phi".
void write_reflection_csv(const SampledPath& psi, const ReflectionSolution& solution, std::ostream& out);

// "t,x_v0,...,phi_v0,...".
void write_diffusion_csv(const DiffusionPath& path, std::ostream& out);

// "replica,x0,...": one row per sample.
void write_samples_csv(const std::vector<std::vector<double>>& samples, std::ostream& out);

}  // namespace oureflect
