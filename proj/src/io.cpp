#include "oureflect/io.hpp"

#include <array>
#include <charconv>
#include <sstream>

#include "oureflect/errors.hpp"

namespace oureflect {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto result =
      std::to_chars(buffer.data(), buffer.data() + buffer.size(), value, std::chars_format::general, 17);
  return {buffer.data(), result.ptr};
}

void write_trajectory_csv(const CtmcTrajectory& trajectory, std::ostream& out) {
  const std::size_t dim = trajectory.vertex_count();
  out << 't';
  for (std::size_t v = 0; v < dim; ++v) out << ",v" << v;
  out << '\n';
  out << format_double(0.0);
  for (int x : trajectory.initial_state) out << ',' << x;
  out << '\n';
  for (std::size_t e = 0; e < trajectory.event_count(); ++e) {
    out << format_double(trajectory.event_times[e]);
    for (int x : trajectory.state_after(e)) out << ',' << x;
    out << '\n';
  }
}

void write_distribution_csv(const DistributionTable& table, std::ostream& out) {
  out << "state_index";
  for (std::size_t v = 0; v < table.space.vertex_count(); ++v) out << ",x" << v;
  out << ",prob\n";
  for (std::size_t i = 0; i < table.probabilities.size(); ++i) {
    out << i;
    for (int x : table.space.state(i)) out << ',' << x;
    out << ',' << format_double(table.probabilities[i]) << '\n';
  }
}

void write_path_csv(const SampledPath& path, std::ostream& out) {
  out << "t,value\n";
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.grid[k]) << ',' << format_double(path.values[k]) << '\n';
  }
}

namespace {

bool parse_number(std::string_view text, double& value) {
  while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
  while (!text.empty() && (text.back() == ' ' || text.back() == '\t' || text.back() == '\r')) text.remove_suffix(1);
  if (text.empty()) return false;
  if (text.front() == '+') text.remove_prefix(1);
  const auto result = std::from_chars(text.data(), text.data() + text.size(), value);
  return result.ec == std::errc() && result.ptr == text.data() + text.size();
}

}  // namespace

SampledPath read_path_csv(std::istream& in) {
  SampledPath path;
  std::string line;
  std::size_t line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;
    const auto comma = line.find(',');
    double t = 0.0, value = 0.0;
    const bool ok = comma != std::string::npos &&
                    parse_number(std::string_view(line).substr(0, comma), t) &&
                    parse_number(std::string_view(line).substr(comma + 1), value);
    if (!ok) {
      if (first_content) {
        first_content = false;  // header
        continue;
      }
      throw ParseError("path file line " + std::to_string(line_no) + ": expected \"t,value\"");
    }
    first_content = false;
    path.grid.push_back(t);
    path.values.push_back(value);
  }
  if (path.grid.empty()) throw ParseError("path file has no data rows");
  try {
    path.validate();
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("path file: ") + e.what());
  }
  return path;
}

void write_reflection_csv(const SampledPath& psi, const ReflectionSolution& solution, std::ostream& out) {
  out << "t,psi,gamma,phi\n";
  for (std::size_t k = 0; k < psi.size(); ++k) {
    out << format_double(psi.grid[k]) << ',' << format_double(psi.values[k]) << ','
        << format_double(solution.reflected.values[k]) << ',' << format_double(solution.regulator.values[k])
        << '\n';
  }
}

void write_diffusion_csv(const DiffusionPath& path, std::ostream& out) {
  out << 't';
  for (std::size_t v = 0; v < path.vertex_count; ++v) out << ",x_v" << v;
  for (std::size_t v = 0; v < path.vertex_count; ++v) out << ",phi_v" << v;
  out << '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.times[k]);
    for (double x : path.state(k)) out << ',' << format_double(x);
    for (double p : path.regulator(k)) out << ',' << format_double(p);
    out << '\n';
  }
}

void write_samples_csv(const std::vector<std::vector<double>>& samples, std::ostream& out) {
  const std::size_t dim = samples.empty() ? 0 : samples.front().size();
  out << "replica";
  for (std::size_t v = 0; v < dim; ++v) out << ",x" << v;
  out << '\n';
  for (std::size_t r = 0; r < samples.size(); ++r) {
    out << r;
    for (double x : samples[r]) out << ',' << format_double(x);
    out << '\n';
  }
}

}  // namespace oureflect
