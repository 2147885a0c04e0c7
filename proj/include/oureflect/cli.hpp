#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace oureflect::cli {

enum class Command {
  Eig,
  Rates,
  SimulateCtmc,
  SimulateSde,
  Reflect,
  Stationary,
  VerifyLimit,
  VerifyStationary,
  ProbeConjecture,
};

std::string_view command_name(Command command);
std::optional<Command> parse_command(std::string_view name);
const std::vector<Command>& all_commands();

// Malformed invocation or config: missing/unknown key, type mismatch.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A raw value with where it came from, e.g. "config.txt:4" or "flag --alpha".
struct RawValue {
  std::string text;
  std::string origin;
};

using RawValues = std::map<std::string, RawValue>;

struct KeySpec {
  std::string name;
  bool required = false;
  std::optional<std::string> default_value;  // echoed in metadata when used
  std::string help;
};

// Keys accepted by a command, in a stable order.
const std::vector<KeySpec>& command_keys(Command command);

// Reads "key = value" lines; '#' starts a comment, blank lines are skipped.
// Throws UsageError naming the file and line on malformed lines or repeats.
RawValues read_config_file(const std::filesystem::path& file);

/// Fully validated effective configuration for one command.
class RunConfig {
 public:
  Command command = Command::Eig;
  unsigned threads = 0;
  bool timings = false;

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  const std::string& text(const std::string& key) const;
  double number(const std::string& key) const;
  long long integer(const std::string& key) const;
  std::vector<double> numbers(const std::string& key) const;
  std::vector<long long> integers(const std::string& key) const;
  std::filesystem::path output_dir() const;

  const RawValues& values() const noexcept { return values_; }
  const std::vector<std::string>& defaulted() const noexcept { return defaulted_; }

 private:
  friend RunConfig parse_config(Command, const RawValues&, const RawValues&);
  RawValues values_;
  std::vector<std::string> defaulted_;
};

// Merges file values with flag values (flags win), fills defaults, rejects
// unknown keys and missing required keys, and type-checks every value.
RunConfig parse_config(Command command, const RawValues& file_values, const RawValues& flag_values);

// Executes a command. Writes output files under output_dir and one line of
// JSON to `out`. Exit status: 0 ok, 1 domain error, 2 usage error, 3
// resource or numerical error.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

// Full command-line entry point (argument parsing plus run).
int main(int argc, char** argv);

}  // namespace oureflect::cli
