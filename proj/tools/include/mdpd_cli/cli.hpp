#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mdpd/family.hpp"

namespace mdpd::cli {

enum class Command { Fit, Tune, Select, AreTable, Influence, Bootstrap, Simulate, Report };

enum ExitStatus : int { kSuccess = 0, kUsage = 1, kDataFailure = 2, kNumericalFailure = 3 };

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliConfig {
  Command command = Command::Fit;
  std::optional<Family> family;
  std::optional<double> alpha;
  std::string input;
  std::string column = "value";
  std::optional<std::uint64_t> seed;
  std::string output;  // empty: stdout
  bool fast = false;

  std::string format = "json";   // fit: json | csv
  std::vector<double> theta;     // are-table, influence, simulate
  std::vector<double> alphas;    // are-table; empty: tabulated alphas
  std::string plot_data;         // fit: plot-data CSV path
  std::size_t bins = 20;
  std::string curve;             // tune: cvmd curve CSV path
  std::string ric_table;         // select: RIC table CSV path
  std::size_t replicates = 1000; // bootstrap B
  std::string replicates_out;    // bootstrap: replicate CSV path
  std::size_t n = 100;           // simulate
  double epsilon = 0.0;
  std::optional<double> point;   // simulate: contamination point
  std::vector<double> contaminant_theta;
  std::size_t points = 200;      // influence grid size
  std::size_t threads = 0;       // 0: RF_THREADS or hardware concurrency

  /// Throws UsageError.
  void validate() const;
};

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

/// Executes a validated configuration. Output goes to `out` unless
/// config.output names a file; failures print one JSON line to `err`.
int run(const CliConfig& config, std::ostream& out, std::ostream& err);

/// Parses argv and runs. `mdpd --help` and each subcommand's help exit 0.
int main_entry(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// Header of the `report` CSV.
inline constexpr const char* kReportHeader = "label,family,alpha_star,param1,param2,se1,se2,cvmd,ric,median_adjusted";

}  // namespace mdpd::cli
