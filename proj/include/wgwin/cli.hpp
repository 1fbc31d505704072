#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wgwin/geometry.hpp"

namespace wgwin::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitWarning = 2;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Everything a run needs. Keys of the config file are the field names.
struct RunConfig {
  double d = kPi;
  std::optional<double> l;
  std::vector<double> l_grid;
  int n_modes = 60;
  double tol = 1e-10;
  double oracle_h = 0.05;
  std::optional<double> oracle_R;
  std::string output_path;  // empty: standard output
  std::string format = "csv";
  int n_max = 3;
  int n = 2;
  std::vector<double> eps{0.1, 0.05, 0.025, 0.0125};
  std::string suite = "default";
  int count = 0;  // oracle: 0 picks the upper counting bound
};

/// Decimal, "pi", "pi/<x>" or "<x>*pi".
[[nodiscard]] double parse_length(const std::string& text);

/// Comma list "0.5,1,2" or range "start:step:stop" (stop included).
[[nodiscard]] std::vector<double> parse_grid(const std::string& text);

/// Flat "key = value" file; '#' starts a comment.
[[nodiscard]] std::map<std::string, std::string> read_config_file(
    const std::string& path);

/// Applies file entries to cfg. Unknown keys are a ConfigError.
void apply_config(RunConfig& cfg,
                  const std::map<std::string, std::string>& entries);

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_critical(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_emerge(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);

/// Parses argv (flags override the --config file) and dispatches.
int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err);

}  // namespace wgwin::cli
