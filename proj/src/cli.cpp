#include "wgwin/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "wgwin/matching.hpp"
#include "wgwin/oracle.hpp"
#include "wgwin/spectrum.hpp"
#include "wgwin/threshold.hpp"
#include "wgwin/verify.hpp"

namespace wgwin::cli {
namespace {

using Json = nlohmann::ordered_json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t, &used);
  } catch (const std::exception&) {
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  }
  if (used != t.size()) {
    throw ConfigError("invalid number for " + key + ": '" + text + "'");
  }
  return v;
}

int parse_int(const std::string& text, const std::string& key) {
  const double v = parse_number(text, key);
  if (v != std::floor(v) || std::abs(v) > 1e9) {
    throw ConfigError("expected an integer for " + key + ": '" + text + "'");
  }
  return static_cast<int>(v);
}

std::vector<double> parse_list(const std::string& text, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!trim(item).empty()) out.push_back(parse_number(item, key));
  }
  if (out.empty()) throw ConfigError("empty list for " + key);
  return out;
}

// Table cells are JSON values so one table serves both output formats.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    std::ostringstream s;
    s << std::setprecision(17) << v.get<double>();
    return s.str();
  }
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  return "";
}

void write_table(const Table& t, const std::string& format, std::ostream& os) {
  if (format == "json") {
    Json arr = Json::array();
    for (const auto& row : t.rows) {
      Json o;
      for (std::size_t c = 0; c < t.columns.size(); ++c) o[t.columns[c]] = row[c];
      arr.push_back(std::move(o));
    }
    os << arr.dump(2) << "\n";
    return;
  }
  for (std::size_t c = 0; c < t.columns.size(); ++c) {
    os << (c ? "," : "") << t.columns[c];
  }
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      os << (c ? "," : "") << csv_cell(row[c]);
    }
    os << "\n";
  }
}

template <class Body>
int with_output(const RunConfig& cfg, std::ostream& out, std::ostream& err,
                Body&& body) {
  if (cfg.output_path.empty()) return body(out);
  std::ofstream f(cfg.output_path);
  if (!f) {
    err << "error: cannot open output file " << cfg.output_path << "\n";
    return kExitConfig;
  }
  return body(f);
}

void validate(const RunConfig& cfg) {
  (void)Geometry(cfg.d, 0.0);
  if (cfg.n_modes < 2) throw ConfigError("n_modes must be >= 2");
  if (!(cfg.tol > 0.0)) throw ConfigError("tol must be positive");
  if (cfg.format != "csv" && cfg.format != "json") {
    throw ConfigError("format must be csv or json");
  }
}

double require_l(const RunConfig& cfg) {
  if (!cfg.l) throw ConfigError("this command needs l");
  return *cfg.l;
}

const std::vector<std::string> kSpectrumColumns{
    "d",          "l",          "m",        "parity",  "lambda",
    "k",          "bracket_lo", "bracket_hi", "residual", "n_modes"};

std::vector<Json> spectrum_row(double d, double l, const SpectralPoint& p) {
  return {d,
          l,
          p.m,
          to_string(p.parity),
          p.lambda,
          p.k,
          p.bracket.lower,
          p.bracket.upper,
          p.residual,
          p.n_modes_used};
}

void report_warnings(const std::vector<SpectrumWarning>& ws, double l,
                     std::ostream& err) {
  for (const auto& w : ws) {
    if (w.straddles_threshold) continue;
    err << "warning: l = " << std::setprecision(17) << l << ": " << w.message
        << "\n";
  }
}

bool has_solver_warning(const std::vector<SpectrumWarning>& ws) {
  for (const auto& w : ws) {
    if (!w.straddles_threshold) return true;
  }
  return false;
}

// Catches the error classes shared by every command.
template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NoSignChange& e) {
    err << "warning: " << e.what() << "\n";
    return kExitWarning;
  } catch (const GridExhausted& e) {
    err << "warning: " << e.what() << "\n";
    return kExitWarning;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitWarning;
  }
}

}  // namespace

double parse_length(const std::string& text) {
  std::string t = trim(text);
  for (auto& c : t) c = static_cast<char>(std::tolower(c));
  if (t == "pi") return kPi;
  if (t.rfind("pi/", 0) == 0) return kPi / parse_number(t.substr(3), "d");
  if (t.size() > 3 && t.compare(t.size() - 3, 3, "*pi") == 0) {
    return parse_number(t.substr(0, t.size() - 3), "d") * kPi;
  }
  return parse_number(t, "length");
}

std::vector<double> parse_grid(const std::string& text) {
  const std::string t = trim(text);
  if (t.find(':') == std::string::npos) return parse_list(t, "l_grid");
  std::vector<double> parts;
  std::stringstream ss(t);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(parse_number(item, "l_grid"));
  if (parts.size() != 3 || !(parts[1] > 0.0) || parts[2] < parts[0]) {
    throw ConfigError("l_grid range must be start:step:stop with step > 0");
  }
  std::vector<double> out;
  const long n = std::lround(std::floor((parts[2] - parts[0]) / parts[1] + 1e-9));
  for (long i = 0; i <= n; ++i) out.push_back(parts[0] + i * parts[1]);
  return out;
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config file " + path);
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(path + ":" + std::to_string(lineno) +
                        ": expected key = value");
    }
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void apply_config(RunConfig& cfg,
                  const std::map<std::string, std::string>& entries) {
  for (const auto& [key, value] : entries) {
    if (key == "d") {
      cfg.d = parse_length(value);
    } else if (key == "l") {
      cfg.l = parse_length(value);
    } else if (key == "l_grid") {
      cfg.l_grid = parse_grid(value);
    } else if (key == "n_modes") {
      cfg.n_modes = parse_int(value, key);
    } else if (key == "tol") {
      cfg.tol = parse_number(value, key);
    } else if (key == "oracle_h") {
      cfg.oracle_h = parse_number(value, key);
    } else if (key == "oracle_R") {
      cfg.oracle_R = parse_number(value, key);
    } else if (key == "output_path") {
      cfg.output_path = value;
    } else if (key == "format") {
      cfg.format = value;
    } else if (key == "n_max") {
      cfg.n_max = parse_int(value, key);
    } else if (key == "n") {
      cfg.n = parse_int(value, key);
    } else if (key == "eps") {
      cfg.eps = parse_list(value, key);
    } else if (key == "suite") {
      cfg.suite = value;
    } else if (key == "count") {
      cfg.count = parse_int(value, key);
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const Geometry g = make_geometry(cfg.d, require_l(cfg));
    const SpectrumResult r = discrete_spectrum(g, cfg.n_modes, cfg.tol);
    Table t{kSpectrumColumns, {}};
    for (const auto& p : r.points) t.rows.push_back(spectrum_row(cfg.d, g.l(), p));
    const int code = with_output(cfg, out, err, [&](std::ostream& os) {
      write_table(t, cfg.format, os);
      return kExitOk;
    });
    report_warnings(r.warnings, g.l(), err);
    return code != kExitOk ? code
                           : (r.has_solver_warning() ? kExitWarning : kExitOk);
  });
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (cfg.l_grid.empty()) throw ConfigError("sweep needs l_grid");
    const SweepTable st = sweep_over_l(cfg.d, cfg.l_grid, cfg.n_modes, cfg.tol);
    Table t{kSpectrumColumns, {}};
    bool warned = false;
    for (std::size_t i = 0; i < st.l_values.size(); ++i) {
      for (const auto& p : st.rows[i]) {
        t.rows.push_back(spectrum_row(cfg.d, st.l_values[i], p));
      }
      report_warnings(st.warnings[i], st.l_values[i], err);
      warned = warned || has_solver_warning(st.warnings[i]);
    }
    const int code = with_output(cfg, out, err, [&](std::ostream& os) {
      write_table(t, cfg.format, os);
      return kExitOk;
    });
    return code != kExitOk ? code : (warned ? kExitWarning : kExitOk);
  });
}

int cmd_critical(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const std::vector<double> ls =
        critical_lengths(cfg.d, cfg.n_max, cfg.n_modes, cfg.tol);
    Table t{{"d", "n", "l_n", "parity", "n_modes"}, {}};
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const int n = static_cast<int>(i) + 1;
      t.rows.push_back({cfg.d, n, ls[i], to_string(parity_for_index(n)),
                        cfg.n_modes});
    }
    return with_output(cfg, out, err, [&](std::ostream& os) {
      write_table(t, cfg.format, os);
      return kExitOk;
    });
  });
}

int cmd_emerge(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    if (cfg.n < 2) throw ConfigError("emerge needs n >= 2");
    const double l_n = critical_length(cfg.d, cfg.n, cfg.n_modes, cfg.tol);
    const ThresholdSolution ts =
        threshold_solution(cfg.d, cfg.n, l_n, cfg.n_modes, cfg.tol);
    RootOptions ro;
    ro.tol = std::min(cfg.tol, 1e-13);
    Table t{{"d", "n", "l_n", "l", "lambda_solver", "lambda_predicted", "mu_n",
             "alpha"},
            {}};
    for (double e : cfg.eps) {
      if (!(e > 0.0)) throw ConfigError("eps values must be positive");
      const double l = l_n + e;
      const SpectralPoint sp =
          solve_in_bracket(Geometry(cfg.d, l), cfg.n, cfg.n_modes, ro, 1.0 - 1e-13);
      t.rows.push_back({cfg.d, cfg.n, l_n, l, sp.lambda,
                        emergence_prediction(ts, l), ts.mu, ts.alpha});
    }
    return with_output(cfg, out, err, [&](std::ostream& os) {
      write_table(t, cfg.format, os);
      return kExitOk;
    });
  });
}

int cmd_oracle(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const Geometry g = make_geometry(cfg.d, require_l(cfg));
    if (!(g.l() > 0.0)) {
      throw DomainError("oracle: l = 0 leaves no window; the discrete "
                        "spectrum is empty");
    }
    if (!(cfg.oracle_h > 0.0)) throw ConfigError("oracle_h must be positive");
    const double R = cfg.oracle_R.value_or(g.l() + 15.0);
    const int count = cfg.count > 0 ? cfg.count : count_bounds(g).upper;
    const auto est = oracle_extrapolate(g, R, cfg.oracle_h, count);
    std::vector<std::string> cols = kSpectrumColumns;
    for (const char* c : {"h", "R", "lambda_h", "lambda_h2", "lambda_h4",
                          "lambda_first_order", "lambda_second_order"}) {
      cols.emplace_back(c);
    }
    Table t{cols, {}};
    for (std::size_t i = 0; i < est.size(); ++i) {
      const auto& e = est[i];
      const int m = static_cast<int>(i) + 1;
      SpectralPoint p;
      p.m = m;
      p.lambda = e.mixed;
      p.k = std::sqrt(std::max(0.0, 1.0 - e.mixed));
      p.parity = parity_for_index(m);
      p.residual = e.uncertainty;
      p.bracket = bracket_for(g, m);
      p.n_modes_used = 0;
      auto row = spectrum_row(cfg.d, g.l(), p);
      for (double v : {e.h[0], R, e.raw[0], e.raw[1], e.raw[2], e.first_order,
                       e.second_order}) {
        row.emplace_back(v);
      }
      t.rows.push_back(std::move(row));
    }
    return with_output(cfg, out, err, [&](std::ostream& os) {
      write_table(t, cfg.format, os);
      return kExitOk;
    });
  });
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(cfg);
    const auto reports = run_suite(cfg.d, cfg.suite, cfg.n_modes, cfg.tol);
    bool all = true;
    for (const auto& r : reports) all = all && r.passed;
    const std::string json = reports_to_json(reports);
    if (cfg.output_path.empty()) {
      out << json << "\n";
      err << reports_summary(reports);
    } else {
      std::ofstream f(cfg.output_path);
      if (!f) {
        err << "error: cannot open output file " << cfg.output_path << "\n";
        return kExitConfig;
      }
      f << json << "\n";
      out << reports_summary(reports);
    }
    return all ? kExitOk : kExitWarning;
  });
}

int run(int argc, const char* const* argv, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Discrete spectrum of two strips coupled through a window"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  std::string config_path;
  std::map<std::string, std::string> flags;
  struct Flag {
    const char* name;
    const char* key;
    const char* help;
  };
  const Flag all_flags[] = {
      {"--d", "d", "Lower strip width: decimal, pi, pi/x or x*pi"},
      {"--l", "l", "Window half-length"},
      {"--l-grid", "l_grid", "Comma list or start:step:stop"},
      {"--n-modes", "n_modes", "Mode truncation N (default 60)"},
      {"--tol", "tol", "Root tolerance (default 1e-10)"},
      {"--oracle-h", "oracle_h", "Coarsest oracle mesh (default 0.05)"},
      {"--oracle-R", "oracle_R", "Oracle truncation half-length"},
      {"--output", "output_path", "Output file (default stdout)"},
      {"--format", "format", "csv or json"},
      {"--n-max", "n_max", "Highest critical index"},
      {"--n", "n", "Critical index for emerge"},
      {"--eps", "eps", "Comma list of l - l_n offsets"},
      {"--suite", "suite", "Verify suite: default or quick"},
      {"--count", "count", "Oracle eigenvalue count"},
  };
  const std::map<std::string, std::vector<std::string>> per_command{
      {"spectrum", {"d", "l", "n_modes", "tol", "output_path", "format"}},
      {"sweep", {"d", "l_grid", "n_modes", "tol", "output_path", "format"}},
      {"critical", {"d", "n_max", "n_modes", "tol", "output_path", "format"}},
      {"emerge",
       {"d", "n", "eps", "n_modes", "tol", "output_path", "format"}},
      {"oracle",
       {"d", "l", "oracle_h", "oracle_R", "count", "output_path", "format"}},
      {"verify", {"d", "suite", "n_modes", "tol", "output_path"}},
  };
  const std::map<std::string, const char*> blurbs{
      {"spectrum", "All discrete eigenvalues for one window"},
      {"sweep", "Eigenvalues over a grid of window lengths"},
      {"critical", "Critical window lengths l_1 = 0 < l_2 < ..."},
      {"emerge", "Eigenvalue near the threshold against 1 - mu^2 (l - l_n)^2"},
      {"oracle", "Finite-difference eigenvalues with mesh extrapolation"},
      {"verify", "Pass/fail checks as JSON"},
  };

  std::vector<std::pair<CLI::App*, std::string>> subs;
  for (const auto& [name, keys] : per_command) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    sub->add_option("--config", config_path, "Flat key = value config file");
    for (const auto& f : all_flags) {
      if (std::find(keys.begin(), keys.end(), f.key) == keys.end()) continue;
      sub->add_option(f.name, flags[f.key], f.help);
    }
    subs.emplace_back(sub, name);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    CLI::App* target = &app;
    for (const auto& [sub, name] : subs) {
      if (sub->parsed()) target = sub;
    }
    err << target->help();
    return kExitConfig;
  }

  for (const auto& [sub, name] : subs) {
    if (!sub->parsed()) continue;
    RunConfig cfg;
    try {
      if (!config_path.empty()) apply_config(cfg, read_config_file(config_path));
      std::map<std::string, std::string> given;
      for (const auto& f : all_flags) {
        const CLI::Option* opt = sub->get_option_no_throw(f.name);
        if (opt != nullptr && opt->count() > 0) given[f.key] = flags[f.key];
      }
      apply_config(cfg, given);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << "\n";
      return kExitConfig;
    }
    if (name == "spectrum") return cmd_spectrum(cfg, out, err);
    if (name == "sweep") return cmd_sweep(cfg, out, err);
    if (name == "critical") return cmd_critical(cfg, out, err);
    if (name == "emerge") return cmd_emerge(cfg, out, err);
    if (name == "oracle") return cmd_oracle(cfg, out, err);
    if (name == "verify") return cmd_verify(cfg, out, err);
  }
  return kExitConfig;
}

}  // namespace wgwin::cli
