#pragma once

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "pidlib/errors.hpp"
#include "pidlib/scenario.hpp"

namespace pidlib {

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  std::size_t last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

inline std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

inline double parse_number(const std::string& token, int line) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size())
      throw ParseError(line, "trailing characters after number '" + token + "'");
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a number, got '" + token + "'");
  }
}

inline std::uint64_t parse_seed(const std::string& token, int line) {
  if (!token.empty() && token[0] == '-')
    throw ParseError(line, "seed must be non-negative, got '" + token + "'");
  try {
    std::size_t used = 0;
    const unsigned long long value = std::stoull(token, &used);
    if (used != token.size())
      throw ParseError(line, "trailing characters after seed '" + token + "'");
    return value;
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception&) {
    throw ParseError(line, "expected a non-negative integer seed, got '" + token + "'");
  }
}

inline Mode parse_mode_token(const std::string& token, int line) {
  const std::string name = lowercase(token);
  if (name == "disabled" || name == "0") return Mode::Disabled;
  if (name == "manual" || name == "man" || name == "1") return Mode::Manual;
  if (name == "auto" || name == "2") return Mode::Auto;
  if (name == "track" || name == "3") return Mode::Track;
  throw ParseError(line, "unknown mode '" + token +
                             "' (use DISABLED, MANUAL, AUTO, TRACK or 0..3)");
}

inline AntiWindup parse_aw_token(const std::string& token, int line) {
  const std::string name = lowercase(token);
  if (name == "backcalc") return AntiWindup::BackCalculation;
  if (name == "condint") return AntiWindup::ConditionalIntegration;
  throw ParseError(line, "unknown anti-windup strategy '" + token +
                             "' (use backcalc or condint)");
}

/// @brief Applies one controller-parameter key to a config. Returns false if
/// the key is not a controller parameter.
inline bool apply_controller_key(PidConfig& cfg, const std::string& key,
                                 const std::string& value, int line) {
  if (key == "kp") cfg.kp = parse_number(value, line);
  else if (key == "ki") cfg.ki = parse_number(value, line);
  else if (key == "kd") cfg.kd = parse_number(value, line);
  else if (key == "b") cfg.b = parse_number(value, line);
  else if (key == "c") cfg.c = parse_number(value, line);
  else if (key == "u0") cfg.u0 = parse_number(value, line);
  else if (key == "umin") cfg.umin = parse_number(value, line);
  else if (key == "umax") cfg.umax = parse_number(value, line);
  else if (key == "dumin") cfg.dumin = parse_number(value, line);
  else if (key == "dumax") cfg.dumax = parse_number(value, line);
  else if (key == "tt") cfg.tt = parse_number(value, line);
  else if (key == "aw") cfg.aw = parse_aw_token(value, line);
  else return false;
  return true;
}

}  // namespace detail

/// @brief Parses a plain key=value configuration into a single-loop Scenario.
///
/// Recognized keys: controller parameters (kp, ki, kd, b, c, u0, umin, umax,
/// dumin, dumax, tt, aw), loop parameters (dt, tf, duration, r0, y0, uinit,
/// mode0), plant parameters (plant.k, plant.t, plant.l) and noise parameters
/// (noise.sigma, noise.seed). Timed changes use `at <time> set <key> <value>`
/// with key one of r, mode, uman, v, or any controller parameter; parameter
/// changes accumulate, so each event carries the full parameter set in force
/// from that time on. Lines may carry `#` comments. A v event makes the
/// disturbance act at the plant input (config runs drive one loop; the
/// two-path arrangement is available through the built-in scenarios).
///
/// @throws ParseError (with line number) for unknown keys or malformed values;
/// validation problems surface as ConfigError / ScenarioError.
inline Scenario parse_config(std::istream& in) {
  struct PendingLine {
    int number;
    std::string text;
  };
  std::vector<PendingLine> assignments;
  std::vector<PendingLine> event_lines;
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string text = detail::trim(raw);
    if (text.empty()) continue;
    if (text.rfind("at ", 0) == 0 || text == "at")
      event_lines.push_back({line_no, text});
    else
      assignments.push_back({line_no, text});
  }

  Scenario s;
  s.plant = {1.0, 1.0, 0.0};
  PidConfig cfg;

  for (const PendingLine& line : assignments) {
    const std::size_t eq = line.text.find('=');
    if (eq == std::string::npos)
      throw ParseError(line.number, "expected key=value, got '" + line.text + "'");
    const std::string key = detail::trim(line.text.substr(0, eq));
    const std::string value = detail::trim(line.text.substr(eq + 1));
    if (key.empty()) throw ParseError(line.number, "missing key before '='");
    if (value.empty())
      throw ParseError(line.number, "missing value for key '" + key + "'");
    if (detail::apply_controller_key(cfg, key, value, line.number)) continue;
    if (key == "dt") s.dt = detail::parse_number(value, line.number);
    else if (key == "tf") s.tf = detail::parse_number(value, line.number);
    else if (key == "duration") s.duration = detail::parse_number(value, line.number);
    else if (key == "r0") s.r0 = detail::parse_number(value, line.number);
    else if (key == "y0") s.y0 = detail::parse_number(value, line.number);
    else if (key == "uinit") s.u_init = detail::parse_number(value, line.number);
    else if (key == "mode0") s.mode0 = detail::parse_mode_token(value, line.number);
    else if (key == "plant.k") s.plant.k = detail::parse_number(value, line.number);
    else if (key == "plant.t") s.plant.T = detail::parse_number(value, line.number);
    else if (key == "plant.l") s.plant.L = detail::parse_number(value, line.number);
    else if (key == "noise.sigma")
      s.noise.sigma = detail::parse_number(value, line.number);
    else if (key == "noise.seed")
      s.noise.seed = detail::parse_seed(value, line.number);
    else
      throw ParseError(line.number, "unknown key '" + key + "'");
  }
  cfg.dt_nominal = s.dt;

  PidConfig cumulative = cfg;  // parameter events build on the base set
  for (const PendingLine& line : event_lines) {
    std::istringstream tokens(line.text);
    std::string word_at, time_token, word_set, key, value;
    tokens >> word_at >> time_token >> word_set >> key >> value;
    std::string extra;
    if (word_at != "at" || word_set != "set" || key.empty() || value.empty() ||
        (tokens >> extra))
      throw ParseError(line.number,
                       "expected 'at <time> set <key> <value>', got '" +
                           line.text + "'");
    Event e;
    e.time = detail::parse_number(time_token, line.number);
    if (key == "r") {
      e.action = Event::Action::Setpoint;
      e.value = detail::parse_number(value, line.number);
    } else if (key == "mode") {
      e.action = Event::Action::SwitchMode;
      e.mode = detail::parse_mode_token(value, line.number);
    } else if (key == "uman") {
      e.action = Event::Action::ManualValue;
      e.value = detail::parse_number(value, line.number);
    } else if (key == "v") {
      e.action = Event::Action::Disturbance;
      e.value = detail::parse_number(value, line.number);
      s.disturbance_at_input = true;
    } else if (detail::apply_controller_key(cumulative, key, value, line.number)) {
      e.action = Event::Action::Params;
      e.params = cumulative;
    } else {
      throw ParseError(line.number, "unknown event key '" + key + "'");
    }
    s.events.push_back(e);
  }

  s.controllers = {cfg};
  s.validate();
  return s;
}

/// @brief File-path overload of parse_config.
/// @throws IoError if the file cannot be opened.
inline Scenario parse_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  return parse_config(in);
}

namespace detail {

inline std::string format_number(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return buf;
}

}  // namespace detail

/// @brief Writes a trajectory as CSV: header `t,r,y,yf,u,mode,active,v`, one
/// row per sample, floats with 9 significant digits, the mode as its 2-bit
/// integer encoding. Columns a scenario does not drive (v, active) are left
/// empty rather than filled with zeros.
/// @throws IoError on an empty trajectory or a failed write.
inline void write_csv(const Trajectory& tr, std::ostream& out) {
  if (tr.size() == 0) throw IoError("refusing to write an empty trajectory");
  out << "t,r,y,yf,u,mode,active,v\n";
  for (std::size_t i = 0; i < tr.size(); ++i) {
    out << detail::format_number(tr.t[i]) << ','
        << detail::format_number(tr.r[i]) << ','
        << detail::format_number(tr.y[i]) << ','
        << detail::format_number(tr.yf[i]) << ','
        << detail::format_number(tr.u[i]) << ',' << tr.mode[i] << ',';
    if (tr.has_active) out << tr.active[i];
    out << ',';
    if (tr.has_v) out << detail::format_number(tr.v[i]);
    out << '\n';
  }
  if (!out) throw IoError("failed while writing CSV output");
}

/// @brief File-path overload of write_csv.
/// @throws IoError if the file cannot be created or written.
inline void write_csv(const Trajectory& tr, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file '" + path + "'");
  write_csv(tr, out);
  out.flush();
  if (!out) throw IoError("failed to write output file '" + path + "'");
}

}  // namespace pidlib
