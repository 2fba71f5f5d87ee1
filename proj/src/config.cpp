#include "wpmec/config.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace wpmec {

namespace {

[[noreturn]] void fail(int line, const std::string& what) {
  throw std::invalid_argument("config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

double parse_number(const std::string& value, int line) {
  const std::string v = trim(value);
  if (v.empty()) fail(line, "empty value");
  char* end = nullptr;
  const double x = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) fail(line, "malformed number '" + v + "'");
  return x;
}

int parse_int(const std::string& value, int line) {
  const double x = parse_number(value, line);
  const int i = static_cast<int>(x);
  if (x != static_cast<double>(i)) fail(line, "expected an integer, got '" + value + "'");
  return i;
}

std::vector<std::string> split_commas(const std::string& value) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(value);
  while (std::getline(in, item, ',')) parts.push_back(trim(item));
  return parts;
}

std::vector<double> parse_list(const std::string& value, int line) {
  std::vector<double> out;
  for (const std::string& part : split_commas(value))
    out.push_back(parse_number(part, line));
  if (out.empty()) fail(line, "empty list");
  return out;
}

}  // namespace

ExperimentConfig default_experiment() {
  ExperimentConfig ec;
  ec.base.antenna_count = 4;
  ec.base.user_count = 4;
  ec.base.block_seconds = 0.1;
  ec.base.max_transmit_power = 10.0;
  ec.base.bandwidth_hz = 2e6;
  ec.base.noise_power = 1e-9;
  ec.base.energy_efficiency = 0.8;
  ec.base.capacity_gap = 1.0;
  ec.base.mec_capacity_bits = 2e5;
  ec.profile.cycles_per_bit = 1e3;
  ec.profile.switched_capacitance = 1e-28;
  ec.profile.max_cpu_hz = 1e8;
  ec.profile.circuit_power = 1e-4;
  return ec;
}

ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig ec = default_experiment();
  bool weights_given = false;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash = raw.find_first_of("#;");
    std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') fail(line, "unterminated section header");
      section = trim(body.substr(1, body.size() - 2));
      if (section != "system" && section != "users" && section != "sweep" &&
          section != "solver")
        fail(line, "unknown section [" + section + "]");
      continue;
    }
    const size_t eq = body.find('=');
    if (eq == std::string::npos) fail(line, "expected key = value");
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    if (section.empty()) fail(line, "key '" + key + "' outside any section");

    if (section == "system") {
      if (key == "antenna_count")
        ec.base.antenna_count = parse_int(value, line);
      else if (key == "user_count")
        ec.base.user_count = parse_int(value, line);
      else if (key == "block_seconds")
        ec.base.block_seconds = parse_number(value, line);
      else if (key == "max_transmit_power")
        ec.base.max_transmit_power = parse_number(value, line);
      else if (key == "bandwidth_hz")
        ec.base.bandwidth_hz = parse_number(value, line);
      else if (key == "noise_power")
        ec.base.noise_power = parse_number(value, line);
      else if (key == "energy_efficiency")
        ec.base.energy_efficiency = parse_number(value, line);
      else if (key == "capacity_gap")
        ec.base.capacity_gap = parse_number(value, line);
      else if (key == "mec_capacity_bits")
        ec.base.mec_capacity_bits = parse_number(value, line);
      else if (key == "weights") {
        ec.base.weights = parse_list(value, line);
        weights_given = true;
      } else
        fail(line, "unknown [system] key '" + key + "'");
    } else if (section == "users") {
      if (key == "cycles_per_bit")
        ec.profile.cycles_per_bit = parse_number(value, line);
      else if (key == "switched_capacitance")
        ec.profile.switched_capacitance = parse_number(value, line);
      else if (key == "max_cpu_hz")
        ec.profile.max_cpu_hz = parse_number(value, line);
      else if (key == "circuit_power")
        ec.profile.circuit_power = parse_number(value, line);
      else
        fail(line, "unknown [users] key '" + key + "'");
    } else if (section == "sweep") {
      if (key == "variable") {
        if (value == "p_max_dbm")
          ec.variable = SweepVariable::transmit_power_dbm;
        else if (value == "users")
          ec.variable = SweepVariable::user_count;
        else
          fail(line, "unknown sweep variable '" + value + "'");
      } else if (key == "values")
        ec.sweep_values = parse_list(value, line);
      else if (key == "trials")
        ec.trials = parse_int(value, line);
      else if (key == "seed") {
        char* end = nullptr;
        ec.seed = std::strtoull(trim(value).c_str(), &end, 10);
        if (!end || *end != '\0') fail(line, "malformed seed '" + value + "'");
      } else if (key == "schemes") {
        ec.schemes.clear();
        for (const std::string& name : split_commas(value)) {
          try {
            ec.schemes.push_back(scheme_from_string(name));
          } catch (const std::invalid_argument&) {
            fail(line, "unknown scheme '" + name + "'");
          }
        }
      } else
        fail(line, "unknown [sweep] key '" + key + "'");
    } else {  // solver
      if (key == "dual_tol")
        ec.solver.dual_tol = parse_number(value, line);
      else if (key == "dual_max_iter")
        ec.solver.dual_max_iter = parse_int(value, line);
      else if (key == "sdp_tol")
        ec.solver.sdp_tol = parse_number(value, line);
      else if (key == "sdp_max_iter")
        ec.solver.sdp_max_iter = parse_int(value, line);
      else if (key == "gap_tol")
        ec.solver.gap_tol = parse_number(value, line);
      else
        fail(line, "unknown [solver] key '" + key + "'");
    }
  }
  if (!weights_given)
    ec.base.weights.assign(ec.base.user_count, 1.0 / ec.base.user_count);
  else if (static_cast<int>(ec.base.weights.size()) != ec.base.user_count)
    throw std::invalid_argument("config: weights length must equal user_count");
  return ec;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream file(path, std::ios::binary);
  if (!file) throw std::invalid_argument("cannot open config: " + path);
  std::ostringstream buf;
  buf << file.rdbuf();
  return parse_config(buf.str());
}

}  // namespace wpmec
