#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "wpmec/benchmarks.hpp"
#include "wpmec/config.hpp"
#include "wpmec/experiments.hpp"
#include "wpmec/oracle.hpp"
#include "wpmec/solver.hpp"

namespace py = pybind11;
using namespace wpmec;

namespace {

using ComplexArray =
    py::array_t<std::complex<double>, py::array::c_style | py::array::forcecast>;

std::vector<std::vector<cdouble>> rows_of(const ComplexArray& a, const char* name,
                                          int users, int antennas) {
  if (a.ndim() != 2 || a.shape(0) != users || a.shape(1) != antennas)
    throw std::invalid_argument(std::string(name) + " must have shape (" +
                                std::to_string(users) + ", " +
                                std::to_string(antennas) + ")");
  auto r = a.unchecked<2>();
  std::vector<std::vector<cdouble>> out(users);
  for (int i = 0; i < users; ++i) {
    out[i].resize(antennas);
    for (int n = 0; n < antennas; ++n) out[i][n] = r(i, n);
  }
  return out;
}

Instance make_instance(const ExperimentConfig& ec, const std::optional<ComplexArray>& h,
                       const std::optional<ComplexArray>& g,
                       std::optional<std::uint64_t> seed) {
  Instance inst;
  inst.cfg = ec.base;
  inst.profiles.assign(inst.cfg.user_count, ec.profile);
  if (h.has_value() != g.has_value())
    throw std::invalid_argument("pass both h and g, or neither");
  if (h) {
    inst.channels = ChannelSet(
        rows_of(*h, "h", inst.cfg.user_count, inst.cfg.antenna_count),
        rows_of(*g, "g", inst.cfg.user_count, inst.cfg.antenna_count));
  } else {
    inst.channels =
        generate_channels(seed.value_or(ec.seed), 0, inst.cfg);
  }
  inst.validate();
  return inst;
}

py::array_t<double> vec_array(const std::vector<double>& v) {
  py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
  auto w = out.mutable_unchecked<1>();
  for (py::ssize_t i = 0; i < w.shape(0); ++i) w(i) = v[static_cast<size_t>(i)];
  return out;
}

py::dict alloc_dict(const Allocation& alloc, const Instance& inst) {
  const int n = inst.cfg.antenna_count, k = inst.cfg.user_count;
  py::array_t<std::complex<double>> cov({n, n});
  auto w = cov.mutable_unchecked<2>();
  const std::vector<cdouble> q = alloc.covariance.to_row_major();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) w(r, c) = q[static_cast<size_t>(r) * n + c];
  std::vector<double> rates(k), freqs(k);
  for (int i = 0; i < k; ++i) {
    rates[i] = alloc.rate(i);
    freqs[i] = inst.profiles[i].cycles_per_bit * alloc.local_bits[i] /
               inst.cfg.block_seconds;
  }
  py::dict d;
  d["covariance"] = cov;
  d["slot_seconds"] = vec_array(alloc.slot_seconds);
  d["offload_bits"] = vec_array(alloc.offload_bits);
  d["local_bits"] = vec_array(alloc.local_bits);
  d["rates_bps"] = vec_array(rates);
  d["cpu_frequencies_hz"] = vec_array(freqs);
  return d;
}

py::dict report_dict(const SolveReport& rep) {
  py::dict d;
  d["status"] = to_string(rep.status);
  d["primal_objective"] = rep.primal_objective;
  d["dual_bound"] = rep.dual_bound;
  d["relative_gap"] = rep.relative_gap;
  d["iterations"] = rep.iterations;
  d["eh_slack"] = vec_array(rep.eh_slack);
  d["time_slack"] = rep.time_slack;
  d["capacity_slack"] = rep.capacity_slack;
  d["trace_slack"] = rep.trace_slack;
  d["covariance_spectrum"] = vec_array(rep.covariance_spectrum);
  return d;
}

}  // namespace

PYBIND11_MODULE(_wpmec, m) {
  m.doc() = "Wireless-powered MEC: joint energy beamforming and time/bits "
            "allocation maximizing weighted computation bits";

  m.def("dbm_to_watts", &dbm_to_watts, py::arg("dbm"),
        "Convert a dBm level to watts.");

  m.def(
      "generate_channels",
      [](std::uint64_t seed, std::uint64_t trial, int users, int antennas) {
        if (users < 1 || antennas < 1)
          throw std::invalid_argument("users and antennas must be >= 1");
        SystemConfig cfg;
        cfg.user_count = users;
        cfg.antenna_count = antennas;
        const ChannelSet cs = generate_channels(seed, trial, cfg);
        py::array_t<std::complex<double>> h({users, antennas}), g({users, antennas});
        auto wh = h.mutable_unchecked<2>(), wg = g.mutable_unchecked<2>();
        for (int i = 0; i < users; ++i)
          for (int a = 0; a < antennas; ++a) {
            wh(i, a) = cs.downlink(i)[a];
            wg(i, a) = cs.uplink(i)[a];
          }
        return py::make_tuple(h, g);
      },
      py::arg("seed"), py::arg("trial"), py::arg("users"), py::arg("antennas"),
      "Rayleigh draw (average power loss 5e-6) for the given stream key; "
      "returns (h, g) arrays of shape (users, antennas).");

  m.def(
      "solve",
      [](const std::string& config_text, const std::string& scheme,
         std::optional<ComplexArray> h, std::optional<ComplexArray> g,
         std::optional<std::uint64_t> seed) {
        const ExperimentConfig ec = parse_config(config_text);
        const Instance inst = make_instance(ec, h, g, seed);
        const SchemeId id = scheme_from_string(scheme);
        SchemeResult res;
        {
          py::gil_scoped_release release;
          res = solve_scheme(id, inst, ec.solver);
        }
        py::dict d;
        d["scheme"] = to_string(id);
        d["allocation"] = alloc_dict(res.alloc, inst);
        d["report"] = report_dict(res.report);
        return d;
      },
      py::arg("config_text") = "", py::arg("scheme") = "joint",
      py::arg("h") = std::nullopt, py::arg("g") = std::nullopt,
      py::arg("seed") = std::nullopt,
      "Solve one block. config_text uses the sectioned key-value format (empty "
      "string = reference parameters); channels come from (h, g) arrays or the "
      "seeded generator.");

  m.def(
      "brute_force",
      [](const std::string& config_text, std::optional<ComplexArray> h,
         std::optional<ComplexArray> g, std::optional<std::uint64_t> seed,
         int t_points, int q_points) {
        const ExperimentConfig ec = parse_config(config_text);
        const Instance inst = make_instance(ec, h, g, seed);
        GridSpec grid{t_points, q_points};
        std::pair<Allocation, double> best;
        {
          py::gil_scoped_release release;
          best = brute_force(inst, grid);
        }
        return py::make_tuple(best.second, alloc_dict(best.first, inst));
      },
      py::arg("config_text") = "", py::arg("h") = std::nullopt,
      py::arg("g") = std::nullopt, py::arg("seed") = std::nullopt,
      py::arg("t_points") = 64, py::arg("q_points") = 64,
      "Exhaustive reference search (N = 1, K <= 2): returns "
      "(best_objective, allocation).");

  m.def(
      "sweep",
      [](const std::string& config_text, const std::string& variable,
         std::optional<int> trials, std::optional<std::uint64_t> seed) {
        ExperimentConfig ec = parse_config(config_text);
        if (variable == "p_max_dbm")
          ec.variable = SweepVariable::transmit_power_dbm;
        else if (variable == "users")
          ec.variable = SweepVariable::user_count;
        else if (!variable.empty())
          throw std::invalid_argument("variable must be p_max_dbm or users");
        if (trials) ec.trials = *trials;
        if (seed) ec.seed = *seed;
        SweepResult res;
        {
          py::gil_scoped_release release;
          res = run_sweep(ec);
        }
        py::list rows;
        for (const SweepPoint& p : res.points) {
          py::dict d;
          d["sweep_value"] = p.sweep_value;
          d["scheme"] = to_string(p.scheme);
          d["mean_bits_per_user"] = p.mean_bits_per_user;
          d["stderr"] = p.stderr_bits;
          d["trials_ok"] = p.trials_ok;
          d["trials_failed"] = p.trials_failed;
          rows.append(d);
        }
        return rows;
      },
      py::arg("config_text"), py::arg("variable") = "",
      py::arg("trials") = std::nullopt, py::arg("seed") = std::nullopt,
      "Monte-Carlo sweep over the power budget or the user count; returns one "
      "row dict per (sweep point, scheme).");
}
