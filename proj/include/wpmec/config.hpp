#pragma once

#include <string>

#include "wpmec/experiments.hpp"

namespace wpmec {

/// Sectioned key-value config: [system], [users], [sweep], [solver]; keys are
/// the struct field names; '#' or ';' to end of line is a comment. Values
/// start from the reference simulation parameter set, so a config only states
/// what it changes. Unknown sections or keys and malformed values raise
/// std::invalid_argument naming the offending line.
ExperimentConfig parse_config(const std::string& text);
ExperimentConfig load_config(const std::string& path);

/// The reference parameter set: N=4 antennas, 0.1 s blocks, 40 dBm budget,
/// 2 MHz bandwidth, 1e-9 W noise, eta 0.8, unit capacity gap, 2e5-bit server
/// capacity, uniform weights; users run 1e3 cycles/bit at up to 1e8 Hz with
/// 1e-28 switched capacitance and 1e-4 W circuit power.
ExperimentConfig default_experiment();

}  // namespace wpmec
