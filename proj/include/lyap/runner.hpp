#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "lyap/config.hpp"

namespace lyap {

/// Output could not be written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitValidationFailed = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitChainDeath = 3;
inline constexpr int kExitIo = 4;

std::string version();

/// "%.17g", with nan / inf / -inf spelled out.
std::string format_double(double v);

struct RunRecord {
  nlohmann::json config;
  nlohmann::json seeds;
  std::string version;
  double wall_ms = 0.0;
  nlohmann::json results;
  int exit_code = kExitOk;
  std::string message;
};

/// Reference exponents for the spectrum table, when the ensemble has one:
/// Gaussian (Newman, shifted by log(scale sqrt n)) and symplectic Wigner
/// (weak-disorder formula with lambda^2 scaled by the Wigner variance).
std::vector<std::optional<double>> reference_spectrum(const EnsembleSpec& spec, int k);

/// Executes the experiment and writes the output file plus
/// `<output_path>.summary.json`. Throws IoError when writing fails.
RunRecord run(const ExperimentConfig& config);

}  // namespace lyap
