#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "lyap/chain.hpp"
#include "lyap/kernels.hpp"
#include "lyap/structure.hpp"

namespace lyap {

enum class Command { Estimate, Spectrum, Pair, Least, Tail, Lcd, SmallBall, Validate };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Command c);
std::optional<Command> command_from_string(std::string_view s);

/// Invalid experiment description; `field` is the dotted key path.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string field, const std::string& what)
      : std::runtime_error(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

/// A vector given literally or drawn as a normalized Gaussian direction.
struct VectorSource {
  std::optional<Vector> literal;
  int generator_n = 0;
  std::uint64_t generator_stream = 0;

  Vector resolve(std::uint64_t seed) const;
};

struct LcdSection {
  LcdQuery query;
  VectorSource x;
  std::optional<VectorSource> y;  // present: joint LCD
  int angle_grid = 360;
};

struct SmallBallSection {
  VectorSource x;
  double eps = 0.1;
};

struct ExperimentConfig {
  Command command = Command::Validate;
  std::optional<EnsembleSpec> ensemble;
  std::int64_t N = 0;
  int renorm_every = 1;
  bool record_increments = false;
  int k = 0;  // spectrum size; 0 means n
  std::optional<Vector> x0;
  std::optional<Vector> y0;
  std::uint64_t seed = 0;
  std::vector<double> t_grid;
  std::int64_t trials = 0;
  int workers = 1;
  EstimatorKind kind = EstimatorKind::Top;
  double center = 0.0;
  std::optional<LcdSection> lcd;
  std::optional<SmallBallSection> smallball;
  std::string output_path;
  OutputFormat format = OutputFormat::Csv;

  /// Effective configuration as written to outputs (no workers, no output_path).
  nlohmann::json echo;

  ChainConfig chain_config() const;
};

struct ConfigOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> output_path;
};

/// Strict parse: unknown keys and missing required fields throw ConfigError
/// before any computation starts.
ExperimentConfig parse_config(const nlohmann::json& doc, Command command,
                              const ConfigOverrides& overrides = {});

nlohmann::json ensemble_to_json(const EnsembleSpec& spec);

}  // namespace lyap
