#include "lyap/config.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include <boost/random/normal_distribution.hpp>

#include "lyap/stats.hpp"

namespace lyap {

using nlohmann::json;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 8> kCommands{{
    {Command::Estimate, "estimate"},
    {Command::Spectrum, "spectrum"},
    {Command::Pair, "pair"},
    {Command::Least, "least"},
    {Command::Tail, "tail"},
    {Command::Lcd, "lcd"},
    {Command::SmallBall, "smallball"},
    {Command::Validate, "validate"},
}};

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

// Reads one JSON object and rejects keys that were never asked for.
class StrictObject {
 public:
  StrictObject(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected a table");
  }

  bool has(std::string_view key) {
    seen_.insert(std::string(key));
    return j_.contains(key);
  }
  const json& raw(std::string_view key) {
    seen_.insert(std::string(key));
    return j_.at(std::string(key));
  }
  std::string field(std::string_view key) const { return join(path_, key); }

  std::optional<double> number(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number()) throw ConfigError(field(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ConfigError(field(key), "must be finite");
    return d;
  }
  std::optional<std::int64_t> integer(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number_integer()) throw ConfigError(field(key), "expected an integer");
    return v.get<std::int64_t>();
  }
  std::optional<std::uint64_t> unsigned_integer(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_number_unsigned()) throw ConfigError(field(key), "expected a non-negative integer");
    return v.get<std::uint64_t>();
  }
  std::optional<bool> boolean(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_boolean()) throw ConfigError(field(key), "expected true or false");
    return v.get<bool>();
  }
  std::optional<std::string> string(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_string()) throw ConfigError(field(key), "expected a string");
    return v.get<std::string>();
  }
  std::optional<std::vector<double>> numbers(std::string_view key) {
    if (!has(key)) return std::nullopt;
    const auto& v = raw(key);
    if (!v.is_array()) throw ConfigError(field(key), "expected an array of numbers");
    std::vector<double> out;
    for (const auto& e : v) {
      if (!e.is_number()) throw ConfigError(field(key), "expected an array of numbers");
      out.push_back(e.get<double>());
    }
    return out;
  }

  void finish() const {
    for (const auto& [key, _] : j_.items())
      if (!seen_.count(key)) throw ConfigError(join(path_, key), "unknown key");
  }

 private:
  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

template <class T>
T require(std::optional<T> v, const std::string& field) {
  if (!v) throw ConfigError(field, "required");
  return *v;
}

Vector to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

EnsembleSpec parse_ensemble(const json& j) {
  StrictObject o(j, "ensemble");
  const auto family_name = require(o.string("family"), o.field("family"));
  const auto family = family_from_string(family_name);
  if (!family) throw ConfigError(o.field("family"), "unknown family '" + family_name + "'");
  EnsembleSpec spec;
  spec.family = *family;
  const auto n = o.integer("n");
  if (spec.family != Family::ShiftCocycle) {
    spec.n = static_cast<int>(require(n, o.field("n")));
    if (spec.n < 1) throw ConfigError(o.field("n"), "must be >= 1");
  } else {
    spec.n = 2;
    if (n && *n != 2) throw ConfigError(o.field("n"), "shift_cocycle matrices are 2 x 2");
  }
  spec.scale = o.number("scale");
  if (spec.scale && !is_iid(spec.family))
    throw ConfigError(o.field("scale"), "only iid families take a scale");
  spec.subgaussian_K = o.number("subgaussian_K").value_or(1.0);
  if (!(spec.subgaussian_K > 0.0)) throw ConfigError(o.field("subgaussian_K"), "must be > 0");

  const bool has_params = o.has("model_params");
  const json empty = json::object();
  const json& pj = has_params ? o.raw("model_params") : empty;
  StrictObject p(pj, "ensemble.model_params");
  try {
    switch (spec.family) {
      case Family::TwoPoint:
        spec.params = TwoPointAtom(require(p.number("p"), p.field("p")),
                                   require(p.number("a"), p.field("a")),
                                   require(p.number("b"), p.field("b")));
        break;
      case Family::ShiftCocycle: {
        ShiftParams sp;
        sp.E = require(p.number("E"), p.field("E"));
        sp.omega = require(p.number("omega"), p.field("omega"));
        sp.x0 = p.number("x0").value_or(0.0);
        sp.f.cos = p.numbers("cos").value_or(std::vector<double>{});
        sp.f.sin = p.numbers("sin").value_or(std::vector<double>{});
        spec.params = sp;
        break;
      }
      case Family::SymplecticWigner: {
        SymplecticParams sp;
        sp.lambda = require(p.number("lambda"), p.field("lambda"));
        sp.E = require(p.number("E"), p.field("E"));
        sp.wigner_variance = p.number("wigner_variance");
        spec.params = sp;
        break;
      }
      case Family::Fixed: {
        if (!p.has("matrix")) throw ConfigError(p.field("matrix"), "required");
        const auto& rows = p.raw("matrix");
        if (!rows.is_array() || rows.size() != static_cast<std::size_t>(spec.n))
          throw ConfigError(p.field("matrix"), "expected n rows");
        Matrix m(spec.n, spec.n);
        for (int i = 0; i < spec.n; ++i) {
          const auto& row = rows[static_cast<std::size_t>(i)];
          if (!row.is_array() || row.size() != static_cast<std::size_t>(spec.n))
            throw ConfigError(p.field("matrix"), "expected n numbers per row");
          for (int c = 0; c < spec.n; ++c) {
            if (!row[static_cast<std::size_t>(c)].is_number())
              throw ConfigError(p.field("matrix"), "expected numbers");
            m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
          }
        }
        spec.params = FixedParams{m};
        break;
      }
      default:
        break;
    }
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("ensemble", e.what());
  }
  p.finish();
  o.finish();
  return spec;
}

VectorSource parse_vector_source(StrictObject& parent, std::string_view key) {
  const std::string field = parent.field(key);
  if (!parent.has(key)) throw ConfigError(field, "required");
  const auto& v = parent.raw(key);
  VectorSource src;
  if (v.is_array()) {
    src.literal = to_vector(require(parent.numbers(key), field));
    if (src.literal->size() == 0 || !(src.literal->norm() > 0.0))
      throw ConfigError(field, "must be a nonzero vector");
    return src;
  }
  StrictObject g(v, field);
  const auto n = require(g.integer("n"), g.field("n"));
  if (n < 1) throw ConfigError(g.field("n"), "must be >= 1");
  src.generator_n = static_cast<int>(n);
  src.generator_stream = g.unsigned_integer("stream_id").value_or(0);
  g.finish();
  return src;
}

std::optional<Vector> parse_unit_vector(StrictObject& o, std::string_view key, int dim) {
  const auto v = o.numbers(key);
  if (!v) return std::nullopt;
  Vector x = to_vector(*v);
  if (x.size() != dim) throw ConfigError(o.field(key), "dimension must equal the matrix size");
  if (std::abs(x.norm() - 1.0) > 1e-10) throw ConfigError(o.field(key), "must be a unit vector");
  return x;
}

bool needs_chain(Command c) {
  return c == Command::Estimate || c == Command::Spectrum || c == Command::Pair ||
         c == Command::Least || c == Command::Tail;
}

}  // namespace

std::string_view to_string(Command c) {
  for (const auto& [cmd, name] : kCommands)
    if (cmd == c) return name;
  return "unknown";
}

std::optional<Command> command_from_string(std::string_view s) {
  for (const auto& [cmd, name] : kCommands)
    if (name == s) return cmd;
  return std::nullopt;
}

Vector VectorSource::resolve(std::uint64_t seed) const {
  if (literal) return *literal;
  Engine engine = make_engine({seed, generator_stream});
  boost::random::normal_distribution<double> normal(0.0, 1.0);
  Vector v(generator_n);
  for (int i = 0; i < generator_n; ++i) v(i) = normal(engine);
  return v / v.norm();
}

ChainConfig ExperimentConfig::chain_config() const {
  ChainConfig c;
  if (ensemble) c.ensemble = *ensemble;
  c.N = N;
  c.rng = {seed, 0};
  c.renorm_every = renorm_every;
  c.record_increments = record_increments;
  return c;
}

ExperimentConfig parse_config(const json& doc, Command command, const ConfigOverrides& overrides) {
  StrictObject root(doc, "");
  ExperimentConfig cfg;
  cfg.command = command;

  if (const auto c = root.string("command")) {
    const auto parsed = command_from_string(*c);
    if (!parsed) throw ConfigError("command", "unknown command '" + *c + "'");
    if (*parsed != command)
      throw ConfigError("command", "config is for '" + *c + "' but subcommand is '" +
                                       std::string(to_string(command)) + "'");
  }

  cfg.seed = overrides.seed ? *overrides.seed : root.unsigned_integer("seed").value_or(0);
  if (overrides.seed) root.has("seed");
  const auto workers = root.integer("workers");
  cfg.workers = overrides.workers ? *overrides.workers : static_cast<int>(workers.value_or(1));
  if (cfg.workers < 1) throw ConfigError("workers", "must be >= 1");

  if (root.has("ensemble")) cfg.ensemble = parse_ensemble(root.raw("ensemble"));
  const bool chain_cmd = needs_chain(command);
  if ((chain_cmd || command == Command::SmallBall) && !cfg.ensemble)
    throw ConfigError("ensemble", "required");
  const int dim = cfg.ensemble ? cfg.ensemble->matrix_dim() : 0;

  if (root.has("chain")) {
    StrictObject ch(root.raw("chain"), "chain");
    cfg.N = ch.integer("N").value_or(0);
    cfg.renorm_every = static_cast<int>(ch.integer("renorm_every").value_or(1));
    cfg.record_increments = ch.boolean("record_increments").value_or(false);
    cfg.k = static_cast<int>(ch.integer("k").value_or(0));
    if (cfg.ensemble) {
      cfg.x0 = parse_unit_vector(ch, "x0", dim);
      cfg.y0 = parse_unit_vector(ch, "y0", dim);
    } else if (ch.has("x0") || ch.has("y0")) {
      throw ConfigError("chain", "x0/y0 need an ensemble");
    }
    ch.finish();
  }
  if (chain_cmd) {
    if (cfg.N < 1) throw ConfigError("chain.N", "required, must be >= 1");
    if (cfg.renorm_every < 1 || cfg.renorm_every > cfg.N)
      throw ConfigError("chain.renorm_every", "must lie in [1, N]");
    if (command == Command::Spectrum) {
      if (cfg.k == 0) cfg.k = dim;
      if (cfg.k < 1 || cfg.k > dim) throw ConfigError("chain.k", "must lie in [1, n]");
    }
    if (command == Command::Pair || command == Command::Tail) {
      if (dim < 2) throw ConfigError("ensemble.n", "pair estimates need dimension >= 2");
    }
    if (command == Command::Pair) {
      const Vector x = cfg.x0.value_or(Vector::Unit(dim, 0));
      const Vector y = cfg.y0.value_or(Vector::Unit(dim, 1));
      if (!(wedge_volume_2(x, y) > 1e-12)) throw ConfigError("chain.y0", "parallel to x0");
    }
    if (command == Command::Least && dim < 2)
      throw ConfigError("ensemble.n", "least exponent needs dimension >= 2");
  }

  cfg.t_grid = root.numbers("t_grid").value_or(std::vector<double>{});
  cfg.trials = root.integer("trials").value_or(0);
  if (const auto kind = root.string("kind")) {
    const auto k = estimator_from_string(*kind);
    if (!k) throw ConfigError("kind", "expected top, second_sum or least");
    cfg.kind = *k;
  }
  if (root.has("center")) {
    const auto& c = root.raw("center");
    if (c.is_number()) {
      cfg.center = c.get<double>();
    } else if (c.is_string() && c.get<std::string>() == "newman") {
      if (!cfg.ensemble || cfg.ensemble->family != Family::Gaussian)
        throw ConfigError("center", "\"newman\" needs a gaussian ensemble");
      const auto mu = newman_exponents(cfg.ensemble->n);
      const double shift =
          std::log(cfg.ensemble->entry_scale() * std::sqrt(static_cast<double>(cfg.ensemble->n)));
      cfg.center = cfg.kind == EstimatorKind::Top         ? mu.front() + shift
                   : cfg.kind == EstimatorKind::SecondSum ? mu[0] + mu[1] + 2.0 * shift
                                                          : mu.back() + shift;
    } else {
      throw ConfigError("center", "expected a number or \"newman\"");
    }
  }
  if (command == Command::Tail) {
    if (cfg.t_grid.empty()) throw ConfigError("t_grid", "required");
    if (!std::is_sorted(cfg.t_grid.begin(), cfg.t_grid.end()) ||
        !(cfg.t_grid.front() > 0.0))
      throw ConfigError("t_grid", "must be positive and sorted ascending");
    if (cfg.trials < 100) throw ConfigError("trials", "required, must be >= 100");
    if (cfg.kind == EstimatorKind::Least && dim < 2)
      throw ConfigError("kind", "least needs dimension >= 2");
  }

  if (root.has("lcd")) {
    StrictObject l(root.raw("lcd"), "lcd");
    LcdSection sec;
    sec.query.gamma = l.number("gamma").value_or(sec.query.gamma);
    sec.query.kappa = l.number("kappa").value_or(sec.query.kappa);
    sec.query.theta_max = l.number("theta_max").value_or(sec.query.theta_max);
    sec.query.grid_step = l.number("grid_step").value_or(sec.query.grid_step);
    try {
      sec.query.validate();
    } catch (const std::invalid_argument& e) {
      throw ConfigError("lcd", e.what());
    }
    sec.x = parse_vector_source(l, "x");
    if (l.has("y")) sec.y = parse_vector_source(l, "y");
    sec.angle_grid = static_cast<int>(l.integer("angle_grid").value_or(sec.angle_grid));
    if (sec.angle_grid < 1) throw ConfigError("lcd.angle_grid", "must be >= 1");
    l.finish();
    cfg.lcd = sec;
  }
  if (command == Command::Lcd && !cfg.lcd) throw ConfigError("lcd", "required");

  if (root.has("smallball")) {
    StrictObject s(root.raw("smallball"), "smallball");
    SmallBallSection sec;
    sec.x = parse_vector_source(s, "x");
    sec.eps = require(s.number("eps"), s.field("eps"));
    if (!(sec.eps >= 0.0)) throw ConfigError("smallball.eps", "must be >= 0");
    s.finish();
    cfg.smallball = sec;
  }
  if (command == Command::SmallBall) {
    if (!cfg.smallball) throw ConfigError("smallball", "required");
    if (!is_iid(cfg.ensemble->family))
      throw ConfigError("ensemble.family", "small-ball estimation needs an iid family");
    if (cfg.trials < 1) throw ConfigError("trials", "required, must be >= 1");
  }

  if (const auto f = root.string("format")) {
    if (*f == "csv")
      cfg.format = OutputFormat::Csv;
    else if (*f == "json")
      cfg.format = OutputFormat::Json;
    else
      throw ConfigError("format", "expected csv or json");
  }
  const auto out = root.string("output_path");
  cfg.output_path = overrides.output_path ? *overrides.output_path
                    : out                 ? *out
                                          : "lyap_" + std::string(to_string(command)) +
                                                (cfg.format == OutputFormat::Csv ? ".csv" : ".json");
  root.finish();

  cfg.echo = doc;
  cfg.echo["command"] = std::string(to_string(command));
  cfg.echo["seed"] = cfg.seed;
  cfg.echo.erase("workers");
  cfg.echo.erase("output_path");
  return cfg;
}

nlohmann::json ensemble_to_json(const EnsembleSpec& spec) {
  json j;
  j["family"] = std::string(to_string(spec.family));
  j["n"] = spec.n;
  if (spec.scale) j["scale"] = *spec.scale;
  j["subgaussian_K"] = spec.subgaussian_K;
  return j;
}

}  // namespace lyap
