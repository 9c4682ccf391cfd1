#include "lyap/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lyap/stats.hpp"
#include "lyap/structure.hpp"
#include "lyap/validate.hpp"

#ifndef LYAP_VERSION
#define LYAP_VERSION "0.0.0"
#endif

namespace lyap {

using nlohmann::json;

namespace {

// Column-ordered table rendered as CSV; every cell is preformatted.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;
};

std::string cell(double v) { return format_double(v); }
std::string cell(std::int64_t v) { return std::to_string(v); }
std::string cell(bool v) { return v ? "1" : "0"; }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json seeds_json(std::uint64_t seed, std::uint64_t streams) {
  constexpr std::uint64_t kListed = 1024;
  json s;
  s["seed"] = seed;
  s["rng"] = std::string(kRngAlgorithm);
  s["stream_count"] = streams;
  json list = json::array();
  for (std::uint64_t i = 0; i < std::min(streams, kListed); ++i)
    list.push_back(derive_seed({seed, i}));
  s["stream_seeds"] = list;
  return s;
}

json estimate_json(const ExponentEstimate& e) {
  json j;
  j["order"] = e.order;
  j["value"] = number_or_null(e.value);
  j["stderr"] = number_or_null(e.std_error);
  j["N"] = e.N;
  j["n"] = e.n;
  j["died"] = e.died;
  j["died_step"] = e.died_step ? json(*e.died_step) : json(nullptr);
  return j;
}

Table estimate_table(const ExponentEstimate& e) {
  return {{"value", "stderr", "N", "n", "died"},
          {{cell(e.value), cell(e.std_error), cell(e.N), cell(std::int64_t{e.n}), cell(e.died)}}};
}

void mark_death(RunRecord& rec, const ExponentEstimate& e) {
  if (!e.died) return;
  rec.exit_code = kExitChainDeath;
  rec.message = "chain died at step " + std::to_string(e.died_step.value_or(0));
}

std::string vector_cell(const std::vector<long long>& p) {
  std::string s;
  for (std::size_t i = 0; i < p.size(); ++i) s += (i ? " " : "") + std::to_string(p[i]);
  return s;
}

std::string render_csv(const RunRecord& rec, const Table& t) {
  std::ostringstream os;
  os << "# lyap " << rec.version << "\n";
  os << "# rng: " << kRngAlgorithm << "\n";
  os << "# seed: " << rec.seeds.at("seed").get<std::uint64_t>() << "\n";
  os << "# config: " << rec.config.dump() << "\n";
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << "\n";
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f << content;
  f.close();
  if (!f) throw IoError("failed writing " + path);
}

}  // namespace

std::string version() { return LYAP_VERSION; }

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::optional<double>> reference_spectrum(const EnsembleSpec& spec, int k) {
  std::vector<std::optional<double>> ref(static_cast<std::size_t>(k));
  if (spec.family == Family::Gaussian) {
    const auto mu = newman_exponents(spec.n);
    const double shift = std::log(spec.entry_scale() * std::sqrt(static_cast<double>(spec.n)));
    for (int i = 0; i < k; ++i) ref[static_cast<std::size_t>(i)] = mu[static_cast<std::size_t>(i)] + shift;
  } else if (spec.family == Family::SymplecticWigner) {
    const auto& p = std::get<SymplecticParams>(spec.params);
    if (p.E == 0.0 || !(std::abs(p.E) < 2.0)) return ref;
    const int n = spec.n;
    const double lambda = p.lambda * std::sqrt(p.wigner_variance.value_or(1.0 / n));
    for (int i = 1; i <= k; ++i) {
      // Symplectic spectra pair gamma_{2n+1-d} = -gamma_d.
      ref[static_cast<std::size_t>(i - 1)] =
          i <= n ? ssb_exponent(n, i, lambda, p.E) : -ssb_exponent(n, 2 * n + 1 - i, lambda, p.E);
    }
  }
  return ref;
}

RunRecord run(const ExperimentConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.config = config.echo;
  rec.version = version();
  rec.seeds = seeds_json(config.seed, 1);
  Table table;
  const ChainConfig chain = config.ensemble ? config.chain_config() : ChainConfig{};

  switch (config.command) {
    case Command::Estimate: {
      const auto e = top_exponent(chain, config.x0);
      rec.results = estimate_json(e);
      table = estimate_table(e);
      mark_death(rec, e);
      break;
    }
    case Command::Pair: {
      const int dim = chain.ensemble.matrix_dim();
      const auto e = second_exponent_pair(chain, config.x0.value_or(Vector::Unit(dim, 0)),
                                          config.y0.value_or(Vector::Unit(dim, 1)));
      rec.results = estimate_json(e);
      table = estimate_table(e);
      mark_death(rec, e);
      break;
    }
    case Command::Least: {
      const auto e = least_exponent_distance(chain);
      rec.results = estimate_json(e);
      table = estimate_table(e);
      mark_death(rec, e);
      break;
    }
    case Command::Spectrum: {
      const auto est = spectrum_qr(chain, config.k);
      const auto ref = reference_spectrum(chain.ensemble, config.k);
      table.columns = {"i", "gamma_hat", "stderr", "ref", "abs_dev"};
      json rows = json::array();
      for (std::size_t i = 0; i < est.size(); ++i) {
        const double r = ref[i].value_or(std::nan(""));
        const double dev = std::abs(est[i].value - r);
        table.rows.push_back({cell(static_cast<std::int64_t>(i + 1)), cell(est[i].value),
                              cell(est[i].std_error), cell(r), cell(dev)});
        json j = estimate_json(est[i]);
        j["ref"] = number_or_null(r);
        j["abs_dev"] = number_or_null(dev);
        rows.push_back(j);
      }
      rec.results = {{"exponents", rows}};
      mark_death(rec, est.front());
      break;
    }
    case Command::Tail: {
      const auto tc =
          tail_curve(chain, config.kind, config.t_grid, config.trials, config.workers, config.center);
      rec.seeds = seeds_json(config.seed, static_cast<std::uint64_t>(config.trials));
      table.columns = {"t", "prob", "stderr", "trials", "died_fraction"};
      json rows = json::array();
      for (std::size_t i = 0; i < tc.t_grid.size(); ++i) {
        table.rows.push_back({cell(tc.t_grid[i]), cell(tc.probs[i]), cell(tc.std_errors[i]),
                              cell(tc.trials), cell(tc.died_fraction)});
        rows.push_back({{"t", tc.t_grid[i]}, {"prob", tc.probs[i]}, {"stderr", tc.std_errors[i]}});
      }
      rec.results = {{"kind", std::string(to_string(tc.kind))}, {"center", tc.center},
                     {"trials", tc.trials},  {"N", tc.N},
                     {"n", tc.n},            {"died_fraction", tc.died_fraction},
                     {"curve", rows}};
      break;
    }
    case Command::Lcd: {
      const auto& sec = *config.lcd;
      const Vector x = sec.x.resolve(config.seed);
      LcdResult r;
      if (sec.y) {
        const Vector y = sec.y->resolve(config.seed);
        r = joint_lcd(x, y, sec.query, sec.angle_grid);
      } else {
        r = lcd(x, sec.query);
      }
      const double wt = r.witness_theta.value_or(std::nan(""));
      const double wa = r.witness_angle.value_or(std::nan(""));
      const std::string wp = r.witness_lattice_point ? vector_cell(*r.witness_lattice_point) : "";
      table.columns = {"value", "at_search_limit", "witness_theta", "witness_lattice_point",
                       "witness_angle"};
      table.rows.push_back({cell(r.value), cell(r.at_search_limit), cell(wt), wp, cell(wa)});
      rec.results = {{"value", r.value},
                     {"at_search_limit", r.at_search_limit},
                     {"witness_theta", number_or_null(wt)},
                     {"witness_lattice_point",
                      r.witness_lattice_point ? json(*r.witness_lattice_point) : json(nullptr)},
                     {"witness_angle", number_or_null(wa)}};
      break;
    }
    case Command::SmallBall: {
      const auto& sec = *config.smallball;
      const Vector x = sec.x.resolve(config.seed);
      const double est = small_ball_estimate(x, sec.eps, *config.ensemble, config.trials,
                                             {config.seed, 0}, config.workers);
      rec.seeds = seeds_json(config.seed, static_cast<std::uint64_t>(config.trials));
      table.columns = {"estimate", "eps", "trials"};
      table.rows.push_back({cell(est), cell(sec.eps), cell(config.trials)});
      rec.results = {{"estimate", est}, {"eps", sec.eps}, {"trials", config.trials}};
      break;
    }
    case Command::Validate: {
      const auto checks = run_validation_suite();
      table.columns = {"check", "passed", "detail"};
      json rows = json::array();
      bool all = true;
      for (const auto& c : checks) {
        all &= c.passed;
        table.rows.push_back({c.name, cell(c.passed), "\"" + c.detail + "\""});
        rows.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      }
      rec.results = {{"checks", rows}, {"all_passed", all}};
      if (!all) {
        rec.exit_code = kExitValidationFailed;
        rec.message = "validation suite reported failures";
      }
      break;
    }
  }

  rec.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  if (config.format == OutputFormat::Csv) {
    write_file(config.output_path, render_csv(rec, table));
  } else {
    const json main = {{"config", rec.config},
                       {"seeds", rec.seeds},
                       {"version", rec.version},
                       {"results", rec.results}};
    write_file(config.output_path, main.dump(2) + "\n");
  }
  json full_config = rec.config;
  full_config["workers"] = config.workers;
  full_config["output_path"] = config.output_path;
  const json summary = {{"config", full_config},   {"seeds", rec.seeds},
                        {"version", rec.version},  {"wall_ms", rec.wall_ms},
                        {"results", rec.results}, {"exit_code", rec.exit_code}};
  write_file(config.output_path + ".summary.json", summary.dump(2) + "\n");
  return rec;
}

}  // namespace lyap
