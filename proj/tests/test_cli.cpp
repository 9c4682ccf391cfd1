#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <boost/math/special_functions/digamma.hpp>

#include "lyap/config.hpp"
#include "lyap/runner.hpp"

using namespace lyap;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("lyap_cli_test_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

json estimate_doc() {
  return json::parse(R"({
    "command": "estimate", "seed": 7,
    "ensemble": {"family": "gaussian", "n": 4},
    "chain": {"N": 200}
  })");
}

json tail_doc() {
  return json::parse(R"({
    "command": "tail", "seed": 3,
    "ensemble": {"family": "rademacher", "n": 6},
    "chain": {"N": 30}, "t_grid": [0.02, 0.05, 0.1], "trials": 300, "kind": "top"
  })");
}

std::string field_of(const json& doc, Command c) {
  try {
    parse_config(doc, c);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<accepted>";
}

std::string run_to_file(json doc, Command c, const std::string& name, int workers,
                        OutputFormat fmt = OutputFormat::Csv) {
  ConfigOverrides ov;
  ov.workers = workers;
  ov.output_path = (scratch() / name).string();
  if (fmt == OutputFormat::Json) doc["format"] = "json";
  run(parse_config(doc, c, ov));
  return slurp(*ov.output_path);
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(LYAP_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const std::string& name, const json& doc) {
  const fs::path p = scratch() / name;
  std::ofstream(p) << doc.dump(2);
  return p;
}

}  // namespace

TEST_CASE("strict schema rejects unknown and misspelled keys with their path") {
  auto doc = estimate_doc();
  doc["bogus"] = 1;
  CHECK(field_of(doc, Command::Estimate) == "bogus");

  doc = estimate_doc();
  doc["ensemble"]["famly"] = "gaussian";
  CHECK(field_of(doc, Command::Estimate) == "ensemble.famly");

  doc = estimate_doc();
  doc["chain"]["renorm"] = 2;
  CHECK(field_of(doc, Command::Estimate) == "chain.renorm");

  doc = estimate_doc();
  doc["ensemble"]["model_params"] = {{"lambda", 0.1}};
  CHECK(field_of(doc, Command::Estimate).rfind("ensemble.model_params", 0) == 0);
}

TEST_CASE("field-level validation") {
  auto doc = estimate_doc();
  doc["chain"].erase("N");
  CHECK(field_of(doc, Command::Estimate) == "chain.N");

  doc = estimate_doc();
  doc.erase("ensemble");
  CHECK(field_of(doc, Command::Estimate) == "ensemble");

  doc = estimate_doc();
  doc["ensemble"]["family"] = "cauchy";
  CHECK(field_of(doc, Command::Estimate) == "ensemble.family");

  doc = estimate_doc();
  doc["ensemble"]["n"] = "four";
  CHECK(field_of(doc, Command::Estimate) == "ensemble.n");

  doc = estimate_doc();
  doc["chain"]["x0"] = {1.0, 1.0, 0.0, 0.0};
  CHECK(field_of(doc, Command::Estimate) == "chain.x0");

  doc = tail_doc();
  doc["t_grid"] = {0.1, 0.05};
  CHECK(field_of(doc, Command::Tail) == "t_grid");

  doc = tail_doc();
  doc["trials"] = 50;
  CHECK(field_of(doc, Command::Tail) == "trials");

  doc = tail_doc();
  doc["center"] = "newman";
  CHECK(field_of(doc, Command::Tail) == "center");

  CHECK(field_of(estimate_doc(), Command::Tail) == "command");
}

TEST_CASE("overrides and echo") {
  ConfigOverrides ov;
  ov.seed = 99;
  ov.workers = 3;
  ov.output_path = "somewhere.csv";
  const auto cfg = parse_config(estimate_doc(), Command::Estimate, ov);
  CHECK(cfg.seed == 99);
  CHECK(cfg.workers == 3);
  CHECK(cfg.output_path == "somewhere.csv");
  CHECK(cfg.echo["seed"] == 99);
  CHECK(cfg.echo["command"] == "estimate");
  CHECK_FALSE(cfg.echo.contains("workers"));
  CHECK_FALSE(cfg.echo.contains("output_path"));
  CHECK(parse_config(estimate_doc(), Command::Estimate).output_path == "lyap_estimate.csv");
}

TEST_CASE("csv outputs embed version, seed and config, then the column row") {
  const std::vector<std::tuple<Command, json, std::string>> cases = {
      {Command::Estimate, estimate_doc(), "value,stderr,N,n,died"},
      {Command::Tail, tail_doc(), "t,prob,stderr,trials,died_fraction"},
      {Command::Spectrum,
       json::parse(R"({"ensemble": {"family": "gaussian", "n": 3}, "chain": {"N": 100, "k": 3}})"),
       "i,gamma_hat,stderr,ref,abs_dev"},
      {Command::Lcd, json::parse(R"({"lcd": {"x": [1, 0]}})"),
       "value,at_search_limit,witness_theta,witness_lattice_point,witness_angle"},
      {Command::SmallBall,
       json::parse(R"({"ensemble": {"family": "rademacher", "n": 3}, "trials": 200,
                       "smallball": {"x": [1, 0, 0], "eps": 0.5}})"),
       "estimate,eps,trials"},
  };
  for (const auto& [cmd, doc, header] : cases) {
    CAPTURE(header);
    const auto text = run_to_file(doc, cmd, std::string(to_string(cmd)) + ".csv", 2);
    const auto ls = lines(text);
    REQUIRE(ls.size() >= 5u);
    CHECK(ls[0] == "# lyap " + version());
    CHECK(ls[1].rfind("# rng: ", 0) == 0);
    CHECK(ls[2].rfind("# seed: ", 0) == 0);
    REQUIRE(ls[3].rfind("# config: ", 0) == 0);
    const auto echo = json::parse(ls[3].substr(10));
    CHECK(echo["command"] == std::string(to_string(cmd)));
    CHECK(ls[4] == header);
  }
}

TEST_CASE("spectrum rows carry the reference exponents") {
  const auto text = run_to_file(
      json::parse(R"({"ensemble": {"family": "gaussian", "n": 3}, "chain": {"N": 100}})"),
      Command::Spectrum, "spec_ref.csv", 1);
  const auto ls = lines(text);
  REQUIRE(ls.size() == 8u);
  for (int i = 0; i < 3; ++i) {
    std::vector<std::string> cells;
    std::stringstream row(ls[5 + static_cast<std::size_t>(i)]);
    for (std::string c; std::getline(row, c, ',');) cells.push_back(c);
    REQUIRE(cells.size() == 5u);
    CHECK(std::stoi(cells[0]) == i + 1);
    const double mu = 0.5 * (std::log(2.0) + boost::math::digamma((3 - i) / 2.0) - std::log(3.0));
    CHECK(std::stod(cells[3]) == doctest::Approx(mu).epsilon(1e-10));
  }
}

TEST_CASE("json output and sidecar summary") {
  const auto text = run_to_file(tail_doc(), Command::Tail, "tail.json", 2, OutputFormat::Json);
  const auto j = json::parse(text);
  for (const char* k : {"config", "seeds", "version", "results"}) CHECK(j.contains(k));
  CHECK(j["seeds"]["seed"] == 3);
  CHECK(j["seeds"]["stream_count"] == 300);
  CHECK(j["results"]["curve"].size() == 3u);
  const auto side = json::parse(slurp(scratch() / "tail.json.summary.json"));
  CHECK(side.contains("wall_ms"));
  CHECK(side["config"]["workers"] == 2);
  CHECK(side["results"] == j["results"]);
}

TEST_CASE("outputs are byte-identical across worker counts and re-runs of the echo") {
  for (auto fmt : {OutputFormat::Csv, OutputFormat::Json}) {
    const std::string ext = fmt == OutputFormat::Csv ? ".csv" : ".json";
    const auto a = run_to_file(tail_doc(), Command::Tail, "w1" + ext, 1, fmt);
    const auto b = run_to_file(tail_doc(), Command::Tail, "w4" + ext, 4, fmt);
    CHECK(a == b);
  }
  auto sb = json::parse(R"({"ensemble": {"family": "rademacher", "n": 10}, "trials": 5000,
                            "smallball": {"x": {"n": 10, "stream_id": 2}, "eps": 0.1}})");
  CHECK(run_to_file(sb, Command::SmallBall, "sb1.csv", 1) ==
        run_to_file(sb, Command::SmallBall, "sb3.csv", 3));

  // The echoed config alone reproduces the file.
  const auto first = run_to_file(estimate_doc(), Command::Estimate, "echo_a.csv", 1);
  const auto echo = json::parse(lines(first)[3].substr(10));
  CHECK(run_to_file(echo, Command::Estimate, "echo_b.csv", 2) == first);
}

TEST_CASE("chain death in a single-run command sets exit code 3") {
  auto doc = json::parse(R"({"ensemble": {"family": "fixed", "n": 2,
                             "model_params": {"matrix": [[0, 1], [0, 0]]}}, "chain": {"N": 5}})");
  ConfigOverrides ov;
  ov.output_path = (scratch() / "dead.csv").string();
  const auto rec = run(parse_config(doc, Command::Estimate, ov));
  CHECK(rec.exit_code == kExitChainDeath);
  CHECK(rec.message.find("step 1") != std::string::npos);
}

TEST_CASE("unwritable output raises an i/o error") {
  ConfigOverrides ov;
  ov.output_path = (scratch() / "missing_dir" / "x.csv").string();
  CHECK_THROWS_AS(run(parse_config(estimate_doc(), Command::Estimate, ov)), IoError);
}

TEST_CASE("command-line binary exit codes") {
  const auto ok = write_config("ok.json", estimate_doc());
  const auto out = (scratch() / "bin_out.csv").string();
  CHECK(run_cli("estimate --config " + ok.string() + " --out " + out) == 0);
  CHECK(fs::exists(out));
  CHECK(fs::exists(out + ".summary.json"));

  auto bad = estimate_doc();
  bad["chain"]["NN"] = 3;
  CHECK(run_cli("estimate --config " + write_config("bad.json", bad).string() + " --out " + out) == 2);
  CHECK(run_cli("estimate --out " + out) == 2);
  CHECK(run_cli("tail --config " + ok.string() + " --out " + out) == 2);
  CHECK(run_cli("estimate --config " + ok.string() + " --workers 0 --out " + out) == 2);
  {
    std::ofstream(scratch() / "garbage.json") << "{ not json";
  }
  CHECK(run_cli("estimate --config " + (scratch() / "garbage.json").string()) == 2);

  auto dead = json::parse(R"({"ensemble": {"family": "fixed", "n": 2,
                              "model_params": {"matrix": [[0, 1], [0, 0]]}}, "chain": {"N": 5}})");
  CHECK(run_cli("least --config " + write_config("dead.json", dead).string() + " --out " + out) == 3);

  CHECK(run_cli("estimate --config " + ok.string() + " --out " + (scratch() / "nope" / "x.csv").string()) == 4);
  CHECK(run_cli("estimate --config " + (scratch() / "absent.json").string()) == 4);

  // --seed overrides the config seed and lands in the output.
  CHECK(run_cli("estimate --config " + ok.string() + " --seed 12345 --out " + out) == 0);
  CHECK(lines(slurp(out))[2] == "# seed: 12345");

  CHECK(run_cli("validate --out " + (scratch() / "validate.csv").string()) == 0);
}
