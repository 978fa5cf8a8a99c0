#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "doctest.h"

#include "manycopies/cli/config.hpp"
#include "manycopies/cli/digest.hpp"
#include "manycopies/cli/run.hpp"
#include "manycopies/errors.hpp"

using namespace manycopies::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("manycopies_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

std::string field_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<no error>";
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const std::exception& e) {
    return e.what();
  }
  return "<no error>";
}

struct CaptureStdout {
  std::stringstream buffer;
  std::streambuf* old;
  CaptureStdout() : old(std::cout.rdbuf(buffer.rdbuf())) {}
  ~CaptureStdout() { std::cout.rdbuf(old); }
};

}  // namespace

TEST_CASE("experiment names round trip") {
  for (Experiment e : all_experiments()) CHECK(experiment_from_string(to_string(e)) == e);
  CHECK_FALSE(experiment_from_string("nope").has_value());
}

TEST_CASE("config serialization round trip") {
  for (Experiment e : all_experiments()) {
    nlohmann::json doc{{"experiment", to_string(e)}, {"seed", 17}, {"output_dir", "somewhere"}};
    const RunConfig a = parse_config(doc);
    const RunConfig b = parse_config(serialize(a));
    CHECK(a == b);
    CHECK(config_digest(a) == config_digest(b));
    CHECK(b.seed == 17);
  }
}

TEST_CASE("defaults are filled in and the digest ignores output_dir") {
  const RunConfig a = parse_config_text(R"({"experiment": "seq-bound", "output_dir": "x"})");
  const RunConfig b = parse_config_text(R"({"experiment": "seq-bound", "output_dir": "y", "parameters": {"n_copies": 2}})");
  CHECK(a.integer("n_copies") == 2);
  CHECK(config_digest(a) == config_digest(b));
  const RunConfig c = parse_config_text(R"({"experiment": "seq-bound", "seed": 1})");
  CHECK(config_digest(a) != config_digest(c));
  CHECK_FALSE(a.has("epsilon"));
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK(field_of([] { parse_config_text(R"({"experiment": "sorkin", "colour": 1})"); }) == "colour");
  CHECK(field_of([] { parse_config_text(R"({"experiment": "sorkin", "parameters": {"epsilonn": 1}})"); }) ==
        "parameters.epsilonn");
  CHECK(field_of([] { parse_config_text(R"({"parameters": {}})"); }) == "experiment");
  CHECK(field_of([] { parse_config_text(R"({"experiment": "bogus"})"); }) == "experiment");
  CHECK_THROWS_AS(parse_config_text("{not json"), ConfigError);
}

TEST_CASE("range errors name the admissible interval") {
  const auto bad = [] { parse_args({"seq-bound", "--set", "epsilon=1.5"}); };
  CHECK(field_of(bad) == "parameters.epsilon");
  CHECK(message_of(bad).find("epsilon ∈ [0,1]") != std::string::npos);
  CHECK(field_of([] { parse_args({"collapse-evolve", "--set", "n_copies=9"}); }) == "parameters.n_copies");
  CHECK(field_of([] { parse_args({"collapse-evolve", "--set", "alpha=0"}); }) == "parameters.alpha");
  CHECK(field_of([] { parse_args({"collapse-evolve", "--set", "engine=magic"}); }) == "parameters.engine");
  CHECK(field_of([] { parse_args({"collapse-evolve", "--set", "n_copies=two"}); }) == "parameters.n_copies");
}

TEST_CASE("command-line flags override the config file") {
  const fs::path dir = scratch("override");
  fs::create_directories(dir);
  const fs::path file = dir / "cfg.json";
  std::ofstream(file) << R"({"experiment": "sorkin", "seed": 3, "parameters": {"epsilon": 0.5}})";
  const RunConfig c = parse_args({"sorkin", "--config", file.string(), "--set", "epsilon=0.25", "--seed", "9"});
  CHECK(c.number("epsilon") == 0.25);
  CHECK(c.seed == 9);
  const RunConfig d = parse_args({"--config", file.string()});
  CHECK(d.experiment == Experiment::sorkin);
  CHECK(d.number("epsilon") == 0.5);
  CHECK(d.seed == 3);
  fs::remove_all(dir);
}

TEST_CASE("list parameters parse from the command line") {
  const RunConfig c = parse_args({"bath-compare", "--set", "levels=50,100"});
  CHECK(c.numbers("levels") == std::vector<double>{50, 100});
  CHECK_THROWS_AS(parse_args({"bath-compare", "--set", "levels=50,,x"}), ConfigError);
  CHECK_THROWS_AS(parse_args({"bath-compare", "--set", "levels"}), ConfigError);
}

TEST_CASE("every recipe parses") {
  REQUIRE(recipes().size() == 10);
  for (int i = 0; i < 10; ++i) CHECK(recipes()[i].criterion == i + 1);
  for (const auto& r : recipes()) {
    CHECK(r.command.rfind("manycopies ", 0) == 0);
    CHECK_NOTHROW(parse_args(recipe_args(r)));
  }
  CHECK(list_recipes().find("[10]") != std::string::npos);
}

TEST_CASE("parameter help mentions every experiment") {
  const std::string help = parameter_help();
  for (Experiment e : all_experiments()) CHECK(help.find(to_string(e)) != std::string::npos);
}

TEST_CASE("sha256") {
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
}

TEST_CASE("runs are deterministic and write a manifest") {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  RunConfig c = parse_args({"collapse-jump", "--set", "n_traj=200", "--seed", "4"});
  c.output_dir = a.string();
  const RunManifest ma = run(c);
  c.output_dir = b.string();
  RunOptions two;
  two.workers = 2;
  const RunManifest mb = run(c, two);
  REQUIRE(ma.files.size() == mb.files.size());
  for (std::size_t i = 0; i < ma.files.size(); ++i) {
    CHECK(ma.files[i].name == mb.files[i].name);
    CHECK(ma.files[i].sha256 == mb.files[i].sha256);
    CHECK(sha256_file(ma.directory / ma.files[i].name) == ma.files[i].sha256);
  }
  CHECK(fs::exists(ma.directory / "manifest.json"));
  CHECK(ma.directory.filename().string().rfind("collapse-jump-", 0) == 0);
  const auto j = ma.to_json();
  CHECK(j.contains("config"));
  CHECK(j.contains("files"));
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST_CASE("error json and exit codes") {
  const fs::path out = scratch("exit");
  {
    CaptureStdout cap;
    CHECK(cli_main({"seq-bound", "--set", "epsilon=1.5", "--out", out.string()}, 1) == 2);
    const auto j = nlohmann::json::parse(cap.buffer.str());
    CHECK(j["error"]["type"] == "config");
    CHECK(j["error"]["field"] == "parameters.epsilon");
  }
  {
    CaptureStdout cap;
    CHECK(cli_main({"frobnicate"}, 1) == 2);
  }
  {
    CaptureStdout cap;
    CHECK(cli_main({}, 1) == 2);
    CHECK(cli_main({"recipes"}, 1) == 0);
  }
  {
    CaptureStdout cap;
    CHECK(cli_main({"sorkin", "--out", out.string()}, 1) == 0);
    const auto j = nlohmann::json::parse(cap.buffer.str());
    CHECK(j.contains("files"));
  }
  CHECK(error_json(manycopies::CapExceeded("x", 10, 5))["error"]["type"] == "cap_exceeded");
  CHECK(error_json(manycopies::IntegrationError("x"))["error"]["type"] == "integration");
  CHECK(error_json(manycopies::FrontierViolation("x", 1.2))["error"]["type"] == "frontier_violation");
  fs::remove_all(out);
}
