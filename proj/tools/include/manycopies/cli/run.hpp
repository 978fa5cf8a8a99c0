#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "manycopies/cli/config.hpp"

namespace manycopies::cli {

struct OutputFile {
  std::string name;
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct RunManifest {
  nlohmann::json config;
  std::string version;
  std::string started;   // UTC, ISO 8601
  std::string finished;
  std::filesystem::path directory;
  std::vector<OutputFile> files;  // data files; manifest.json itself is not listed

  nlohmann::json to_json() const;
};

struct RunOptions {
  std::size_t workers = 1;  // trajectory ensembles only
};

// Runs the experiment into <output_dir>/<experiment>-<digest prefix>/,
// writing CSV tables, summary.json and manifest.json.
RunManifest run(const RunConfig& config, const RunOptions& options = {});

struct Recipe {
  int criterion;
  std::string title;
  std::string command;  // starts with the program name
  std::string expect;
};

const std::vector<Recipe>& recipes();
std::string list_recipes();

// Whitespace split of a recipe command with the program name dropped.
std::vector<std::string> recipe_args(const Recipe& recipe);

// {"error": {"type": ..., "message": ..., "field": ...}}
nlohmann::json error_json(const std::exception& e);

// Full command-line behaviour; returns the process exit status.
int cli_main(const std::vector<std::string>& args, std::size_t workers);

}  // namespace manycopies::cli
