#include <cstdlib>
#include <string>
#include <vector>

#include "manycopies/cli/run.hpp"

int main(int argc, char** argv) {
  std::size_t workers = 1;
  if (const char* env = std::getenv("MANYCOPIES_WORKERS")) {
    try {
      const long value = std::stol(env);
      if (value > 0) workers = static_cast<std::size_t>(value);
    } catch (const std::exception&) {
      // Ignore malformed values and stay single-threaded.
    }
  }
  return manycopies::cli::cli_main(std::vector<std::string>(argv + 1, argv + argc), workers);
}
