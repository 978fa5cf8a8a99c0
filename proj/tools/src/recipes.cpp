#include <sstream>

#include "manycopies/cli/run.hpp"

namespace manycopies::cli {

const std::vector<Recipe>& recipes() {
  static const std::vector<Recipe> list = {
      {1, "joint-measurability frontier",
       "manycopies povm-frontier --set mode=unsharp --set grid=100 --out runs",
       "feasible == (epsilon^2 + delta^2 <= 1) on every row; min_eigenvalue_of_M_pp >= -1e-9 on feasible rows; "
       "summary.formula_mismatches = 0, sharp_nogo.infeasible = true"},
      {2, "faulty-projection frontier",
       "manycopies povm-frontier --set mode=faulty --set grid=100 --out runs",
       "feasible == (2 - lambda - eta >= sqrt(lambda^2 + eta^2)); summary.formula_mismatches = 0; "
       "symmetric slice boundary 2 - sqrt(2) = 0.5857864376"},
      {3, "collapse Born weights",
       "manycopies collapse-evolve --set n_copies=4 --set initial=product --set local_weights=0.3,0.7 "
       "--set engine=dense --set t_final=20 --out runs",
       "summary.final_pointer_weights = [0.3, 0.7] within 1e-6"},
      {4, "branching ratio k/N (Monte Carlo)",
       "manycopies collapse-jump --set n_copies=4 --set initial=basis --set minus_count=1 --set n_traj=10000 "
       "--seed 42 --out runs",
       "pointer 1 frequency 0.25 within 3 sigma (0.013); summary.max_z_score < 3"},
      {5, "structured engine at N = 6",
       "manycopies collapse-evolve --set n_copies=6 --set initial=basis --set minus_count=2 --set engine=structured "
       "--set t_final=5 --set record_stride=50 --out runs",
       "completes; summary.trace_drift <= 1e-6; summary.final_pointer_weights = [2/3, 1/3] within 1e-6"},
      {6, "bath reduction to the Lindblad rate",
       "manycopies bath-compare --set n_copies=2 --set minus_count=1 --set alpha_squared=0.05 "
       "--set levels=50,100,200,400 --out runs",
       "rate_error and branching_error < 0.05 at n_levels = 400; summary.rate_error_monotone_decreasing = true"},
      {7, "sequential-measurement bound",
       "manycopies seq-bound --set epsilon_steps=101 --set n_copies=2 --set delays=0 --out runs",
       "seq_bound.csv: |p_plus - p_minus| = bound within 1e-10; many_copy.csv: violated = 1 for every epsilon > 0"},
      {8, "Born-rule harmonic spectroscopy",
       "manycopies born-spectrum --set source=harmonics --set xi=1:0.9,2:0.1 --set omega=1 --set periods=20 "
       "--set samples_per_period=64 --out runs",
       "peaks only at omega = 0, 2, 4; summary.max_relative_off_harmonic < 1e-8"},
      {9, "Sorkin deviation",
       "manycopies sorkin --set amplitudes=random --set n_random=10000 --set epsilon=0.1 --seed 7 --out runs",
       "summary.max_abs_single_copy <= 1e-12; summary.max_abs_two_copy_minus_closed_form <= 1e-10"},
      {10, "determinism",
       "manycopies collapse-jump --set n_copies=2 --set initial=product --set n_traj=2000 --seed 42 --out runs",
       "running twice gives identical sha256 digests for every data file in manifest.json"},
  };
  return list;
}

std::string list_recipes() {
  std::ostringstream os;
  for (const auto& r : recipes()) {
    os << "# [" << r.criterion << "] " << r.title << "\n" << r.command << "\n#   expect: " << r.expect << "\n\n";
  }
  return os.str();
}

std::vector<std::string> recipe_args(const Recipe& recipe) {
  std::istringstream is(recipe.command);
  std::vector<std::string> args;
  std::string word;
  is >> word;  // program name
  while (is >> word) args.push_back(word);
  return args;
}

}  // namespace manycopies::cli
