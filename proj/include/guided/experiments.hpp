#pragma once

#include "guided/imaging.hpp"
#include "guided/reconstruction.hpp"
#include "guided/solvers.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace guided {

struct ExperimentRow {
  std::string method;
  std::optional<double> param;  // alpha, rho, MaxIter, or the swept k_scale
  double psnr_db = 0.0;
  Index iterations = 0;
  std::uint64_t seed = 0;
};

struct ExperimentConfig {
  int id = 1;  // 1..4
  MagnifySetup setup;
  std::optional<double> noise_var;  // experiment 2 defaults to 0.001
  std::uint64_t seed = 42;
  std::vector<double> alphas{0.7};
  std::vector<double> rhos;              // experiment 3; defaults to (1-a)/a for each alpha
  std::vector<Index> max_iter_caps{1, 2};  // experiment 4
  SolveOptions opts;
  bool keep_outputs = false;  // experiments 1 and 2: keep f_c, f_g, f_alpha, f_m
};

struct ExperimentReport {
  std::vector<ExperimentRow> rows;
  // Experiment 3: solver calls spent on the blend family and on the
  // regularized family.
  std::uint64_t blend_solves = 0;
  std::uint64_t regularized_solves = 0;
  // Experiment 4: relative differences to g2, one entry per cap.
  std::vector<double> g1_vs_g2;
  std::vector<double> g3_vs_g2;
  // Experiment 2.
  std::optional<AlphaSelection> alpha_selection;
  double noise_norm = 0.0;
  std::vector<std::pair<std::string, Vector>> outputs;
};

/// Runs one experiment on one setup. `img` is the ground-truth high-res image.
ExperimentReport run_experiment(const ExperimentConfig& cfg, const ImageGrid& img);

/// Sample vector S f (optionally noisy) in the high-res domain plus ||n||.
struct MagnifyInput {
  Vector sf;
  double noise_norm = 0.0;
};
MagnifyInput make_magnify_input(const ImageGrid& img, const MagnifySetup& setup,
                                std::optional<double> noise_var, std::uint64_t seed);

/// Header "method,param,psnr_db,iterations,seed".
void write_experiment_csv(std::ostream& out, const std::vector<ExperimentRow>& rows);
std::string format_number(double v);

}  // namespace guided
