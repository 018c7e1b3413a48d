#pragma once

// Experiment harness: clean-data generators, corruption plans, sweep
// execution over an eps grid with per-cell seeding, CSV output and log-log
// slope fits.

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "robustkit/adversaries.hpp"
#include "robustkit/common.hpp"
#include "robustkit/empirical_dist.hpp"
#include "robustkit/estimators.hpp"

namespace robustkit {

// Clean-data generators. For regression tasks the generator appends the
// response as the last column: y = theta'x + noise_std * xi.
struct GeneratorSpec {
  enum class Kind { Gaussian, StudentT, Pareto, ProofConstruction };
  Kind kind = Kind::Gaussian;
  int d = 1;
  Eigen::VectorXd mean;       // Gaussian
  Eigen::MatrixXd cov;        // Gaussian (identity if empty)
  double df = 3.0;            // StudentT degrees of freedom
  double alpha = 3.0;         // Pareto shape (x_m = 1), centered to mean 0
  double whiten = 0.0;        // >0: divide coordinates by this scale
  // ProofConstruction: two-atom regression design, informative mass eps0 at
  // x = b(1, eps0) along the first axis, y = (t/b) x (noiseless).
  double pc_eps0 = 0.1;
  double pc_t = 1.0;
  // Regression head (ignored by ProofConstruction, which fixes its own y).
  bool regression = false;
  Eigen::VectorXd theta;      // true parameter
  double noise_std = 1.0;
  static GeneratorSpec parse_json(const std::string& json_text);
};
EmpiricalDist generate_clean(const GeneratorSpec& gen, int n, RngSeed seed);

// Corruption plan for a sweep cell (eps filled per cell).
struct CorruptionPlan {
  enum class Kind { None, TvAdaptive, W1, DimensionDelete };
  Kind kind = Kind::None;
  AdaptiveTvStrategy tv_strategy;
  W1Strategy w1_strategy;
};

struct SweepSpec {
  enum class Task { Mean, Mean1d, SecondMoment, Linreg };
  Task task = Task::Mean;
  GeneratorSpec generator;
  int n = 1000;
  std::vector<double> eps_grid;  // strictly increasing, inside (0, 0.45)
  int trials = 10;
  CorruptionPlan corruption;
  EstimatorConfig estimator;     // eps overwritten per cell
  std::string estimator_name = "filter_mean";
  RngSeed seed = 1;
  int holdout_n = 100000;        // population surrogate for loss-based errors
  static SweepSpec parse_json_file(const std::string& path);
  static SweepSpec parse_json(const std::string& json_text);
};

struct SweepCell {
  double eps = 0.0;
  int trial = 0;
  double error = 0.0;
  double mass_removed = 0.0;
  double runtime_ms = 0.0;
  std::string flag;  // "" | "budget_exceeded" | "no_convergence" | ...
};

struct SweepResult {
  SweepSpec spec;
  std::vector<SweepCell> cells;   // ordered by (eps index, trial)
  std::vector<double> median_error;  // per eps, NaN-aware
  std::string csv() const;  // header eps,trial,error,mass_removed,runtime_ms,flag
};

// Runs every (eps, trial) cell with cell seed split_seed(seed, eps_idx,
// trial); each cell draws its own generator and corruption streams, so the
// result is independent of execution order.
SweepResult run_sweep(const SweepSpec& spec);

// OLS fit of log(median error) against log(eps). Throws DegenerateFit with
// fewer than 3 usable (finite, positive) medians.
struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  int points_used = 0;
};
SlopeFit fit_slope(const std::vector<double>& eps, const std::vector<double>& median_error);
SlopeFit fit_slope(const SweepResult& result);

}  // namespace robustkit
