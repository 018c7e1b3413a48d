#include "robustkit/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "robustkit/linalg.hpp"

namespace robustkit {

namespace {

OrliczFunction parse_psi(const std::string& name) {
  if (name == "exp") return OrliczFunction::exponential();
  if (name == "subg") return OrliczFunction::subgaussian();
  if (name.rfind("power:", 0) == 0)
    return OrliczFunction::power(std::stod(name.substr(6)));
  throw UnknownStrategy("unknown Orlicz function: " + name);
}

GeneratorSpec::Kind parse_generator_kind(const std::string& name) {
  if (name == "gaussian") return GeneratorSpec::Kind::Gaussian;
  if (name == "student_t") return GeneratorSpec::Kind::StudentT;
  if (name == "pareto") return GeneratorSpec::Kind::Pareto;
  if (name == "proof_construction") return GeneratorSpec::Kind::ProofConstruction;
  throw UnknownGenerator("unknown generator: " + name);
}

GeneratorSpec parse_generator(const nlohmann::json& j) {
  GeneratorSpec gen;
  gen.kind = parse_generator_kind(j.value("kind", std::string("gaussian")));
  gen.d = j.value("d", 1);
  if (j.contains("mean")) {
    const auto arr = j["mean"].get<std::vector<double>>();
    gen.mean = Eigen::Map<const Eigen::VectorXd>(arr.data(), arr.size());
  }
  if (j.contains("cov")) {
    const auto rows = j["cov"].get<std::vector<std::vector<double>>>();
    gen.cov.resize(rows.size(), rows.empty() ? 0 : rows[0].size());
    for (size_t r = 0; r < rows.size(); ++r)
      for (size_t c = 0; c < rows[r].size(); ++c) gen.cov(r, c) = rows[r][c];
  }
  gen.df = j.value("df", 3.0);
  gen.alpha = j.value("alpha", 3.0);
  gen.whiten = j.value("whiten", 0.0);
  gen.pc_eps0 = j.value("pc_eps0", 0.1);
  gen.pc_t = j.value("pc_t", 1.0);
  gen.regression = j.value("regression", false);
  if (j.contains("theta")) {
    const auto arr = j["theta"].get<std::vector<double>>();
    gen.theta = Eigen::Map<const Eigen::VectorXd>(arr.data(), arr.size());
  }
  gen.noise_std = j.value("noise_std", 1.0);
  return gen;
}

}  // namespace

GeneratorSpec GeneratorSpec::parse_json(const std::string& json_text) {
  return parse_generator(nlohmann::json::parse(json_text));
}

EmpiricalDist generate_clean(const GeneratorSpec& gen, int n, RngSeed seed) {
  if (n < 1) throw PreconditionViolated("sample size must be positive");
  if (gen.d < 1) throw PreconditionViolated("dimension must be positive");
  auto rng = make_rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  if (gen.kind == GeneratorSpec::Kind::ProofConstruction) {
    if (!(gen.pc_eps0 > 0.0) || gen.pc_eps0 >= 0.5)
      throw BadEps("informative mass must lie in (0, 0.5)");
    const double b = dimension_delete_atom(1.0, gen.pc_eps0);
    const int k = std::max(1, static_cast<int>(std::lround(gen.pc_eps0 * n)));
    Eigen::MatrixXd pts = Eigen::MatrixXd::Zero(n, gen.d + 1);
    for (int i = 0; i < k; ++i) {
      pts(i, 0) = b;
      pts(i, gen.d) = gen.pc_t;
    }
    return EmpiricalDist::uniform(pts);
  }

  Eigen::MatrixXd L;
  if (gen.kind == GeneratorSpec::Kind::Gaussian && gen.cov.size() > 0) {
    if (gen.cov.rows() != gen.d || gen.cov.cols() != gen.d)
      throw DimensionMismatch("covariance shape does not match d");
    Eigen::LLT<Eigen::MatrixXd> llt(gen.cov);
    if (llt.info() != Eigen::Success)
      throw PreconditionViolated("covariance must be positive definite");
    L = llt.matrixL();
  }
  if (gen.kind == GeneratorSpec::Kind::StudentT && gen.df <= 2.0)
    throw PreconditionViolated("Student t generator needs df > 2");
  if (gen.kind == GeneratorSpec::Kind::Pareto && gen.alpha <= 1.0)
    throw PreconditionViolated("Pareto generator needs alpha > 1");

  const int cols = gen.d + (gen.regression ? 1 : 0);
  Eigen::MatrixXd pts(n, cols);
  std::chi_squared_distribution<double> chi2(gen.df);
  const double pareto_mean = gen.alpha / (gen.alpha - 1.0);

  for (int i = 0; i < n; ++i) {
    Eigen::VectorXd x(gen.d);
    switch (gen.kind) {
      case GeneratorSpec::Kind::Gaussian: {
        for (int c = 0; c < gen.d; ++c) x[c] = gauss(rng);
        if (L.size() > 0) x = L * x;
        if (gen.mean.size() == gen.d) x += gen.mean;
        break;
      }
      case GeneratorSpec::Kind::StudentT: {
        for (int c = 0; c < gen.d; ++c)
          x[c] = gauss(rng) / std::sqrt(chi2(rng) / gen.df);
        break;
      }
      case GeneratorSpec::Kind::Pareto: {
        for (int c = 0; c < gen.d; ++c)
          x[c] = std::pow(std::max(unif(rng), 1e-300), -1.0 / gen.alpha) - pareto_mean;
        break;
      }
      default:
        throw UnknownGenerator("unhandled generator kind");
    }
    if (gen.whiten > 0.0) x /= gen.whiten;
    pts.row(i).head(gen.d) = x.transpose();
    if (gen.regression) {
      const double signal = gen.theta.size() == gen.d ? gen.theta.dot(x) : 0.0;
      pts(i, gen.d) = signal + gen.noise_std * gauss(rng);
    }
  }
  return EmpiricalDist::uniform(std::move(pts));
}

SweepSpec SweepSpec::parse_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open sweep spec: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str());
}

SweepSpec SweepSpec::parse_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  SweepSpec spec;
  const std::string task = j.value("task", std::string("mean"));
  if (task == "mean")
    spec.task = Task::Mean;
  else if (task == "mean_1d")
    spec.task = Task::Mean1d;
  else if (task == "second_moment")
    spec.task = Task::SecondMoment;
  else if (task == "linreg")
    spec.task = Task::Linreg;
  else
    throw UnknownStrategy("unknown task: " + task);

  if (j.contains("generator")) spec.generator = parse_generator(j["generator"]);
  spec.n = j.value("n", 1000);
  spec.eps_grid = j.value("eps_grid", std::vector<double>{0.1});
  spec.trials = j.value("trials", 10);
  spec.estimator_name = j.value("estimator_name", std::string("filter_mean"));
  spec.seed = j.value("seed", 1ull);
  spec.holdout_n = j.value("holdout_n", 100000);

  const bool has_response = spec.generator.regression ||
                            spec.generator.kind == GeneratorSpec::Kind::ProofConstruction;
  const int data_dim = spec.generator.d + (has_response ? 1 : 0);
  if (j.contains("corruption")) {
    const auto& c = j["corruption"];
    const std::string kind = c.value("kind", std::string("none"));
    if (kind == "none") {
      spec.corruption.kind = CorruptionPlan::Kind::None;
    } else if (kind == "tv_adaptive") {
      spec.corruption.kind = CorruptionPlan::Kind::TvAdaptive;
      spec.corruption.tv_strategy = AdaptiveTvStrategy::parse(
          c.value("strategy", std::string("tail_mimic")), data_dim);
    } else if (kind == "w1") {
      spec.corruption.kind = CorruptionPlan::Kind::W1;
      spec.corruption.w1_strategy = W1Strategy::parse(
          c.value("strategy", std::string("radial_inflate")), data_dim);
    } else if (kind == "dimension_delete") {
      spec.corruption.kind = CorruptionPlan::Kind::DimensionDelete;
    } else {
      throw UnknownStrategy("unknown corruption kind: " + kind);
    }
  }

  if (j.contains("estimator")) {
    const auto& e = j["estimator"];
    spec.estimator.sigma = e.value("sigma", 1.0);
    if (e.contains("psi")) spec.estimator.psi = parse_psi(e["psi"].get<std::string>());
    spec.estimator.k = e.value("k", 4);
    spec.estimator.R = e.value("R", 1e6);
    spec.estimator.direction_budget = e.value("direction_budget", 256);
    spec.estimator.seed = e.value("seed", 1ull);
  }

  if (spec.eps_grid.empty()) throw PreconditionViolated("eps grid must be nonempty");
  for (size_t i = 0; i < spec.eps_grid.size(); ++i) {
    if (!(spec.eps_grid[i] >= 0.0) || spec.eps_grid[i] > kMassCap)
      throw BadEps("eps grid entries must lie in [0, 0.45]");
    if (i > 0 && spec.eps_grid[i] <= spec.eps_grid[i - 1])
      throw PreconditionViolated("eps grid must be strictly increasing");
  }
  if (spec.trials < 1) throw PreconditionViolated("trials must be positive");
  return spec;
}

namespace {

// Analytic mean of the clean generator output (including a regression
// response column when present).
Eigen::VectorXd analytic_mean(const GeneratorSpec& gen) {
  if (gen.kind == GeneratorSpec::Kind::ProofConstruction) {
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(gen.d + 1);
    mu[0] = gen.pc_eps0 * dimension_delete_atom(1.0, gen.pc_eps0);
    mu[gen.d] = gen.pc_eps0 * gen.pc_t;
    return mu;
  }
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(gen.d);
  if (gen.kind == GeneratorSpec::Kind::Gaussian && gen.mean.size() == gen.d)
    mu = gen.mean;
  if (gen.whiten > 0.0) mu /= gen.whiten;
  if (gen.regression) {
    Eigen::VectorXd full(gen.d + 1);
    full.head(gen.d) = mu;
    full[gen.d] = gen.theta.size() == gen.d ? gen.theta.dot(mu) : 0.0;
    return full;
  }
  return mu;
}

EstimatorReport dispatch_estimator(const std::string& name, const EmpiricalDist& data,
                                   const EstimatorConfig& cfg) {
  if (name == "robust_mean_1d") return robust_mean_1d(data, cfg);
  if (name == "robust_mean_highd") return robust_mean_highd(data, cfg);
  if (name == "filter_mean") return filter_mean(data, cfg);
  if (name == "filter_mean_isotropic_kth") return filter_mean_isotropic_kth(data, cfg);
  if (name == "w1_project_moment") return w1_project_moment(data, cfg);
  if (name == "robust_linreg_tv") return robust_linreg_tv(data, cfg);
  if (name == "robust_linreg_w1") return robust_linreg_w1(data, cfg);
  if (name == "ols") {
    EstimatorReport rep{ols_theta(data), Eigen::MatrixXd(), data, 0.0, 0.0, 0, 0.0};
    return rep;
  }
  throw UnknownStrategy("unknown estimator: " + name);
}

double squared_loss(const EmpiricalDist& joint, const Eigen::VectorXd& theta) {
  const int d = joint.dim();
  const Eigen::VectorXd resid =
      joint.points().col(d - 1) - joint.points().leftCols(d - 1) * theta;
  return resid.array().square().matrix().dot(joint.weights());
}

double nan_aware_median(std::vector<double> v) {
  v.erase(std::remove_if(v.begin(), v.end(),
                         [](double x) { return !std::isfinite(x); }),
          v.end());
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const size_t m = v.size();
  return m % 2 == 1 ? v[m / 2] : 0.5 * (v[m / 2 - 1] + v[m / 2]);
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  SweepResult result;
  result.spec = spec;

  // Task-level reference quantities computed once from a large clean sample.
  Eigen::MatrixXd holdout_second_moment;
  Eigen::VectorXd holdout_theta;
  double holdout_loss_opt = 0.0;
  std::optional<EmpiricalDist> holdout;
  if (spec.task == SweepSpec::Task::SecondMoment ||
      spec.task == SweepSpec::Task::Linreg) {
    holdout = generate_clean(spec.generator, spec.holdout_n,
                             split_seed(spec.seed, 0x401d));
    if (spec.task == SweepSpec::Task::SecondMoment) {
      holdout_second_moment = weighted_second_moment(*holdout);
    } else {
      holdout_theta = ols_theta(*holdout);
      holdout_loss_opt = squared_loss(*holdout, holdout_theta);
    }
  }
  const Eigen::VectorXd truth_mean = analytic_mean(spec.generator);

  for (size_t ei = 0; ei < spec.eps_grid.size(); ++ei) {
    const double eps = spec.eps_grid[ei];
    std::vector<double> cell_errors;
    for (int trial = 0; trial < spec.trials; ++trial) {
      const RngSeed cell_seed =
          split_seed(spec.seed, static_cast<std::uint64_t>(ei), trial);
      SweepCell cell;
      cell.eps = eps;
      cell.trial = trial;
      const auto t0 = std::chrono::steady_clock::now();
      try {
        EmpiricalDist clean =
            generate_clean(spec.generator, spec.n, split_seed(cell_seed, 0xc1ea));
        EmpiricalDist data = clean;
        switch (spec.corruption.kind) {
          case CorruptionPlan::Kind::None:
            break;
          case CorruptionPlan::Kind::TvAdaptive:
            data = corrupt_tv_adaptive(clean, eps, spec.corruption.tv_strategy,
                                       split_seed(cell_seed, 0xadd))
                       .corrupted;
            break;
          case CorruptionPlan::Kind::W1:
            data = corrupt_w1(clean, eps, spec.corruption.w1_strategy,
                              split_seed(cell_seed, 0xadd))
                       .corrupted;
            break;
          case CorruptionPlan::Kind::DimensionDelete:
            data = adversary_dimension_delete(clean, eps).corrupted;
            break;
        }

        EstimatorConfig cfg = spec.estimator;
        cfg.eps = eps;
        cfg.seed = split_seed(cell_seed, 0xe57);
        const EstimatorReport rep = dispatch_estimator(spec.estimator_name, data, cfg);
        cell.mass_removed = rep.mass_removed;

        switch (spec.task) {
          case SweepSpec::Task::Mean:
          case SweepSpec::Task::Mean1d:
            cell.error = (rep.estimate - truth_mean).norm();
            break;
          case SweepSpec::Task::SecondMoment:
            cell.error =
                spectral_norm_sym(rep.second_moment - holdout_second_moment);
            break;
          case SweepSpec::Task::Linreg: {
            // The holdout OLS parameter minimizes the holdout loss exactly,
            // so the excess is nonnegative up to solver tolerance.
            const double excess =
                squared_loss(*holdout, rep.estimate) - holdout_loss_opt;
            cell.error = std::max(excess, 0.0);
            break;
          }
        }
      } catch (const BudgetExceeded&) {
        cell.error = std::numeric_limits<double>::quiet_NaN();
        cell.flag = "budget_exceeded";
      } catch (const NoConvergence&) {
        cell.error = std::numeric_limits<double>::quiet_NaN();
        cell.flag = "no_convergence";
      } catch (const Error& e) {
        cell.error = std::numeric_limits<double>::quiet_NaN();
        cell.flag = std::string("error: ") + e.what();
      }
      const auto t1 = std::chrono::steady_clock::now();
      cell.runtime_ms =
          std::chrono::duration<double, std::milli>(t1 - t0).count();
      cell_errors.push_back(cell.error);
      result.cells.push_back(std::move(cell));
    }
    result.median_error.push_back(nan_aware_median(cell_errors));
  }
  return result;
}

std::string SweepResult::csv() const {
  std::ostringstream out;
  out << "eps,trial,error,mass_removed,runtime_ms,flag\n";
  out.precision(17);
  for (const auto& c : cells) {
    out << c.eps << ',' << c.trial << ',' << c.error << ',' << c.mass_removed << ','
        << std::fixed << std::setprecision(3) << c.runtime_ms
        << std::defaultfloat << std::setprecision(17) << ',' << c.flag << '\n';
  }
  return out.str();
}

SlopeFit fit_slope(const std::vector<double>& eps,
                   const std::vector<double>& median_error) {
  if (eps.size() != median_error.size())
    throw DimensionMismatch("eps and median arrays must align");
  std::vector<double> lx, ly;
  for (size_t i = 0; i < eps.size(); ++i) {
    if (eps[i] > 0.0 && std::isfinite(median_error[i]) && median_error[i] > 0.0) {
      lx.push_back(std::log(eps[i]));
      ly.push_back(std::log(median_error[i]));
    }
  }
  const int k = static_cast<int>(lx.size());
  if (k < 3) throw DegenerateFit("need at least 3 usable grid points for a slope");

  double mx = 0.0, my = 0.0;
  for (int i = 0; i < k; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= k;
  my /= k;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < k; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  if (sxx <= 0.0) throw DegenerateFit("eps grid has no spread");

  SlopeFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double rss = 0.0;
  for (int i = 0; i < k; ++i) {
    const double r = ly[i] - fit.intercept - fit.slope * lx[i];
    rss += r * r;
  }
  fit.stderr_slope = k > 2 ? std::sqrt(rss / (k - 2) / sxx) : 0.0;
  fit.points_used = k;
  return fit;
}

SlopeFit fit_slope(const SweepResult& result) {
  return fit_slope(result.spec.eps_grid, result.median_error);
}

}  // namespace robustkit
