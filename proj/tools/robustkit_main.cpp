// Command-line front end: distances with witnesses, resilience profiles,
// corruption generators with receipts, estimators, lemma verification
// suites, and sweep execution.

#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "robustkit/adversaries.hpp"
#include "robustkit/distances.hpp"
#include "robustkit/estimators.hpp"
#include "robustkit/harness.hpp"
#include "robustkit/oracle.hpp"
#include "robustkit/resilience.hpp"
#include "robustkit/verify.hpp"

namespace {

using nlohmann::json;
using namespace robustkit;

json vec_json(const Eigen::VectorXd& v) {
  json arr = json::array();
  for (int i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

json mat_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

json witness_json(const DistanceWitness& w) {
  json j;
  j["metric"] = w.metric;
  if (w.v.size() > 0) j["v"] = vec_json(w.v);
  if (w.v2.size() > 0) j["v2"] = vec_json(w.v2);
  j["threshold"] = w.threshold;
  j["linear"] = w.linear;
  if (w.event.rows() > 0) j["event_atoms"] = w.event.rows();
  if (w.plan_m.size() > 0) j["plan_rows"] = w.plan_m.size();
  return j;
}

json receipt_json(const CorruptionReceipt& r) {
  json j;
  j["metric"] = r.metric;
  j["model"] = r.model;
  if (!r.strategy.empty()) j["strategy"] = r.strategy;
  j["eps"] = r.eps;
  j["achieved"] = r.achieved;
  j["affected"] = r.affected;
  j["affected_mass"] = r.affected_mass;
  j["seed"] = r.seed;
  return j;
}

OrliczFunction psi_from_name(const std::string& name) {
  if (name == "exp") return OrliczFunction::exponential();
  if (name == "subg") return OrliczFunction::subgaussian();
  if (name.rfind("power:", 0) == 0)
    return OrliczFunction::power(std::stod(name.substr(6)));
  throw UnknownStrategy("unknown Orlicz function: " + name);
}

// Contaminant spec for the oblivious model: "pointmass:c1,..,cd" or
// "gaussian:shift,scale" (isotropic around shift * ones).
PointSampler parse_contaminant(const std::string& text, int d) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string::npos) {
    std::stringstream ss(text.substr(colon + 1));
    std::string tok;
    while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
  }
  if (kind == "pointmass") {
    if (static_cast<int>(params.size()) != d)
      throw UnknownStrategy("pointmass contaminant needs d coordinates");
    Eigen::VectorXd c = Eigen::Map<const Eigen::VectorXd>(params.data(), d);
    return [c](std::mt19937_64&) { return c; };
  }
  if (kind == "gaussian") {
    if (params.size() != 2)
      throw UnknownStrategy("gaussian contaminant needs shift,scale");
    const double shift = params[0], scale = params[1];
    return [shift, scale, d](std::mt19937_64& rng) {
      std::normal_distribution<double> gauss(0.0, 1.0);
      Eigen::VectorXd x(d);
      for (int i = 0; i < d; ++i) x[i] = shift + scale * gauss(rng);
      return x;
    };
  }
  throw UnknownStrategy("unknown contaminant: " + kind);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"robustkit: resilience diagnostics and robust estimation under "
               "TV and W1 corruption"};
  app.require_subcommand(1);

  // ---- distance ----
  auto* dist_cmd = app.add_subcommand("distance", "distance between two samples");
  std::string metric = "tv", p_path, q_path;
  int budget = 256;
  RngSeed seed = 1;
  dist_cmd->add_option("--metric", metric, "tv|ks|w1|tvtilde|w1tilde");
  dist_cmd->add_option("--p", p_path, "CSV sample")->required();
  dist_cmd->add_option("--q", q_path, "CSV sample")->required();
  dist_cmd->add_option("--budget", budget, "direction budget");
  dist_cmd->add_option("--seed", seed, "direction seed");

  // ---- resilience ----
  auto* res_cmd = app.add_subcommand("resilience", "worst-deletion profile");
  std::string res_input, etas_text = "0.01,0.02,0.05,0.1,0.2";
  res_cmd->add_option("--input", res_input, "CSV sample")->required();
  res_cmd->add_option("--etas", etas_text, "comma-separated deletion levels");
  res_cmd->add_option("--budget", budget, "direction budget");
  res_cmd->add_option("--seed", seed, "direction seed");

  // ---- corrupt ----
  auto* cor_cmd = app.add_subcommand("corrupt", "apply a corruption model");
  std::string cor_input, cor_output, model = "tv_adaptive";
  std::string strategy = "tail_mimic", contaminant = "pointmass:0";
  double eps = 0.1;
  cor_cmd->add_option("--input", cor_input, "CSV sample")->required();
  cor_cmd->add_option("--output", cor_output, "corrupted CSV")->required();
  cor_cmd->add_option("--model", model,
                      "tv_oblivious|tv_adaptive|w1|dimension_delete");
  cor_cmd->add_option("--strategy", strategy, "strategy spec for adaptive/w1");
  cor_cmd->add_option("--contaminant", contaminant,
                      "oblivious contaminant: pointmass:..|gaussian:shift,scale");
  cor_cmd->add_option("--eps", eps, "corruption budget");
  cor_cmd->add_option("--seed", seed, "corruption seed");

  // ---- estimate ----
  auto* est_cmd = app.add_subcommand("estimate", "run an estimator");
  std::string est_input, est_name = "filter_mean", psi_name = "power:2";
  EstimatorConfig cfg;
  est_cmd->add_option("--input", est_input, "CSV sample")->required();
  est_cmd->add_option("--estimator", est_name,
                      "robust_mean_1d|robust_mean_highd|filter_mean|"
                      "filter_mean_isotropic_kth|w1_project_moment|"
                      "robust_linreg_tv|robust_linreg_w1|ols");
  est_cmd->add_option("--eps", cfg.eps, "assumed corruption level");
  est_cmd->add_option("--sigma", cfg.sigma, "scale");
  est_cmd->add_option("--psi", psi_name, "power:k|exp|subg");
  est_cmd->add_option("--k", cfg.k, "moment order");
  est_cmd->add_option("--R", cfg.R, "regression norm cap");
  est_cmd->add_option("--budget", cfg.direction_budget, "direction budget");
  est_cmd->add_option("--seed", cfg.seed, "estimator seed");

  // ---- verify-lemmas ----
  auto* ver_cmd = app.add_subcommand("verify-lemmas",
                                     "randomized structural-lemma suites");
  std::string suite;
  int count = 0;
  ver_cmd->add_option("--suite", suite, "run a single suite (default: all)");
  ver_cmd->add_option("--count", count, "instance count override (0 = default)");
  ver_cmd->add_option("--seed", seed, "suite seed");

  // ---- sweep ----
  auto* swp_cmd = app.add_subcommand("sweep", "run a sweep spec");
  std::string spec_path, out_path;
  bool do_fit = false;
  swp_cmd->add_option("--spec", spec_path, "JSON sweep spec")->required();
  swp_cmd->add_option("--out", out_path, "output CSV")->required();
  swp_cmd->add_flag("--fit", do_fit, "append a log-log slope fit to stdout");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dist_cmd->parsed()) {
      const auto p = load_csv(p_path).dist;
      const auto q = load_csv(q_path).dist;
      DistanceReport rep;
      if (metric == "tv")
        rep = tv_discrete(p, q);
      else if (metric == "ks")
        rep = ks_1d(p, q);
      else if (metric == "w1")
        rep = w1_1d(p, q);
      else if (metric == "tvtilde")
        rep = tvtilde(p, q, ProjectionFamily::quad_diff(p.dim(), budget, seed));
      else if (metric == "w1tilde")
        rep = w1tilde(p, q, seed, budget);
      else
        throw UnknownStrategy("unknown metric: " + metric);
      json out;
      out["metric"] = metric;
      out["value"] = rep.value;
      out["witness"] = witness_json(rep.witness);
      out["witness_value"] = reevaluate_witness(rep.witness, p, q);
      std::cout << out.dump(2) << "\n";
    } else if (res_cmd->parsed()) {
      const auto p = load_csv(res_input).dist;
      std::vector<double> etas;
      std::stringstream ss(etas_text);
      std::string tok;
      while (std::getline(ss, tok, ',')) etas.push_back(std::stod(tok));
      const auto prof = resilience_profile(p, etas, budget, seed);
      json out;
      out["etas"] = prof.etas;
      out["rho"] = prof.rho;
      json dirs = json::array();
      for (const auto& v : prof.witness_dirs) dirs.push_back(vec_json(v));
      out["witness_dirs"] = dirs;
      std::cout << out.dump(2) << "\n";
    } else if (cor_cmd->parsed()) {
      const auto loaded = load_csv(cor_input);
      const auto& clean = loaded.dist;
      CorruptionResult result = [&]() {
        if (model == "tv_oblivious") {
          // Resample the observed points as the clean source.
          const auto& pts = clean.points();
          std::vector<double> cum(clean.n());
          double acc = 0.0;
          for (int i = 0; i < clean.n(); ++i) cum[i] = (acc += clean.weights()[i]);
          PointSampler src = [&pts, cum](std::mt19937_64& rng) {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const auto it = std::lower_bound(cum.begin(), cum.end(), u(rng));
            const int idx = std::min<int>(it - cum.begin(), pts.rows() - 1);
            return Eigen::VectorXd(pts.row(idx).transpose());
          };
          return corrupt_tv_oblivious(src, parse_contaminant(contaminant, clean.dim()),
                                      clean.dim(), eps, clean.n(), seed);
        }
        if (model == "tv_adaptive")
          return corrupt_tv_adaptive(clean, eps,
                                     AdaptiveTvStrategy::parse(strategy, clean.dim()),
                                     seed);
        if (model == "w1")
          return corrupt_w1(clean, eps, W1Strategy::parse(strategy, clean.dim()), seed);
        if (model == "dimension_delete") return adversary_dimension_delete(clean, eps);
        throw UnknownStrategy("unknown corruption model: " + model);
      }();
      save_csv(result.corrupted, cor_output, loaded.has_response);
      std::cout << receipt_json(result.receipt).dump(2) << "\n";
    } else if (est_cmd->parsed()) {
      const auto p = load_csv(est_input).dist;
      cfg.psi = psi_from_name(psi_name);
      EstimatorReport rep = [&]() {
        if (est_name == "robust_mean_1d") return robust_mean_1d(p, cfg);
        if (est_name == "robust_mean_highd") return robust_mean_highd(p, cfg);
        if (est_name == "filter_mean") return filter_mean(p, cfg);
        if (est_name == "filter_mean_isotropic_kth")
          return filter_mean_isotropic_kth(p, cfg);
        if (est_name == "w1_project_moment") return w1_project_moment(p, cfg);
        if (est_name == "robust_linreg_tv") return robust_linreg_tv(p, cfg);
        if (est_name == "robust_linreg_w1") return robust_linreg_w1(p, cfg);
        if (est_name == "ols") {
          EstimatorReport r{ols_theta(p), Eigen::MatrixXd(), p, 0.0, 0.0, 0, 0.0};
          return r;
        }
        throw UnknownStrategy("unknown estimator: " + est_name);
      }();
      json out;
      out["estimator"] = est_name;
      out["estimate"] = vec_json(rep.estimate);
      if (rep.second_moment.size() > 0) out["second_moment"] = mat_json(rep.second_moment);
      out["mass_removed"] = rep.mass_removed;
      out["transport_spent"] = rep.transport_spent;
      out["iterations"] = rep.iterations;
      out["aggregation_gap"] = rep.aggregation_gap;
      std::cout << out.dump(2) << "\n";
    } else if (ver_cmd->parsed()) {
      std::vector<VerifySuiteResult> results;
      if (suite.empty()) {
        results = run_all_verify_suites(seed);
      } else {
        results.push_back(run_verify_suite(suite, count, seed));
      }
      int total_violations = 0;
      for (const auto& r : results) {
        std::cout << "suite=" << r.suite << " checked=" << r.checked
                  << " violations=" << r.violations << " elapsed_ms="
                  << static_cast<long>(r.elapsed_ms) << "\n";
        total_violations += r.violations;
      }
      if (total_violations > 0) {
        std::cout << "suite,index,detail\n";
        for (const auto& r : results)
          for (const auto& f : r.failures) std::cout << f << "\n";
        return 1;
      }
    } else if (swp_cmd->parsed()) {
      const auto spec = SweepSpec::parse_json_file(spec_path);
      const auto result = run_sweep(spec);
      std::ofstream out(out_path);
      if (!out) throw Error("cannot write: " + out_path);
      out << result.csv();
      json summary;
      summary["eps"] = spec.eps_grid;
      summary["median_error"] = result.median_error;
      if (do_fit) {
        const auto fit = fit_slope(result);
        summary["slope"] = fit.slope;
        summary["stderr"] = fit.stderr_slope;
        summary["points_used"] = fit.points_used;
      }
      std::cout << summary.dump(2) << "\n";
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
