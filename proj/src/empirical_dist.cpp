#include "robustkit/empirical_dist.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

namespace robustkit {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
  if (!m.allFinite()) throw NonFinite(std::string(what) + " contains a non-finite entry");
}

}  // namespace

EmpiricalDist::EmpiricalDist(Eigen::MatrixXd points, Eigen::VectorXd weights) {
  if (points.rows() < 1 || points.cols() < 1)
    throw DimensionMismatch("empirical distribution needs n >= 1, d >= 1");
  if (weights.size() != points.rows())
    throw DimensionMismatch("weights/points row mismatch");
  check_finite(points, "points");
  check_finite(weights, "weights");
  if ((weights.array() < 0.0).any())
    throw PreconditionViolated("negative weight");
  const double total = weights.sum();
  if (std::abs(total - 1.0) > 1e-12)
    throw PreconditionViolated("weights must sum to 1 (got " + std::to_string(total) + ")");

  // Drop atoms lighter than 1e-15 and renormalize the rest.
  std::vector<int> keep;
  keep.reserve(points.rows());
  for (int i = 0; i < points.rows(); ++i)
    if (weights[i] >= 1e-15) keep.push_back(i);
  if (keep.empty()) throw PreconditionViolated("all weights negligible");
  points_.resize(static_cast<int>(keep.size()), points.cols());
  weights_.resize(static_cast<int>(keep.size()));
  for (size_t r = 0; r < keep.size(); ++r) {
    points_.row(static_cast<int>(r)) = points.row(keep[r]);
    weights_[static_cast<int>(r)] = weights[keep[r]];
  }
  weights_ /= weights_.sum();
}

EmpiricalDist EmpiricalDist::uniform(Eigen::MatrixXd points) {
  const int n = static_cast<int>(points.rows());
  if (n < 1) throw DimensionMismatch("empty sample");
  return EmpiricalDist(std::move(points), Eigen::VectorXd::Constant(n, 1.0 / n));
}

EmpiricalDist EmpiricalDist::uniform_1d(const std::vector<double>& xs) {
  Eigen::MatrixXd m(static_cast<int>(xs.size()), 1);
  for (size_t i = 0; i < xs.size(); ++i) m(static_cast<int>(i), 0) = xs[i];
  return uniform(std::move(m));
}

EmpiricalDist EmpiricalDist::weighted_1d(const std::vector<double>& xs,
                                         const std::vector<double>& ws) {
  if (xs.size() != ws.size()) throw DimensionMismatch("values/weights size mismatch");
  Eigen::MatrixXd m(static_cast<int>(xs.size()), 1);
  Eigen::VectorXd w(static_cast<int>(ws.size()));
  for (size_t i = 0; i < xs.size(); ++i) {
    m(static_cast<int>(i), 0) = xs[i];
    w[static_cast<int>(i)] = ws[i];
  }
  return EmpiricalDist(std::move(m), std::move(w));
}

Eigen::VectorXd EmpiricalDist::project(const Eigen::VectorXd& v) const {
  if (v.size() != dim()) throw DimensionMismatch("projection direction dimension");
  return points_ * v;
}

EmpiricalDist EmpiricalDist::project_dist(const Eigen::VectorXd& v) const {
  Eigen::MatrixXd col = project(v);
  return EmpiricalDist(std::move(col), weights_);
}

Eigen::VectorXd EmpiricalDist::values_1d() const {
  if (dim() != 1) throw DimensionMismatch("expected 1-d distribution");
  return points_.col(0);
}

EmpiricalDist EmpiricalDist::lex_sorted() const {
  std::vector<int> idx(n());
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    for (int c = 0; c < dim(); ++c) {
      if (points_(a, c) != points_(b, c)) return points_(a, c) < points_(b, c);
    }
    return weights_[a] < weights_[b];
  });
  Eigen::MatrixXd pts(n(), dim());
  Eigen::VectorXd ws(n());
  for (int r = 0; r < n(); ++r) {
    pts.row(r) = points_.row(idx[r]);
    ws[r] = weights_[idx[r]];
  }
  return EmpiricalDist(std::move(pts), std::move(ws));
}

Eigen::VectorXd weighted_mean(const EmpiricalDist& p) {
  return p.points().transpose() * p.weights();
}

Eigen::MatrixXd weighted_second_moment(const EmpiricalDist& p) {
  return p.points().transpose() * p.weights().asDiagonal() * p.points();
}

Eigen::MatrixXd weighted_covariance(const EmpiricalDist& p) {
  const Eigen::VectorXd mu = weighted_mean(p);
  Eigen::MatrixXd centered = p.points().rowwise() - mu.transpose();
  return centered.transpose() * p.weights().asDiagonal() * centered;
}

LoadedData load_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error("empty file " + path);
  // Strip potential BOM / CR.
  while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();

  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) header.push_back(tok);
  }
  if (header.empty()) throw Error("no columns in " + path);
  bool has_w = header.back() == "w";
  const int ncols = static_cast<int>(header.size());
  const int data_cols = ncols - (has_w ? 1 : 0);
  bool has_y = data_cols >= 1 && header[data_cols - 1] == "y";

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string tok;
    std::vector<double> row;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    if (static_cast<int>(row.size()) != ncols)
      throw Error("ragged row in " + path);
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw Error("no data rows in " + path);

  const int n = static_cast<int>(rows.size());
  Eigen::MatrixXd pts(n, data_cols);
  Eigen::VectorXd ws = Eigen::VectorXd::Constant(n, 1.0 / n);
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < data_cols; ++c) pts(i, c) = rows[i][c];
    if (has_w) ws[i] = rows[i][ncols - 1];
  }
  if (has_w) {
    const double s = ws.sum();
    if (s <= 0) throw PreconditionViolated("weight column sums to zero");
    ws /= s;  // CSV weights are normalized on load
  }
  return LoadedData{EmpiricalDist(std::move(pts), std::move(ws)), has_y};
}

void save_csv(const EmpiricalDist& p, const std::string& path, bool has_response,
              bool write_weights) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path);
  const int d = p.dim();
  const int xcols = has_response ? d - 1 : d;
  std::vector<std::string> cols;
  for (int c = 0; c < xcols; ++c) cols.push_back("x" + std::to_string(c + 1));
  if (has_response) cols.push_back("y");
  if (write_weights) cols.push_back("w");
  for (size_t c = 0; c < cols.size(); ++c) out << cols[c] << (c + 1 < cols.size() ? "," : "");
  out << "\n";
  out.precision(17);
  for (int i = 0; i < p.n(); ++i) {
    for (int c = 0; c < d; ++c) {
      out << p.points()(i, c);
      if (c + 1 < d || write_weights) out << ",";
    }
    if (write_weights) out << p.weights()[i];
    out << "\n";
  }
}

}  // namespace robustkit
