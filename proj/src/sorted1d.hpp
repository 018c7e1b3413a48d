#pragma once

// Internal: sorted weighted scalar samples and the CDF/tail-integral sweeps
// shared by the 1-d distances, trims and mean-crossing constructions.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace robustkit::detail {

// Atoms sorted ascending with exact-duplicate weights merged.
struct Sorted1D {
  std::vector<double> x;
  std::vector<double> w;
  double total = 0.0;

  double mean() const {
    double s = 0.0;
    for (size_t i = 0; i < x.size(); ++i) s += x[i] * w[i];
    return s / total;
  }
};

inline Sorted1D make_sorted(const Eigen::VectorXd& values, const Eigen::VectorXd& weights,
                            double merge_tol = 0.0) {
  const int n = static_cast<int>(values.size());
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return values[a] < values[b]; });
  Sorted1D out;
  out.x.reserve(n);
  out.w.reserve(n);
  for (int r = 0; r < n; ++r) {
    const double xv = values[idx[r]];
    const double wv = weights[idx[r]];
    if (wv == 0.0) continue;
    if (!out.x.empty() && xv - out.x.back() <= merge_tol) {
      out.w.back() += wv;
    } else {
      out.x.push_back(xv);
      out.w.push_back(wv);
    }
    out.total += wv;
  }
  if (out.x.empty()) {  // all-zero weights: represent as a single null atom
    out.x.push_back(0.0);
    out.w.push_back(0.0);
  }
  return out;
}

// E (X - a)_+ for a weighted sorted sample (not normalized by total).
inline double upper_tail_integral(const Sorted1D& s, double a) {
  double acc = 0.0;
  for (size_t i = s.x.size(); i-- > 0;) {
    if (s.x[i] <= a) break;
    acc += s.w[i] * (s.x[i] - a);
  }
  return acc;
}

// E (a - X)_+ (not normalized).
inline double lower_tail_integral(const Sorted1D& s, double a) {
  double acc = 0.0;
  for (size_t i = 0; i < s.x.size(); ++i) {
    if (s.x[i] >= a) break;
    acc += s.w[i] * (a - s.x[i]);
  }
  return acc;
}

// Merged breakpoint grid of two samples (values within tol collapsed).
inline std::vector<double> merged_grid(const Sorted1D& a, const Sorted1D& b,
                                       double tol = 0.0) {
  std::vector<double> z;
  z.reserve(a.x.size() + b.x.size());
  z.insert(z.end(), a.x.begin(), a.x.end());
  z.insert(z.end(), b.x.begin(), b.x.end());
  std::sort(z.begin(), z.end());
  std::vector<double> out;
  for (double v : z)
    if (out.empty() || v - out.back() > tol) out.push_back(v);
  return out;
}

}  // namespace robustkit::detail
