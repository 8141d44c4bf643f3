#include "mukstab/divdiff.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>

namespace mukstab {

namespace {

constexpr int kTaylorOrder = 16;

// Upper-triangular matrix product, sized for at most ~12 nodes.
void tri_multiply(const std::vector<double>& a, const std::vector<double>& b,
                  std::vector<double>& out, int n) {
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      double s = 0.0;
      for (int k = i; k <= j; ++k) s += a[i * n + k] * b[k * n + j];
      out[i * n + j] = s;
    }
  }
}

// exp of the bidiagonal Opitz matrix Z = diag(b) + superdiag(1): the (0, m)
// entry is the confluent divided difference of exp on the nodes b.
double opitz_exp(const std::vector<double>& b, double* condition) {
  const int n = static_cast<int>(b.size());
  double maxabs = 0.0;
  for (double x : b) maxabs = std::max(maxabs, std::fabs(x));
  int squarings = 0;
  double scale = 1.0;
  while (maxabs * scale > 0.5) {
    scale *= 0.5;
    ++squarings;
  }

  std::vector<double> Z(n * n, 0.0), term(n * n, 0.0), acc(n * n, 0.0), tmp(n * n, 0.0);
  for (int i = 0; i < n; ++i) {
    Z[i * n + i] = b[i] * scale;
    if (i + 1 < n) Z[i * n + i + 1] = scale;
  }
  for (int i = 0; i < n; ++i) {
    acc[i * n + i] = 1.0;
    term[i * n + i] = 1.0;
  }
  for (int k = 1; k <= kTaylorOrder; ++k) {
    tri_multiply(term, Z, tmp, n);
    for (int i = 0; i < n * n; ++i) term[i] = tmp[i] / k;
    for (int i = 0; i < n * n; ++i) acc[i] += term[i];
  }
  for (int s = 0; s < squarings; ++s) {
    tri_multiply(acc, acc, tmp, n);
    std::swap(acc, tmp);
  }
  if (condition) *condition = 1.0 + squarings;
  return acc[0 * n + (n - 1)];
}

}  // namespace

DDResult divided_difference_exp(std::span<const double> nodes) {
  DDResult res;
  const int m = static_cast<int>(nodes.size());
  if (m == 0) return res;
  if (m == 1) {
    res.value = std::exp(nodes[0]);
    return res;
  }
  std::vector<double> a(nodes.begin(), nodes.end());
  std::sort(a.begin(), a.end());
  double maxabs = 0.0, mean = 0.0;
  for (double x : a) {
    maxabs = std::max(maxabs, std::fabs(x));
    mean += x;
  }
  mean /= m;
  const double tau = 1e-5 * (1.0 + maxabs);
  double min_gap = a[1] - a[0];
  for (int i = 1; i + 1 < m; ++i) min_gap = std::min(min_gap, a[i + 1] - a[i]);

  if (min_gap >= tau) {
    // classical table; nodes are well separated so subtractions stay benign
    std::vector<double> col(m);
    for (int i = 0; i < m; ++i) col[i] = std::exp(a[i]);
    double worst = std::fabs(col[0]);
    for (int level = 1; level < m; ++level) {
      for (int i = 0; i + level < m; ++i) {
        col[i] = (col[i + 1] - col[i]) / (a[i + level] - a[i]);
        worst = std::max(worst, std::fabs(col[i]));
      }
    }
    res.value = col[0];
    res.method = DDMethod::divided_difference;
    res.condition_estimate = (res.value != 0.0) ? worst / std::fabs(res.value) : worst;
    return res;
  }

  // clustered nodes: Taylor/matrix path around the cluster mean
  std::vector<double> shifted(m);
  for (int i = 0; i < m; ++i) shifted[i] = a[i] - mean;
  double cond = 1.0;
  double dd = opitz_exp(shifted, &cond);
  res.value = std::exp(mean) * dd;
  res.method = DDMethod::taylor_cluster;
  res.condition_estimate = cond;
  return res;
}

std::vector<double> complete_homogeneous(std::span<const double> values, int kmax) {
  std::vector<double> h(kmax + 1, 0.0);
  h[0] = 1.0;
  // incremental variable-by-variable recurrence
  for (double x : values) {
    for (int k = 1; k <= kmax; ++k) h[k] += x * h[k - 1];
  }
  return h;
}

}  // namespace mukstab
