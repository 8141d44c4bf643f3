#ifndef MUKSTAB_DIVDIFF_HPP
#define MUKSTAB_DIVDIFF_HPP

#include <span>
#include <vector>

namespace mukstab {

enum class DDMethod { divided_difference, taylor_cluster };

struct DDResult {
  double value = 0.0;
  DDMethod method = DDMethod::divided_difference;
  double condition_estimate = 1.0;
};

// Divided difference of t -> exp(t) on the given nodes (repetitions allowed;
// repeated nodes mean the confluent/Hermite divided difference).
//
// Two evaluation paths:
//  - classical recursion when all adjacent gaps of the sorted nodes are at
//    least 1e-5 * (1 + max|a_i|);
//  - otherwise a Taylor expansion of order 16 around the cluster mean, in the
//    Opitz matrix form exp(Z) with Z bidiagonal, combined with scaling and
//    squaring so wide node sets stay accurate.  All entries of exp(Z) are
//    divided differences of exp and hence positive, so the squaring steps
//    involve no cancellation.
DDResult divided_difference_exp(std::span<const double> nodes);

// Complete homogeneous symmetric polynomials h_0..h_kmax of the given values;
// h_k equals the divided difference of t^{m+k} on m+1 nodes and drives the
// closed-form moments of linear functions over simplices.
std::vector<double> complete_homogeneous(std::span<const double> values, int kmax);

}  // namespace mukstab

#endif
