#ifndef MUKSTAB_VOLMIN_HPP
#define MUKSTAB_VOLMIN_HPP

#include <vector>

#include "mukstab/futaki.hpp"

namespace mukstab {

enum class CriticalStatus { converged, max_iters, indefinite_hessian };

struct CriticalPoint {
  std::vector<double> xi;
  double lambda = 0.0;
  double gradient_norm = 0.0;
  std::vector<double> hessian_spectrum;  // ascending
  int newton_iters = 0;
  CriticalStatus status = CriticalStatus::max_iters;
};

struct LimitSample {
  double lambda = 0.0;
  std::vector<double> xi_lambda;
  std::vector<double> lambda_xi;     // lambda * xi_lambda
  double deviation = 0.0;            // |lambda xi_lambda - xi_ext|
  double futaki_probe = 0.0;         // Fut^lambda at xi_lambda on the probe q
  double relative_probe_gap = 0.0;   // |Fut^lambda(q) - Fut-dagger(q)|
};

struct LimitDiagnostics {
  std::vector<LimitSample> samples;  // lambda strictly decreasing
  std::vector<double> xi_ext;
  double relative_probe = 0.0;       // Fut-dagger at xi_ext on the probe q
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iters = 200;
  double multistart_radius = 0.0;  // 0 means the default 5/|hbar|
};

// Gradient of the mu-character in the effective variable, assembled from
// first-moment integrals: component j = -futaki_vector(P, params, e_j).
std::vector<double> grad_mu(const Polytope& P, const Params& params);

// Hessian of the mu-character in the effective variable (symmetric), from
// centered second moments of the interior and boundary measures.
std::vector<std::vector<double>> hessian_mu(const Polytope& P, const Params& params);

// Damped Newton with Armijo backtracking on |grad|^2 from xi0; falls back to
// descent steps when the Hessian is indefinite.  For lambda > 0 a symmetric
// multistart grid is explored; all distinct critical points are returned in
// start order by find_critical_all, the origin-start point first.
CriticalPoint find_critical(const Polytope& P, double lambda, double hbar,
                            const std::vector<double>& xi0, const NewtonOptions& opts = {});
std::vector<CriticalPoint> find_critical_all(const Polytope& P, double lambda, double hbar,
                                             const std::vector<double>& xi0,
                                             const NewtonOptions& opts = {});

// Tian-Zhu soliton vector on a reflexive polytope: strictly convex
// minimization of I0 over the effective variable; the returned point has
// weighted barycenter below 1e-8 * I0.
CriticalPoint tian_zhu(const Polytope& P, double hbar);

// Extremal vector: solves the Gram system G (hbar xi_ext) = -vol * d with
// d_j the Futaki invariant of the j-th coordinate affine at lambda=0, xi=0.
std::vector<double> extremal_vector(const Polytope& P, double hbar);

// Runs the critical path along a strictly decreasing lambda schedule and
// records lambda*xi_lambda against xi_ext, plus the probe-q Futaki gap.
LimitDiagnostics limit_check(const Polytope& P, double hbar, const std::vector<double>& lambda_schedule,
                             const PLFunction* probe_q = nullptr);

// Sorted eigenvalues of a small symmetric matrix (Jacobi iteration).
std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> m);

}  // namespace mukstab

#endif
