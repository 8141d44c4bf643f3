#ifndef MUKSTAB_EQUIVINT_HPP
#define MUKSTAB_EQUIVINT_HPP

#include <vector>

#include "mukstab/expint.hpp"

namespace mukstab {

// Parameter triple (lambda, hbar, xi).  Only the product hbar * xi enters any
// integral; the split is kept at the API for the (hbar, xi) bookkeeping.
struct Params {
  double lambda = 0.0;
  double hbar = -2.0;
  std::vector<double> xi;

  Covector xi_eff() const {
    Covector c(xi.size());
    for (std::size_t i = 0; i < xi.size(); ++i) c[i] = hbar * xi[i];
    return c;
  }
  void validate(int dim) const;
};

// Bundle of Duistermaat-Heckman integrals from which every invariant is
// assembled.  I1 entries follow the order of the requested covectors.
struct MomentSet {
  double I0 = 0.0;                // int_P exp(-<x, xi_eff>) dmu
  double B0 = 0.0;                // int_dP exp(-<x, xi_eff>) dsigma
  std::vector<double> I1;         // int_P <x, zeta_k> exp dmu
  double Iq = 0.0;                // int_P q exp dmu
  double Bq = 0.0;                // int_dP q exp dsigma
  double Iq1 = 0.0;               // int_P <x, xi_eff> q exp dmu
  bool has_q = false;
};

MomentSet assemble_moments(const Polytope& P, const Covector& xi_eff,
                           const std::vector<Covector>& first_moment_dirs = {},
                           const PLFunction* q = nullptr);

// (e^{L_T}; xi) = int_P exp(-<x, hbar xi>) dmu; strictly positive.
double exp_intersection(const Polytope& P, const Params& params);

// (L^{.n+k}; xi) = ((n+k)!/k!) int_P (-<x, hbar xi>)^k dmu, k <= 6.
double power_intersection(const Polytope& P, const Params& params, int k);

// (L_T . e^{L_T}; xi) = int_P (n - <x, hbar xi>) exp(-<x, hbar xi>) dmu.
double L_exp_intersection(const Polytope& P, const Params& params);

// (kappa_X^T . e^{L_T}; xi) = -int_dP exp(-<x, hbar xi>) dsigma.
double kappa_exp_intersection(const Polytope& P, const Params& params);

// Exposes the hbar-rescaling identity as a test hook: returns the value at
// (hbar, xi) and at (hbar', (hbar/hbar') xi); equal by construction.
std::pair<double, double> rescale_check(const Polytope& P, const Params& params, double hbar_prime);

// Partial sums S_K = sum_{k<=K} (1/k!) int_P (-<x, hbar xi>)^k dmu of the
// exponential power series; converges to exp_intersection.
std::vector<double> exp_series_partial_sums(const Polytope& P, const Params& params, int kmax);

}  // namespace mukstab

#endif
