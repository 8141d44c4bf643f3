#ifndef MUKSTAB_EXPINT_HPP
#define MUKSTAB_EXPINT_HPP

#include <vector>

#include "mukstab/divdiff.hpp"
#include "mukstab/polytope.hpp"

namespace mukstab {

// Effective covector xi_eff entering every integrand as exp(-<x, xi_eff>).
using Covector = std::vector<double>;

struct AffineD {
  std::vector<double> gradient;
  double constant = 0.0;
  double eval(const std::vector<double>& x) const {
    double v = constant;
    for (std::size_t i = 0; i < x.size(); ++i) v += gradient[i] * x[i];
    return v;
  }
};

struct ExpIntegralResult {
  double value = 0.0;
  DDMethod method = DDMethod::divided_difference;
  double condition_estimate = 1.0;
};

bool is_zero(const Covector& c);

// --- simplex integrals -----------------------------------------------------

// int_S exp(-<x, xi_eff>) dx via the divided difference of exp on the nodes
// a_i = -<v_i, xi_eff>; exact volume limit at xi_eff = 0.
double simplex_exp(const Simplex& S, const Covector& xi_eff);
ExpIntegralResult simplex_exp_result(const Simplex& S, const Covector& xi_eff);

// int_S ell(x) exp(-<x, xi_eff>) dx via confluent divided differences with
// one doubled node per vertex.
double simplex_exp_affine(const Simplex& S, const Covector& xi_eff, const AffineD& ell);

// --- polytope integrals ----------------------------------------------------

double polytope_exp(const Polytope& P, const Covector& xi_eff);
double polytope_exp_affine(const Polytope& P, const Covector& xi_eff, const AffineD& ell);
double polytope_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q);

// int_P ell1 ell2 exp / int_P ell1 ell2 ell3 exp, assembled from confluent
// divided differences with two / three extra nodes.
double polytope_exp_quadratic(const Polytope& P, const Covector& xi_eff,
                              const AffineD& l1, const AffineD& l2);
double polytope_exp_cubic(const Polytope& P, const Covector& xi_eff,
                          const AffineD& l1, const AffineD& l2, const AffineD& l3);

// int_P <x, z> q(x) exp(-<x, xi_eff>) dmu over the PL refinement.
double polytope_exp_pl_weighted(const Polytope& P, const Covector& xi_eff,
                                const PLFunction& q, const AffineD& weight);

// --- lattice-normalized boundary integrals ---------------------------------

double boundary_exp(const Polytope& P, const Covector& xi_eff);
double boundary_exp_affine(const Polytope& P, const Covector& xi_eff, const AffineD& ell);
double boundary_exp_quadratic(const Polytope& P, const Covector& xi_eff,
                              const AffineD& l1, const AffineD& l2);
double boundary_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q);

// --- Brion vertex formula (independent oracle) ------------------------------

// sum_v exp(-<v, xi_eff>) / prod_i <e_{v,i}, xi_eff> over the primitive inward
// edge generators; requires a Delzant polytope.  Directions with poles are
// escaped by a deterministic irrational perturbation with Richardson
// extrapolation over epsilon and epsilon/2.
double brion_exp(const Polytope& P, const Covector& xi_eff);

// --- moments ----------------------------------------------------------------

// m_k = int_P (-<x, xi_eff>)^k dmu for k = 0..kmax (no exponential weight).
std::vector<double> polytope_linear_moments(const Polytope& P, const Covector& xi_eff, int kmax);

// Exact rational moments of the unweighted measures (used at xi_eff = 0).
Rat moment_volume(const Polytope& P);
Rat moment_affine(const Polytope& P, const RatVec& gradient, const Rat& constant);
Rat moment_quadratic(const Polytope& P, const RatVec& g1, const Rat& c1,
                     const RatVec& g2, const Rat& c2);
Rat boundary_moment_affine(const Polytope& P, const RatVec& gradient, const Rat& constant);
Rat moment_pl(const Polytope& P, const PLFunction& q);
Rat boundary_moment_pl(const Polytope& P, const PLFunction& q);

// Batched evaluator for one cell: integrals of products of up to three affine
// factors against exp(-<x, xi_eff>), sharing the divided-difference values
// across products so moment bundles (gradients, Hessians) stay cheap.
class CellExpEvaluator {
 public:
  CellExpEvaluator(const FlatSimplex& cell, const Covector& xi_eff);
  // factors are per-vertex value arrays; size() <= 3
  double product_integral(const std::vector<const std::vector<double>*>& factors) const;
  double plain() const;  // no factors

 private:
  double dd_for(std::vector<int> extra) const;
  std::vector<double> base_nodes_;
  double prefactor_ = 0.0;
  mutable std::vector<double> cache_;  // flat multiset cache
  mutable std::vector<bool> cached_;
  int nv_ = 0;
};

// --- serial reference -------------------------------------------------------
//
// Straight-line serial versions of the parallel summation kernels, kept for
// the equivalence tests and the benchmark.  Results must be bit-identical to
// the parallel path because the reduction order is fixed there.
namespace serial_ref {
double polytope_exp(const Polytope& P, const Covector& xi_eff);
double boundary_exp(const Polytope& P, const Covector& xi_eff);
double polytope_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q);
}  // namespace serial_ref

}  // namespace mukstab

#endif
