#include "mukstab/equivint.hpp"

#include <cmath>

namespace mukstab {

void Params::validate(int dim) const {
  if (hbar == 0.0 || !std::isfinite(hbar))
    throw Error(ErrorKind::ValidationError, "hbar must be nonzero and finite");
  if (!std::isfinite(lambda)) throw Error(ErrorKind::ValidationError, "lambda must be finite");
  if (static_cast<int>(xi.size()) != dim)
    throw Error(ErrorKind::ValidationError, "xi dimension does not match the polytope");
  for (double x : xi) {
    if (!std::isfinite(x)) throw Error(ErrorKind::ValidationError, "xi entries must be finite");
  }
}

MomentSet assemble_moments(const Polytope& P, const Covector& xi_eff,
                           const std::vector<Covector>& first_moment_dirs,
                           const PLFunction* q) {
  MomentSet ms;
  ms.I0 = polytope_exp(P, xi_eff);
  ms.B0 = boundary_exp(P, xi_eff);
  for (const auto& zeta : first_moment_dirs) {
    AffineD ell{zeta, 0.0};
    ms.I1.push_back(polytope_exp_affine(P, xi_eff, ell));
  }
  if (q) {
    ms.has_q = true;
    ms.Iq = polytope_exp_pl(P, xi_eff, *q);
    ms.Bq = boundary_exp_pl(P, xi_eff, *q);
    AffineD xc{xi_eff, 0.0};
    ms.Iq1 = is_zero(xi_eff) ? 0.0 : polytope_exp_pl_weighted(P, xi_eff, *q, xc);
  }
  return ms;
}

double exp_intersection(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  return polytope_exp(P, params.xi_eff());
}

double power_intersection(const Polytope& P, const Params& params, int k) {
  params.validate(P.dim());
  if (k < 0 || k > 6)
    throw Error(ErrorKind::ValidationError, "moment order k must lie in 0..6");
  const int n = P.dim();
  auto m = polytope_linear_moments(P, params.xi_eff(), k);
  double fact = 1.0;
  for (int i = k + 1; i <= n + k; ++i) fact *= i;  // (n+k)!/k!
  return fact * m[k];
}

double L_exp_intersection(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  Covector c = params.xi_eff();
  double I0 = polytope_exp(P, c);
  if (is_zero(c)) return P.dim() * I0;
  AffineD ell{c, 0.0};
  return P.dim() * I0 - polytope_exp_affine(P, c, ell);
}

double kappa_exp_intersection(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  return -boundary_exp(P, params.xi_eff());
}

std::pair<double, double> rescale_check(const Polytope& P, const Params& params, double hbar_prime) {
  params.validate(P.dim());
  if (hbar_prime == 0.0) throw Error(ErrorKind::ValidationError, "hbar' must be nonzero");
  Params rescaled;
  rescaled.lambda = params.lambda;
  rescaled.hbar = hbar_prime;
  rescaled.xi.resize(params.xi.size());
  for (std::size_t i = 0; i < params.xi.size(); ++i) {
    rescaled.xi[i] = (params.hbar / hbar_prime) * params.xi[i];
  }
  return {exp_intersection(P, params), exp_intersection(P, rescaled)};
}

std::vector<double> exp_series_partial_sums(const Polytope& P, const Params& params, int kmax) {
  params.validate(P.dim());
  auto m = polytope_linear_moments(P, params.xi_eff(), kmax);
  std::vector<double> sums(kmax + 1, 0.0);
  double acc = 0.0, kfact = 1.0;
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) kfact *= k;
    acc += m[k] / kfact;
    sums[k] = acc;
  }
  return sums;
}

}  // namespace mukstab
