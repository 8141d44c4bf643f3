#ifndef MUKSTAB_FUTAKI_HPP
#define MUKSTAB_FUTAKI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mukstab/equivint.hpp"

namespace mukstab {

// Evaluated invariant with its full moment breakdown.  The defining
// recombination value = kappa_term + lambda * lambda_sigma_term holds exactly.
struct FutakiReport {
  double value = 0.0;

  double kappa_term = 0.0;         // 2pi (Bq I0 - B0 Iq) / I0^2
  double lambda_sigma_term = 0.0;  // (Iq1 I0 - I1[xi_eff] Iq) / I0^2
  double mean_s = 0.0;
  double I0 = 0.0, B0 = 0.0, Iq = 0.0, Bq = 0.0, Iq1 = 0.0, I1_xi = 0.0;

  Params params;
  // configuration descriptor: either a vector zeta or a PL function q
  std::optional<std::vector<double>> zeta;
  std::optional<PLFunction> q;

  // hbar * value: the paper-normalized derivative pairing hbar Fut_{hbar.xi}.
  double hbar_normalized() const { return params.hbar * value; }
  // value in the hbar = -2 convention (Fut = 2 Fut-check at hbar = -2).
  double fut_ino2() const { return 2.0 * value; }
};

// mean of the mu-scalar curvature: 2pi B0/I0 + lambda I1[xi_eff]/I0.
double mean_s(const Polytope& P, const Params& params);

// mu-character 2pi (kappa.e^L)/(e^L) + lambda ((L.e^L)/(e^L) - log (e^L)),
// a function of the effective covector hbar*xi.
double mu_character(const Polytope& P, const Params& params);

// Futaki invariant of the product (affine) configuration attached to zeta,
// assembled analytically from first-moment integrals; coincides with
// futaki_toric on q(x) = <zeta, x>.
FutakiReport futaki_vector(const Polytope& P, const Params& params, const std::vector<double>& zeta);

// Futaki invariant of the toric test configuration attached to the convex PL
// function q: 2pi Bq/I0 + lambda Iq1/I0 - mean_s * Iq/I0.
FutakiReport futaki_toric(const Polytope& P, const PLFunction& q, const Params& params);

// Donaldson-Futaki normalization: (L^n)/(2pi) * Fut-check at lambda=0, xi=0.
double donaldson_futaki(const Polytope& P, const PLFunction& q);

// Modified Futaki of a reflexive (Fano) polytope: I0/(2pi) * Fut-check at
// lambda = 2pi.  Throws NotReflexive otherwise.
double modified_futaki(const Polytope& P, const PLFunction& q, const Params& params);

// Relative Donaldson-Futaki invariant with the centered t-weighting
// (2pi/(L^n)) DF(q) + (n!/(L^n)) int_P q (<x, hbar xi_ref> - mean) dmu,
// invariant under q -> q + const.
double relative_futaki(const Polytope& P, const PLFunction& q, double hbar,
                       const std::vector<double>& xi_ref);

// --- semistability scan -------------------------------------------------------

struct SamplerSpec {
  int count = 100;
  int max_pieces = 3;
  double coeff_bound = 2.0;
  std::uint64_t seed = 0;
};

struct ScanEntry {
  int sample_index = -1;
  PLFunction q;
  double futaki = 0.0;
};

struct ScanReport {
  std::vector<ScanEntry> entries;  // ascending by (futaki, sample_index)
  double min_value = 0.0;
  int argmin_index = -1;
};

// Samples random convex PL functions (deterministic in the seed) and returns
// their Futaki invariants sorted ascending.
ScanReport semistability_scan(const Polytope& P, const Params& params, const SamplerSpec& spec);

}  // namespace mukstab

#endif
