#include "mukstab/futaki.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <random>

namespace mukstab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

double mean_s(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  Covector c = params.xi_eff();
  double I0 = polytope_exp(P, c);
  double B0 = boundary_exp(P, c);
  double s = kTwoPi * B0 / I0;
  if (params.lambda != 0.0 && !is_zero(c)) {
    AffineD xc{c, 0.0};
    s += params.lambda * polytope_exp_affine(P, c, xc) / I0;
  }
  return s;
}

double mu_character(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  Covector c = params.xi_eff();
  const int n = P.dim();
  double I0 = polytope_exp(P, c);
  double B0 = boundary_exp(P, c);
  double value = -kTwoPi * B0 / I0;  // 2pi (kappa.e^L)/(e^L)
  if (params.lambda != 0.0) {
    double I1 = 0.0;
    if (!is_zero(c)) {
      AffineD xc{c, 0.0};
      I1 = polytope_exp_affine(P, c, xc);
    }
    value += params.lambda * ((n * I0 - I1) / I0 - std::log(I0));
  }
  return value;
}

FutakiReport futaki_vector(const Polytope& P, const Params& params, const std::vector<double>& zeta) {
  params.validate(P.dim());
  if (zeta.size() != static_cast<std::size_t>(P.dim()))
    throw Error(ErrorKind::ValidationError, "zeta dimension mismatch");
  Covector c = params.xi_eff();
  AffineD lz{zeta, 0.0};

  FutakiReport rep;
  rep.params = params;
  rep.zeta = zeta;
  rep.I0 = polytope_exp(P, c);
  rep.B0 = boundary_exp(P, c);
  rep.Iq = polytope_exp_affine(P, c, lz);       // first moments play the role of q-moments
  rep.Bq = boundary_exp_affine(P, c, lz);
  if (!is_zero(c)) {
    AffineD xc{c, 0.0};
    rep.I1_xi = polytope_exp_affine(P, c, xc);
    rep.Iq1 = polytope_exp_quadratic(P, c, xc, lz);
  }
  rep.mean_s = kTwoPi * rep.B0 / rep.I0 + params.lambda * rep.I1_xi / rep.I0;
  rep.kappa_term = kTwoPi * (rep.Bq * rep.I0 - rep.B0 * rep.Iq) / (rep.I0 * rep.I0);
  rep.lambda_sigma_term = (rep.Iq1 * rep.I0 - rep.I1_xi * rep.Iq) / (rep.I0 * rep.I0);
  rep.value = rep.kappa_term + params.lambda * rep.lambda_sigma_term;
  return rep;
}

FutakiReport futaki_toric(const Polytope& P, const PLFunction& q, const Params& params) {
  params.validate(P.dim());
  if (q.pieces.empty()) throw Error(ErrorKind::ValidationError, "empty PL function");
  Covector c = params.xi_eff();

  FutakiReport rep;
  rep.params = params;
  rep.q = q;
  MomentSet ms = assemble_moments(P, c, is_zero(c) ? std::vector<Covector>{} : std::vector<Covector>{c}, &q);
  rep.I0 = ms.I0;
  rep.B0 = ms.B0;
  rep.Iq = ms.Iq;
  rep.Bq = ms.Bq;
  rep.Iq1 = ms.Iq1;
  rep.I1_xi = ms.I1.empty() ? 0.0 : ms.I1[0];
  rep.mean_s = kTwoPi * rep.B0 / rep.I0 + params.lambda * rep.I1_xi / rep.I0;
  rep.kappa_term = kTwoPi * (rep.Bq * rep.I0 - rep.B0 * rep.Iq) / (rep.I0 * rep.I0);
  rep.lambda_sigma_term = (rep.Iq1 * rep.I0 - rep.I1_xi * rep.Iq) / (rep.I0 * rep.I0);
  rep.value = rep.kappa_term + params.lambda * rep.lambda_sigma_term;
  return rep;
}

double donaldson_futaki(const Polytope& P, const PLFunction& q) {
  Params p0;
  p0.lambda = 0.0;
  p0.hbar = -2.0;
  p0.xi.assign(P.dim(), 0.0);
  double Ln = factorial(P.dim()) * to_double(P.volume());
  return Ln / kTwoPi * futaki_toric(P, q, p0).value;
}

double modified_futaki(const Polytope& P, const PLFunction& q, const Params& params) {
  params.validate(P.dim());
  if (!P.is_reflexive())
    throw Error(ErrorKind::NotReflexive, "modified Futaki requires a reflexive polytope");
  Params p = params;
  p.lambda = kTwoPi;
  FutakiReport rep = futaki_toric(P, q, p);
  return rep.I0 / kTwoPi * rep.value;
}

double relative_futaki(const Polytope& P, const PLFunction& q, double hbar,
                       const std::vector<double>& xi_ref) {
  if (hbar == 0.0) throw Error(ErrorKind::ValidationError, "hbar must be nonzero");
  if (xi_ref.size() != static_cast<std::size_t>(P.dim()))
    throw Error(ErrorKind::ValidationError, "xi_ref dimension mismatch");
  const int n = P.dim();
  double vol = to_double(P.volume());
  double Ln = factorial(n) * vol;
  double df = donaldson_futaki(P, q);

  // centered t-weighting at the unweighted measure: the constant ambiguity of
  // q is annihilated because int_P (<x, hbar xi_ref> - mean) dmu = 0
  std::vector<double> c(n);
  for (int j = 0; j < n; ++j) c[j] = hbar * xi_ref[j];
  Covector zero(n, 0.0);
  AffineD wc{c, 0.0};
  double mean = polytope_exp_affine(P, zero, wc) / vol;
  AffineD centered{c, -mean};
  double weighted = polytope_exp_pl_weighted(P, zero, q, centered);

  return kTwoPi / Ln * df + factorial(n) / Ln * weighted;
}

ScanReport semistability_scan(const Polytope& P, const Params& params, const SamplerSpec& spec) {
  params.validate(P.dim());
  if (spec.count <= 0 || spec.max_pieces <= 0 || spec.coeff_bound <= 0.0)
    throw Error(ErrorKind::ValidationError, "sampler spec fields must be positive");
  const int n = P.dim();

  // integer draws over a fixed denominator grid keep the sampled PL data
  // rational and the stream reproducible across platforms
  const int denom = 16;
  const std::int64_t span = 2 * static_cast<std::int64_t>(spec.coeff_bound * denom) + 1;
  std::mt19937_64 rng(spec.seed);
  auto draw = [&]() -> Rat {
    std::int64_t v = static_cast<std::int64_t>(rng() % span) - (span - 1) / 2;
    return Rat(v, denom);
  };

  std::vector<PLFunction> samples;
  samples.reserve(spec.count);
  for (int s = 0; s < spec.count; ++s) {
    int pieces = 1 + static_cast<int>(rng() % static_cast<std::uint64_t>(spec.max_pieces));
    PLFunction q;
    for (int p = 0; p < pieces; ++p) {
      PLFunction::Piece piece;
      piece.gradient.resize(n);
      for (int j = 0; j < n; ++j) piece.gradient[j] = draw();
      piece.constant = draw();
      q.pieces.push_back(std::move(piece));
    }
    // normalize the constant shift: min over P becomes 0 (Fut is unchanged)
    Rat minv = q.eval(P.vertices()[0]);
    for (const auto& cell : refine_for_pl(P, q)) {
      for (const auto& v : cell.simplex.vertices) {
        Rat val = q.eval(v);
        if (val < minv) minv = val;
      }
    }
    q = q.shifted(-minv);
    samples.push_back(std::move(q));
  }

  std::vector<double> values(samples.size(), 0.0);
  std::exception_ptr err = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (long long i = 0; i < static_cast<long long>(samples.size()); ++i) {
    try {
      values[static_cast<std::size_t>(i)] = futaki_toric(P, samples[i], params).value;
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  ScanReport report;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    report.entries.push_back({static_cast<int>(i), samples[i], values[i]});
  }
  std::sort(report.entries.begin(), report.entries.end(), [](const ScanEntry& a, const ScanEntry& b) {
    if (a.futaki != b.futaki) return a.futaki < b.futaki;
    return a.sample_index < b.sample_index;
  });
  report.min_value = report.entries.front().futaki;
  report.argmin_index = report.entries.front().sample_index;
  return report;
}

}  // namespace mukstab
