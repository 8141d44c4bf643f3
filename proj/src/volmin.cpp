#include "mukstab/volmin.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

namespace mukstab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Solves a small dense system in doubles; false when singular.
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> b, std::vector<double>& x) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
    }
    if (std::fabs(a[pivot][col]) < 1e-300) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  x.resize(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return true;
}

std::optional<RatVec> solve_rational(std::vector<RatVec> a, RatVec b) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (a[r][col] != 0) { pivot = r; break; }
    }
    if (pivot < 0) return std::nullopt;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      Rat f = a[r][col] / a[col][col];
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  RatVec x(n);
  for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Moment bundle at the effective covector c: every integral entering the
// gradient and Hessian of the mu-character, with divided differences shared
// per cell.
struct MomentBundle {
  double F = 0.0, H = 0.0, S = 0.0;
  std::vector<double> F1, H1, F2c;
  std::vector<std::vector<double>> F2, H2, F3c;
};

MomentBundle moment_bundle(const Polytope& P, const Covector& c) {
  const int n = P.dim();
  MomentBundle mb;
  mb.F1.assign(n, 0.0);
  mb.H1.assign(n, 0.0);
  mb.F2c.assign(n, 0.0);
  mb.F2.assign(n, std::vector<double>(n, 0.0));
  mb.H2.assign(n, std::vector<double>(n, 0.0));
  mb.F3c.assign(n, std::vector<double>(n, 0.0));

  auto values_of = [&](const FlatSimplex& cell) {
    // per-vertex values of <x, c> and of each coordinate
    std::vector<std::vector<double>> vals(n + 1);
    const int nv = static_cast<int>(cell.vertices.size());
    vals[0].resize(nv);
    for (int i = 0; i < nv; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += cell.vertices[i][j] * c[j];
      vals[0][i] = s;
    }
    for (int j = 0; j < n; ++j) {
      vals[j + 1].resize(nv);
      for (int i = 0; i < nv; ++i) vals[j + 1][i] = cell.vertices[i][j];
    }
    return vals;
  };

  for (const auto& cell : P.flat_cells()) {
    CellExpEvaluator ev(cell, c);
    auto vals = values_of(cell);
    mb.F += ev.plain();
    mb.S += ev.product_integral({&vals[0]});
    for (int j = 0; j < n; ++j) {
      mb.F1[j] += ev.product_integral({&vals[j + 1]});
      mb.F2c[j] += ev.product_integral({&vals[0], &vals[j + 1]});
      for (int k = j; k < n; ++k) {
        double v2 = ev.product_integral({&vals[j + 1], &vals[k + 1]});
        double v3 = ev.product_integral({&vals[0], &vals[j + 1], &vals[k + 1]});
        mb.F2[j][k] += v2;
        mb.F3c[j][k] += v3;
        if (k != j) {
          mb.F2[k][j] += v2;
          mb.F3c[k][j] += v3;
        }
      }
    }
  }
  for (const auto& cell : P.boundary_cells()) {
    CellExpEvaluator ev(cell, c);
    auto vals = values_of(cell);
    mb.H += ev.plain();
    for (int j = 0; j < n; ++j) {
      mb.H1[j] += ev.product_integral({&vals[j + 1]});
      for (int k = j; k < n; ++k) {
        double v2 = ev.product_integral({&vals[j + 1], &vals[k + 1]});
        mb.H2[j][k] += v2;
        if (k != j) mb.H2[k][j] += v2;
      }
    }
  }
  return mb;
}

std::vector<std::vector<double>> hessian_from_bundle(const MomentBundle& mb, double lambda, int n) {
  std::vector<std::vector<double>> hess(n, std::vector<double>(n, 0.0));
  const double F = mb.F;
  const double h = mb.H / F;
  const double s = mb.S / F;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double mu_i = mb.F1[i] / F, mu_j = mb.F1[j] / F;
      double beta_i = mb.H1[i] / F, beta_j = mb.H1[j] / F;
      double phi_ij = mb.F2[i][j] / F;
      double phi_ci = mb.F2c[i] / F, phi_cj = mb.F2c[j] / F;
      double t1 = kTwoPi * (-mb.H2[i][j] / F + beta_i * mu_j + beta_j * mu_i + h * phi_ij -
                            2.0 * h * mu_i * mu_j);
      double t2 = lambda * (phi_ij - mb.F3c[i][j] / F + phi_ci * mu_j + phi_cj * mu_i -
                            mu_i * mu_j - s * mu_i * mu_j + s * phi_ij);
      hess[i][j] = t1 + t2;
    }
  }
  // enforce exact symmetry against rounding in the assembly
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      double v = 0.5 * (hess[i][j] + hess[j][i]);
      hess[i][j] = hess[j][i] = v;
    }
  }
  return hess;
}

std::vector<double> grad_from_bundle(const MomentBundle& mb, double lambda, int n) {
  // component j = -d/dc_j of the mu-character = -futaki_vector(e_j)
  std::vector<double> g(n, 0.0);
  const double F = mb.F;
  for (int j = 0; j < n; ++j) {
    double dM = kTwoPi * (mb.H1[j] * F - mb.H * mb.F1[j]) / (F * F) +
                lambda * (mb.F2c[j] * F - mb.S * mb.F1[j]) / (F * F);
    g[j] = -dM;
  }
  return g;
}

struct NewtonOutcome {
  Covector c;
  int iters = 0;
  bool converged = false;
  double grad_norm = 0.0;
};

NewtonOutcome newton_solve(const Polytope& P, double lambda, Covector c, const NewtonOptions& opts) {
  const int n = P.dim();
  NewtonOutcome out;
  auto grad_at = [&](const Covector& x) {
    return grad_from_bundle(moment_bundle(P, x), lambda, n);
  };
  std::vector<double> g = grad_at(c);
  double gn = norm2(g);
  for (int iter = 0; iter < opts.max_iters; ++iter) {
    if (gn < opts.tol) {
      out.converged = true;
      break;
    }
    auto hess = hessian_from_bundle(moment_bundle(P, c), lambda, n);
    // root-finding step for g = -dM: solve Hess * delta = g
    std::vector<double> delta;
    bool have_newton = solve_dense(hess, g, delta);
    if (!have_newton) {
      // descent direction for |g|^2/2 with Jacobian -Hess: -J^T g = Hess g
      delta.assign(n, 0.0);
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) delta[i] += hess[i][j] * g[j];
      }
      double dn = norm2(delta);
      if (dn == 0.0) break;
      for (double& d : delta) d /= dn;
    }
    double t = 1.0;
    bool moved = false;
    while (t > 1e-12) {
      Covector trial(n);
      for (int i = 0; i < n; ++i) trial[i] = c[i] + t * delta[i];
      std::vector<double> gt;
      try {
        gt = grad_at(trial);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Overflow) { t *= 0.5; continue; }
        throw;
      }
      double gtn = norm2(gt);
      if (gtn * gtn <= (1.0 - 1e-4 * t) * gn * gn) {
        c = std::move(trial);
        g = std::move(gt);
        gn = gtn;
        moved = true;
        break;
      }
      t *= 0.5;
    }
    out.iters = iter + 1;
    if (!moved) break;
  }
  if (gn < opts.tol) out.converged = true;
  out.c = c;
  out.grad_norm = gn;
  return out;
}

CriticalPoint make_point(const Polytope& P, double lambda, double hbar, const NewtonOutcome& res) {
  CriticalPoint cp;
  cp.lambda = lambda;
  cp.xi.resize(res.c.size());
  for (std::size_t i = 0; i < res.c.size(); ++i) cp.xi[i] = res.c[i] / hbar;
  cp.gradient_norm = res.grad_norm;
  cp.newton_iters = res.iters;
  auto hess = hessian_from_bundle(moment_bundle(P, res.c), lambda, P.dim());
  cp.hessian_spectrum = symmetric_eigenvalues(hess);
  if (res.converged) {
    cp.status = CriticalStatus::converged;
  } else if (cp.hessian_spectrum.front() < 0.0 && cp.hessian_spectrum.back() > 0.0) {
    cp.status = CriticalStatus::indefinite_hessian;
  } else {
    cp.status = CriticalStatus::max_iters;
  }
  return cp;
}

}  // namespace

std::vector<double> grad_mu(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  const int n = P.dim();
  std::vector<double> g(n);
  for (int j = 0; j < n; ++j) {
    std::vector<double> e(n, 0.0);
    e[j] = 1.0;
    g[j] = -futaki_vector(P, params, e).value;
  }
  return g;
}

std::vector<std::vector<double>> hessian_mu(const Polytope& P, const Params& params) {
  params.validate(P.dim());
  return hessian_from_bundle(moment_bundle(P, params.xi_eff()), params.lambda, P.dim());
}

std::vector<CriticalPoint> find_critical_all(const Polytope& P, double lambda, double hbar,
                                             const std::vector<double>& xi0,
                                             const NewtonOptions& opts) {
  if (hbar == 0.0) throw Error(ErrorKind::ValidationError, "hbar must be nonzero");
  const int n = P.dim();
  if (xi0.size() != static_cast<std::size_t>(n))
    throw Error(ErrorKind::ValidationError, "xi0 dimension mismatch");

  std::vector<Covector> starts;
  Covector c0(n);
  for (int i = 0; i < n; ++i) c0[i] = hbar * xi0[i];
  starts.push_back(c0);
  if (lambda > 0.0) {
    double r = (opts.multistart_radius > 0.0) ? opts.multistart_radius : 5.0 / std::fabs(hbar);
    for (int j = 0; j < n; ++j) {
      for (double sgn : {+1.0, -1.0}) {
        Covector s(n, 0.0);
        s[j] = sgn * r * hbar;
        starts.push_back(s);
      }
    }
  }

  std::vector<CriticalPoint> found;
  for (const auto& start : starts) {
    NewtonOutcome res = newton_solve(P, lambda, start, opts);
    CriticalPoint cp = make_point(P, lambda, hbar, res);
    if (cp.status != CriticalStatus::converged && lambda > 0.0 && starts.size() > 1) continue;
    bool dup = false;
    for (const auto& prev : found) {
      double d = 0.0;
      for (int i = 0; i < n; ++i) d += (prev.xi[i] - cp.xi[i]) * (prev.xi[i] - cp.xi[i]);
      if (std::sqrt(d) < 1e-6) { dup = true; break; }
    }
    if (!dup) found.push_back(std::move(cp));
  }
  if (found.empty()) {
    found.push_back(make_point(P, lambda, hbar, newton_solve(P, lambda, c0, opts)));
  }
  return found;
}

CriticalPoint find_critical(const Polytope& P, double lambda, double hbar,
                            const std::vector<double>& xi0, const NewtonOptions& opts) {
  return find_critical_all(P, lambda, hbar, xi0, opts).front();
}

CriticalPoint tian_zhu(const Polytope& P, double hbar) {
  if (hbar == 0.0) throw Error(ErrorKind::ValidationError, "hbar must be nonzero");
  if (!P.is_reflexive())
    throw Error(ErrorKind::NotReflexive, "Tian-Zhu minimization requires a reflexive polytope");
  const int n = P.dim();
  // strictly convex minimization of I0(c); the weighted barycenter is the
  // gradient up to sign, the weighted second moment matrix is the Hessian
  Covector c(n, 0.0);
  int iters = 0;
  double bary_norm = 0.0;
  double I0 = 0.0;
  for (; iters < 100; ++iters) {
    MomentBundle mb = moment_bundle(P, c);
    I0 = mb.F;
    bary_norm = norm2(mb.F1);
    if (bary_norm < 1e-12 * I0) break;
    std::vector<double> rhs = mb.F1;  // -grad I0 = +F1
    std::vector<double> step;
    if (!solve_dense(mb.F2, rhs, step)) throw Error(ErrorKind::ComputeError, "degenerate second moments");
    double t = 1.0;
    while (t > 1e-12) {
      Covector trial(n);
      for (int i = 0; i < n; ++i) trial[i] = c[i] + t * step[i];
      double ft;
      try {
        ft = polytope_exp(P, trial);
      } catch (const Error& e) {
        if (e.kind() == ErrorKind::Overflow) { t *= 0.5; continue; }
        throw;
      }
      if (ft < I0) { c = std::move(trial); break; }
      t *= 0.5;
    }
    if (t <= 1e-12) break;
  }
  CriticalPoint cp;
  cp.lambda = kTwoPi;
  cp.xi.resize(n);
  for (int i = 0; i < n; ++i) cp.xi[i] = c[i] / hbar;
  cp.gradient_norm = bary_norm / I0;
  cp.newton_iters = iters;
  cp.hessian_spectrum = symmetric_eigenvalues(hessian_from_bundle(moment_bundle(P, c), kTwoPi, n));
  cp.status = (bary_norm < 1e-8 * I0) ? CriticalStatus::converged : CriticalStatus::max_iters;
  return cp;
}

std::vector<double> extremal_vector(const Polytope& P, double hbar) {
  if (hbar == 0.0) throw Error(ErrorKind::ValidationError, "hbar must be nonzero");
  const int n = P.dim();
  Rat vol = P.volume();
  Rat bvol = P.boundary_volume();
  // centered Gram matrix and the coordinate-affine Futaki vector, both exact
  std::vector<RatVec> G(n, RatVec(n));
  RatVec xbar(n), bx(n), rhs(n);
  for (int i = 0; i < n; ++i) {
    RatVec ei(n, Rat(0));
    ei[i] = 1;
    xbar[i] = moment_affine(P, ei, Rat(0));
    bx[i] = boundary_moment_affine(P, ei, Rat(0));
  }
  for (int i = 0; i < n; ++i) {
    RatVec ei(n, Rat(0));
    ei[i] = 1;
    for (int j = 0; j < n; ++j) {
      RatVec ej(n, Rat(0));
      ej[j] = 1;
      G[i][j] = moment_quadratic(P, ei, Rat(0), ej, Rat(0)) - xbar[i] * xbar[j] / vol;
    }
    // Fut-check at lambda=0, xi=0 of the i-th coordinate affine, divided by
    // 2pi:  (B[x_i] vol - bvol I[x_i]) / vol^2; the system reads
    // G e* = -vol * 2pi f  with  f = value/(2pi)
    rhs[i] = -(bx[i] * vol - bvol * xbar[i]) / vol;
  }
  auto sol = solve_rational(G, rhs);
  if (!sol) throw Error(ErrorKind::SingularGram, "centered Gram matrix is singular");
  std::vector<double> xi_ext(n);
  for (int i = 0; i < n; ++i) xi_ext[i] = kTwoPi * to_double((*sol)[i]) / hbar;
  return xi_ext;
}

LimitDiagnostics limit_check(const Polytope& P, double hbar,
                             const std::vector<double>& lambda_schedule, const PLFunction* probe_q) {
  if (lambda_schedule.empty())
    throw Error(ErrorKind::ValidationError, "empty lambda schedule");
  for (std::size_t i = 1; i < lambda_schedule.size(); ++i) {
    if (!(lambda_schedule[i] < lambda_schedule[i - 1]))
      throw Error(ErrorKind::ValidationError, "lambda schedule must be strictly decreasing");
  }
  const int n = P.dim();
  PLFunction probe;
  if (probe_q) {
    probe = *probe_q;
  } else {
    RatVec e1(n, Rat(0));
    e1[0] = 1;
    probe.pieces.push_back({RatVec(n, Rat(0)), Rat(0)});
    probe.pieces.push_back({e1, Rat(0)});
  }

  LimitDiagnostics diag;
  diag.xi_ext = extremal_vector(P, hbar);
  diag.relative_probe = relative_futaki(P, probe, hbar, diag.xi_ext);

  std::vector<double> warm(n, 0.0);
  for (double lambda : lambda_schedule) {
    CriticalPoint cp = find_critical(P, lambda, hbar, warm);
    warm = cp.xi;
    LimitSample sample;
    sample.lambda = lambda;
    sample.xi_lambda = cp.xi;
    sample.lambda_xi.resize(n);
    double dev = 0.0;
    for (int i = 0; i < n; ++i) {
      sample.lambda_xi[i] = lambda * cp.xi[i];
      dev += (sample.lambda_xi[i] - diag.xi_ext[i]) * (sample.lambda_xi[i] - diag.xi_ext[i]);
    }
    sample.deviation = std::sqrt(dev);
    Params params;
    params.lambda = lambda;
    params.hbar = hbar;
    params.xi = cp.xi;
    sample.futaki_probe = futaki_toric(P, probe, params).value;
    sample.relative_probe_gap = std::fabs(sample.futaki_probe - diag.relative_probe);
    diag.samples.push_back(std::move(sample));
  }
  return diag;
}

std::vector<double> symmetric_eigenvalues(std::vector<std::vector<double>> m) {
  const int n = static_cast<int>(m.size());
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) off += m[i][j] * m[i][j];
    }
    if (off < 1e-30) break;
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        if (std::fabs(m[p][q]) < 1e-300) continue;
        double theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
        double t = ((theta >= 0) ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        double cth = 1.0 / std::sqrt(t * t + 1.0);
        double sth = t * cth;
        for (int k = 0; k < n; ++k) {
          double mkp = m[k][p], mkq = m[k][q];
          m[k][p] = cth * mkp - sth * mkq;
          m[k][q] = sth * mkp + cth * mkq;
        }
        for (int k = 0; k < n; ++k) {
          double mpk = m[p][k], mqk = m[q][k];
          m[p][k] = cth * mpk - sth * mqk;
          m[q][k] = sth * mpk + cth * mqk;
        }
      }
    }
  }
  std::vector<double> eig(n);
  for (int i = 0; i < n; ++i) eig[i] = m[i][i];
  std::sort(eig.begin(), eig.end());
  return eig;
}

}  // namespace mukstab
