#include "mukstab/expint.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <exception>
#include <map>
#include <numbers>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace mukstab {

namespace {

constexpr double kNodeOverflow = 700.0;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

std::vector<double> cell_nodes(const FlatSimplex& cell, const Covector& c) {
  std::vector<double> nodes(cell.vertices.size());
  for (std::size_t i = 0; i < cell.vertices.size(); ++i) {
    double a = 0.0;
    for (std::size_t j = 0; j < c.size(); ++j) a -= cell.vertices[i][j] * c[j];
    if (std::fabs(a) > kNodeOverflow)
      throw Error(ErrorKind::Overflow, "exponent node exceeds double range");
    nodes[i] = a;
  }
  return nodes;
}

// m! * measure * dd(exp; nodes) for an m-dimensional cell.
double cell_exp(const FlatSimplex& cell, const Covector& c, DDResult* detail = nullptr) {
  auto nodes = cell_nodes(cell, c);
  DDResult dd = divided_difference_exp(nodes);
  if (detail) *detail = dd;
  const int m = static_cast<int>(cell.vertices.size()) - 1;
  return factorial(m) * cell.measure * dd.value;
}

// Integral over the cell of (prod_t L_t) * exp(-<x,c>), the affine factors
// given by their vertex values.  Confluent divided differences with one extra
// node per factor; dd values are cached per sorted index multiset.
double cell_poly_exp(const FlatSimplex& cell, const Covector& c,
                     const std::vector<std::vector<double>>& factor_values) {
  auto base = cell_nodes(cell, c);
  const int nv = static_cast<int>(base.size());
  const int m = nv - 1;
  const double pref = factorial(m) * cell.measure;

  std::map<std::vector<int>, double> dd_cache;
  auto dd_for = [&](std::vector<int> extra) -> double {
    std::sort(extra.begin(), extra.end());
    auto it = dd_cache.find(extra);
    if (it != dd_cache.end()) return it->second;
    std::vector<double> nodes = base;
    for (int i : extra) nodes.push_back(base[i]);
    double v = divided_difference_exp(nodes).value;
    dd_cache.emplace(std::move(extra), v);
    return v;
  };
  auto multiplicity_factor = [](const std::vector<int>& idx) {
    // product of factorials of the index multiplicities
    double f = 1.0;
    std::vector<int> sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    int run = 1;
    for (std::size_t i = 1; i <= sorted.size(); ++i) {
      if (i < sorted.size() && sorted[i] == sorted[i - 1]) {
        ++run;
        f *= run;
      } else {
        run = 1;
      }
    }
    return f;
  };

  const int r = static_cast<int>(factor_values.size());
  double total = 0.0;
  if (r == 0) return pref * dd_for({});
  std::vector<int> idx(r, 0);
  while (true) {
    double coeff = 1.0;
    for (int t = 0; t < r; ++t) coeff *= factor_values[t][idx[t]];
    if (coeff != 0.0) {
      total += coeff * multiplicity_factor(idx) * dd_for(idx);
    }
    int t = r - 1;
    while (t >= 0 && idx[t] == nv - 1) { idx[t] = 0; --t; }
    if (t < 0) break;
    ++idx[t];
  }
  return pref * total;
}

std::vector<double> vertex_values(const FlatSimplex& cell, const AffineD& ell) {
  std::vector<double> vals(cell.vertices.size());
  for (std::size_t i = 0; i < cell.vertices.size(); ++i) vals[i] = ell.eval(cell.vertices[i]);
  return vals;
}

// Parallel map over [0, count) with a fixed serial reduction order, so the
// result is bit-identical to the serial reference regardless of scheduling.
template <class Kernel>
double indexed_sum(std::size_t count, Kernel&& kernel) {
  std::vector<double> vals(count, 0.0);
  std::exception_ptr err = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (count >= 16)
#endif
  for (long long i = 0; i < static_cast<long long>(count); ++i) {
    try {
      vals[static_cast<std::size_t>(i)] = kernel(static_cast<std::size_t>(i));
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  double s = 0.0;
  for (double v : vals) s += v;
  return s;
}

FlatSimplex flatten(const Simplex& S) {
  FlatSimplex cell;
  for (const auto& v : S.vertices) cell.vertices.push_back(to_double(v));
  cell.measure = to_double(S.volume);
  return cell;
}

AffineD pl_piece_to_affine(const PLFunction::Piece& p) {
  AffineD a;
  a.gradient = to_double(p.gradient);
  a.constant = to_double(p.constant);
  return a;
}

RatVec centroid(const std::vector<RatVec>& verts) {
  RatVec c(verts[0].size(), Rat(0));
  for (const auto& v : verts) {
    for (std::size_t j = 0; j < c.size(); ++j) c[j] += v[j];
  }
  for (Rat& x : c) x /= static_cast<int>(verts.size());
  return c;
}

// Boundary refinement of one facet chart by the pulled-back PL function.
// Emits (ambient flat cell, active piece) pairs with d(sigma) measures.
std::vector<std::pair<FlatSimplex, AffineD>> boundary_pl_cells(const FacetChart& chart,
                                                               const PLFunction& q) {
  std::vector<std::pair<FlatSimplex, AffineD>> out;
  PLFunction pulled;
  for (const auto& p : q.pieces) {
    PLFunction::Piece py;
    py.constant = p.constant + dot(p.gradient, chart.origin);
    py.gradient.resize(chart.basis.size());
    for (std::size_t k = 0; k < chart.basis.size(); ++k) py.gradient[k] = dot(p.gradient, chart.basis[k]);
    pulled.pieces.push_back(std::move(py));
  }
  for (const auto& cell : refine_for_pl(*chart.polytope, pulled)) {
    FlatSimplex flat;
    for (const auto& y : cell.simplex.vertices) {
      flat.vertices.push_back(to_double(chart.to_ambient(y)));
    }
    flat.measure = to_double(cell.simplex.volume) * chart.chart_density;
    AffineD piece;
    piece.gradient = to_double(cell.piece.gradient);
    piece.constant = to_double(cell.piece.constant);
    // value at ambient x equals the chart piece at y; rebuild an ambient
    // evaluation from the chart one via the vertex values directly
    out.push_back({std::move(flat), std::move(piece)});
  }
  return out;
}

}  // namespace

bool is_zero(const Covector& c) {
  for (double x : c) {
    if (x != 0.0) return false;
  }
  return true;
}

// --- simplex ----------------------------------------------------------------

double simplex_exp(const Simplex& S, const Covector& xi_eff) {
  if (is_zero(xi_eff)) return to_double(S.volume);
  return cell_exp(flatten(S), xi_eff);
}

ExpIntegralResult simplex_exp_result(const Simplex& S, const Covector& xi_eff) {
  ExpIntegralResult res;
  if (is_zero(xi_eff)) {
    res.value = to_double(S.volume);
    return res;
  }
  DDResult dd;
  res.value = cell_exp(flatten(S), xi_eff, &dd);
  res.method = dd.method;
  res.condition_estimate = dd.condition_estimate;
  return res;
}

double simplex_exp_affine(const Simplex& S, const Covector& xi_eff, const AffineD& ell) {
  FlatSimplex cell = flatten(S);
  if (is_zero(xi_eff)) {
    auto c = centroid(S.vertices);
    return to_double(S.volume) * ell.eval(to_double(c));
  }
  return cell_poly_exp(cell, xi_eff, {vertex_values(cell, ell)});
}

// --- polytope ---------------------------------------------------------------

double polytope_exp(const Polytope& P, const Covector& xi_eff) {
  if (is_zero(xi_eff)) return to_double(P.volume());
  const auto& cells = P.flat_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) { return cell_exp(cells[i], xi_eff); });
}

double polytope_exp_affine(const Polytope& P, const Covector& xi_eff, const AffineD& ell) {
  const auto& cells = P.flat_cells();
  if (is_zero(xi_eff)) {
    return indexed_sum(cells.size(), [&](std::size_t i) {
      const auto& s = P.triangulation()[i];
      return to_double(s.volume) * ell.eval(to_double(centroid(s.vertices)));
    });
  }
  return indexed_sum(cells.size(), [&](std::size_t i) {
    return cell_poly_exp(cells[i], xi_eff, {vertex_values(cells[i], ell)});
  });
}

double polytope_exp_quadratic(const Polytope& P, const Covector& xi_eff,
                              const AffineD& l1, const AffineD& l2) {
  const auto& cells = P.flat_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) {
    return cell_poly_exp(cells[i], xi_eff,
                         {vertex_values(cells[i], l1), vertex_values(cells[i], l2)});
  });
}

double polytope_exp_cubic(const Polytope& P, const Covector& xi_eff,
                          const AffineD& l1, const AffineD& l2, const AffineD& l3) {
  const auto& cells = P.flat_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) {
    return cell_poly_exp(cells[i], xi_eff,
                         {vertex_values(cells[i], l1), vertex_values(cells[i], l2),
                          vertex_values(cells[i], l3)});
  });
}

double polytope_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q) {
  auto cells = refine_for_pl(P, q);
  if (is_zero(xi_eff)) {
    Rat total = 0;
    for (const auto& cell : cells) {
      RatVec c = centroid(cell.simplex.vertices);
      total += cell.simplex.volume * (dot(cell.piece.gradient, c) + cell.piece.constant);
    }
    return to_double(total);
  }
  return indexed_sum(cells.size(), [&](std::size_t i) {
    FlatSimplex flat = flatten(cells[i].simplex);
    return cell_poly_exp(flat, xi_eff, {vertex_values(flat, pl_piece_to_affine(cells[i].piece))});
  });
}

double polytope_exp_pl_weighted(const Polytope& P, const Covector& xi_eff,
                                const PLFunction& q, const AffineD& weight) {
  auto cells = refine_for_pl(P, q);
  return indexed_sum(cells.size(), [&](std::size_t i) {
    FlatSimplex flat = flatten(cells[i].simplex);
    return cell_poly_exp(flat, xi_eff,
                         {vertex_values(flat, pl_piece_to_affine(cells[i].piece)),
                          vertex_values(flat, weight)});
  });
}

// --- boundary ---------------------------------------------------------------

double boundary_exp(const Polytope& P, const Covector& xi_eff) {
  if (is_zero(xi_eff)) return to_double(P.boundary_volume());
  const auto& cells = P.boundary_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) { return cell_exp(cells[i], xi_eff); });
}

double boundary_exp_affine(const Polytope& P, const Covector& xi_eff, const AffineD& ell) {
  const auto& cells = P.boundary_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) {
    return cell_poly_exp(cells[i], xi_eff, {vertex_values(cells[i], ell)});
  });
}

double boundary_exp_quadratic(const Polytope& P, const Covector& xi_eff,
                              const AffineD& l1, const AffineD& l2) {
  const auto& cells = P.boundary_cells();
  return indexed_sum(cells.size(), [&](std::size_t i) {
    return cell_poly_exp(cells[i], xi_eff,
                         {vertex_values(cells[i], l1), vertex_values(cells[i], l2)});
  });
}

double boundary_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q) {
  if (is_zero(xi_eff)) return to_double(boundary_moment_pl(P, q));
  if (P.dim() == 1) {
    const auto& cells = P.boundary_cells();
    return indexed_sum(cells.size(), [&](std::size_t i) {
      double qv = q.eval(cells[i].vertices[0]);
      double node = 0.0;
      for (std::size_t j = 0; j < xi_eff.size(); ++j) node -= cells[i].vertices[0][j] * xi_eff[j];
      if (std::fabs(node) > kNodeOverflow)
        throw Error(ErrorKind::Overflow, "exponent node exceeds double range");
      return qv * std::exp(node);
    });
  }
  std::vector<std::pair<FlatSimplex, AffineD>> cells;
  for (const auto& chart : P.facet_charts()) {
    auto part = boundary_pl_cells(chart, q);
    cells.insert(cells.end(), part.begin(), part.end());
  }
  return indexed_sum(cells.size(), [&](std::size_t i) {
    // the chart piece values at the chart vertices equal q at the ambient
    // vertices, so evaluate q directly on the ambient cell
    std::vector<double> vals(cells[i].first.vertices.size());
    for (std::size_t k = 0; k < vals.size(); ++k) vals[k] = q.eval(cells[i].first.vertices[k]);
    return cell_poly_exp(cells[i].first, xi_eff, {vals});
  });
}

// --- Brion ------------------------------------------------------------------

namespace {

double brion_sum_raw(const Polytope& P, const Covector& c, bool* hit_pole) {
  const auto& gens = P.vertex_edge_generators();
  const int n = P.dim();
  double tol = 1e-8 * (1.0 + std::sqrt(std::inner_product(c.begin(), c.end(), c.begin(), 0.0)));
  double total = 0.0;
  *hit_pole = false;
  for (std::size_t vi = 0; vi < P.vertices().size(); ++vi) {
    double expo = 0.0;
    for (int j = 0; j < n; ++j) expo -= P.vertices_d()[vi][j] * c[j];
    if (std::fabs(expo) > kNodeOverflow)
      throw Error(ErrorKind::Overflow, "exponent node exceeds double range");
    double denom = 1.0;
    for (const auto& e : gens[vi]) {
      double d = 0.0;
      for (int j = 0; j < n; ++j) d += to_double(Rat(e[j])) * c[j];
      if (std::fabs(d) < tol) {
        *hit_pole = true;
        return 0.0;
      }
      denom *= d;
    }
    total += std::exp(expo) / denom;
  }
  return total;
}

}  // namespace

double brion_exp(const Polytope& P, const Covector& xi_eff) {
  if (!P.is_delzant()) throw Error(ErrorKind::NotDelzant, "Brion formula requires a Delzant polytope");
  const int n = P.dim();
  bool pole = false;
  if (!is_zero(xi_eff)) {
    double v = brion_sum_raw(P, xi_eff, &pole);
    if (!pole) return v;
  } else {
    pole = true;
  }
  // deterministic irrational perturbation direction (1, pi, pi^2, ...)
  std::vector<double> w(n);
  double norm = 0.0;
  for (int j = 0; j < n; ++j) {
    w[j] = std::pow(std::numbers::pi, j);
    norm += w[j] * w[j];
  }
  norm = std::sqrt(norm);
  for (double& x : w) x /= norm;
  double cnorm = std::sqrt(std::inner_product(xi_eff.begin(), xi_eff.end(), xi_eff.begin(), 0.0));
  double eps = 1e-6 * (1.0 + cnorm);
  for (int attempt = 0; attempt < 4; ++attempt) {
    Covector c1(n), c2(n);
    for (int j = 0; j < n; ++j) {
      c1[j] = xi_eff[j] + eps * w[j];
      c2[j] = xi_eff[j] + 0.5 * eps * w[j];
    }
    bool p1 = false, p2 = false;
    double f1 = brion_sum_raw(P, c1, &p1);
    double f2 = brion_sum_raw(P, c2, &p2);
    if (!p1 && !p2) return 2.0 * f2 - f1;  // Richardson in epsilon
    eps *= 2.0;
  }
  throw Error(ErrorKind::DegenerateDirection, "perturbation failed to escape Brion poles");
}

// --- moments ----------------------------------------------------------------

std::vector<double> polytope_linear_moments(const Polytope& P, const Covector& xi_eff, int kmax) {
  const auto& cells = P.flat_cells();
  const int n = P.dim();
  std::vector<double> m(kmax + 1, 0.0);
  for (const auto& cell : cells) {
    auto nodes = cell_nodes(cell, xi_eff);
    auto h = complete_homogeneous(nodes, kmax);
    // int_S ell^k = n! vol k!/(n+k)! h_k(ell(v_0..v_n))
    double coeff = factorial(n) * cell.measure;
    double ratio = 1.0;  // k!/(n+k)! * n! at k=0 equals 1
    for (int k = 0; k <= kmax; ++k) {
      if (k > 0) ratio *= static_cast<double>(k) / static_cast<double>(n + k);
      m[k] += coeff * ratio * h[k] / factorial(n);
    }
  }
  return m;
}

Rat moment_volume(const Polytope& P) { return P.volume(); }

Rat moment_affine(const Polytope& P, const RatVec& gradient, const Rat& constant) {
  Rat total = 0;
  for (const auto& s : P.triangulation()) {
    RatVec c = centroid(s.vertices);
    total += s.volume * (dot(gradient, c) + constant);
  }
  return total;
}

Rat moment_quadratic(const Polytope& P, const RatVec& g1, const Rat& c1,
                     const RatVec& g2, const Rat& c2) {
  const int n = P.dim();
  Rat total = 0;
  for (const auto& s : P.triangulation()) {
    const int nv = n + 1;
    std::vector<Rat> v1(nv), v2(nv);
    for (int i = 0; i < nv; ++i) {
      v1[i] = dot(g1, s.vertices[i]) + c1;
      v2[i] = dot(g2, s.vertices[i]) + c2;
    }
    Rat acc = 0;
    for (int i = 0; i < nv; ++i) {
      for (int j = 0; j < nv; ++j) acc += v1[i] * v2[j] * (i == j ? 2 : 1);
    }
    total += s.volume * acc / Rat((n + 1) * (n + 2));
  }
  return total;
}

Rat boundary_moment_affine(const Polytope& P, const RatVec& gradient, const Rat& constant) {
  Rat total = 0;
  if (P.dim() == 1) {
    for (const auto& f : P.facets()) {
      total += dot(gradient, P.vertices()[f.vertex_indices[0]]) + constant;
    }
    return total;
  }
  for (const auto& chart : P.facet_charts()) {
    for (const auto& sub : chart.polytope->triangulation()) {
      RatVec cc = centroid(sub.vertices);
      total += sub.volume * (dot(gradient, chart.to_ambient(cc)) + constant);
    }
  }
  return total;
}

Rat moment_pl(const Polytope& P, const PLFunction& q) {
  Rat total = 0;
  for (const auto& cell : refine_for_pl(P, q)) {
    RatVec c = centroid(cell.simplex.vertices);
    total += cell.simplex.volume * (dot(cell.piece.gradient, c) + cell.piece.constant);
  }
  return total;
}

Rat boundary_moment_pl(const Polytope& P, const PLFunction& q) {
  Rat total = 0;
  if (P.dim() == 1) {
    for (const auto& f : P.facets()) total += q.eval(P.vertices()[f.vertex_indices[0]]);
    return total;
  }
  for (const auto& chart : P.facet_charts()) {
    PLFunction pulled;
    for (const auto& p : q.pieces) {
      PLFunction::Piece py;
      py.constant = p.constant + dot(p.gradient, chart.origin);
      py.gradient.resize(chart.basis.size());
      for (std::size_t k = 0; k < chart.basis.size(); ++k) py.gradient[k] = dot(p.gradient, chart.basis[k]);
      pulled.pieces.push_back(std::move(py));
    }
    for (const auto& cell : refine_for_pl(*chart.polytope, pulled)) {
      RatVec c = centroid(cell.simplex.vertices);
      total += cell.simplex.volume * (dot(cell.piece.gradient, c) + cell.piece.constant);
    }
  }
  return total;
}

// --- batched cell evaluator ---------------------------------------------------

CellExpEvaluator::CellExpEvaluator(const FlatSimplex& cell, const Covector& xi_eff) {
  base_nodes_ = cell_nodes(cell, xi_eff);
  nv_ = static_cast<int>(base_nodes_.size());
  prefactor_ = factorial(nv_ - 1) * cell.measure;
  // multiset of <= 3 extra nodes encoded in base (nv_+1)
  const int span = (nv_ + 1) * (nv_ + 1) * (nv_ + 1);
  cache_.assign(span, 0.0);
  cached_.assign(span, false);
}

double CellExpEvaluator::dd_for(std::vector<int> extra) const {
  std::sort(extra.begin(), extra.end());
  int key = 0;
  for (int i : extra) key = key * (nv_ + 1) + (i + 1);
  if (cached_[key]) return cache_[key];
  std::vector<double> nodes = base_nodes_;
  for (int i : extra) nodes.push_back(base_nodes_[i]);
  double v = divided_difference_exp(nodes).value;
  cache_[key] = v;
  cached_[key] = true;
  return v;
}

double CellExpEvaluator::plain() const { return prefactor_ * dd_for({}); }

double CellExpEvaluator::product_integral(const std::vector<const std::vector<double>*>& factors) const {
  const int r = static_cast<int>(factors.size());
  if (r == 0) return plain();
  auto multiplicity_factor = [](std::vector<int> idx) {
    std::sort(idx.begin(), idx.end());
    double f = 1.0;
    int run = 1;
    for (std::size_t i = 1; i < idx.size(); ++i) {
      if (idx[i] == idx[i - 1]) {
        ++run;
        f *= run;
      } else {
        run = 1;
      }
    }
    return f;
  };
  double total = 0.0;
  std::vector<int> idx(r, 0);
  while (true) {
    double coeff = 1.0;
    for (int t = 0; t < r; ++t) coeff *= (*factors[t])[idx[t]];
    if (coeff != 0.0) total += coeff * multiplicity_factor(idx) * dd_for(idx);
    int t = r - 1;
    while (t >= 0 && idx[t] == nv_ - 1) { idx[t] = 0; --t; }
    if (t < 0) break;
    ++idx[t];
  }
  return prefactor_ * total;
}

// --- serial reference ---------------------------------------------------------

namespace serial_ref {

double polytope_exp(const Polytope& P, const Covector& xi_eff) {
  if (is_zero(xi_eff)) return to_double(P.volume());
  double s = 0.0;
  for (const auto& cell : P.flat_cells()) s += cell_exp(cell, xi_eff);
  return s;
}

double boundary_exp(const Polytope& P, const Covector& xi_eff) {
  if (is_zero(xi_eff)) return to_double(P.boundary_volume());
  double s = 0.0;
  for (const auto& cell : P.boundary_cells()) s += cell_exp(cell, xi_eff);
  return s;
}

double polytope_exp_pl(const Polytope& P, const Covector& xi_eff, const PLFunction& q) {
  auto cells = refine_for_pl(P, q);
  if (is_zero(xi_eff)) {
    Rat total = 0;
    for (const auto& cell : cells) {
      RatVec c = centroid(cell.simplex.vertices);
      total += cell.simplex.volume * (dot(cell.piece.gradient, c) + cell.piece.constant);
    }
    return to_double(total);
  }
  double s = 0.0;
  for (const auto& cell : cells) {
    FlatSimplex flat = flatten(cell.simplex);
    s += cell_poly_exp(flat, xi_eff, {vertex_values(flat, pl_piece_to_affine(cell.piece))});
  }
  return s;
}

}  // namespace serial_ref

}  // namespace mukstab
