#include "mukstab/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <set>

namespace mukstab {

namespace {

using Matrix = std::vector<RatVec>;

int rank_of(Matrix m) {
  if (m.empty()) return 0;
  const int rows = static_cast<int>(m.size());
  const int cols = static_cast<int>(m[0].size());
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][col] != 0) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = rank + 1; r < rows; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (int c = col; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    ++rank;
  }
  return rank;
}

int affine_rank(const std::vector<RatVec>& pts) {
  if (pts.size() <= 1) return 0;
  Matrix diffs;
  for (std::size_t i = 1; i < pts.size(); ++i) {
    RatVec d(pts[0].size());
    for (std::size_t j = 0; j < d.size(); ++j) d[j] = pts[i][j] - pts[0][j];
    diffs.push_back(std::move(d));
  }
  return rank_of(std::move(diffs));
}

// Solves A x = b for square A; empty result if singular.
std::optional<RatVec> solve_square(Matrix a, RatVec b) {
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

// One nonzero kernel vector of m (rows x cols), if the nullity is positive.
std::optional<RatVec> kernel_one(Matrix m, int cols) {
  const int rows = static_cast<int>(m.size());
  std::vector<int> pivot_col;
  int rank = 0;
  for (int col = 0; col < cols && rank < rows; ++col) {
    int pivot = -1;
    for (int r = rank; r < rows; ++r) {
      if (m[r][col] != 0) { pivot = r; break; }
    }
    if (pivot < 0) continue;
    std::swap(m[rank], m[pivot]);
    for (int r = 0; r < rows; ++r) {
      if (r == rank || m[r][col] == 0) continue;
      Rat f = m[r][col] / m[rank][col];
      for (int c = 0; c < cols; ++c) m[r][c] -= f * m[rank][c];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  if (rank == cols) return std::nullopt;
  std::vector<bool> is_pivot(cols, false);
  for (int c : pivot_col) is_pivot[c] = true;
  int free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  RatVec x(cols, Rat(0));
  x[free_col] = 1;
  for (int r = 0; r < rank; ++r) {
    // row r: pivot at pivot_col[r]; m[r][pc]*x[pc] + m[r][free]*x[free] = 0
    x[pivot_col[r]] = -m[r][free_col] / m[r][pivot_col[r]];
  }
  return x;
}

Int ext_gcd(const Int& a, const Int& b, Int& s, Int& t) {
  if (b == 0) {
    s = (a < 0) ? -1 : 1;
    t = 0;
    return boost::multiprecision::abs(a);
  }
  Int s1, t1;
  Int g = ext_gcd(b, a % b, s1, t1);
  s = t1;
  t = s1 - (a / b) * t1;
  return g;
}

// Unimodular V with V * u = (1, 0, ..., 0)^T for primitive u; the rows
// 2..n of V form a Z-basis of the saturated lattice u^perp in Z^n.
std::vector<IntVec> lattice_complement_basis(const IntVec& u) {
  const int n = static_cast<int>(u.size());
  std::vector<IntVec> V(n, IntVec(n, 0));
  for (int i = 0; i < n; ++i) V[i][i] = 1;
  IntVec w = u;
  auto nonzeros = [&]() {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i) if (w[i] != 0) idx.push_back(i);
    return idx;
  };
  for (auto nz = nonzeros(); nz.size() > 1; nz = nonzeros()) {
    int i = nz[0], j = nz[1];
    Int s, t;
    Int g = ext_gcd(w[i], w[j], s, t);
    Int wi = w[i] / g, wj = w[j] / g;
    IntVec row_i(n), row_j(n);
    for (int c = 0; c < n; ++c) {
      row_i[c] = s * V[i][c] + t * V[j][c];
      row_j[c] = -wj * V[i][c] + wi * V[j][c];
    }
    V[i] = std::move(row_i);
    V[j] = std::move(row_j);
    w[i] = g;
    w[j] = 0;
  }
  auto nz = nonzeros();
  int p = nz.empty() ? 0 : nz[0];
  std::swap(V[0], V[p]);
  if (w[p] < 0) for (Int& x : V[0]) x = -x;
  std::vector<IntVec> basis(V.begin() + 1, V.end());
  return basis;
}

bool lex_less(const RatVec& a, const RatVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

bool lex_less_int(const IntVec& a, const IntVec& b) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

void for_each_subset(int total, int k, const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > total) return;
  while (true) {
    fn(idx);
    int i = k - 1;
    while (i >= 0 && idx[i] == total - k + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
}

// Nontrivial recession direction of { x : <x, u_F> >= -c_F }, if one exists.
std::optional<RatVec> recession_direction(const std::vector<Halfspace>& hs, int n) {
  Matrix normals;
  for (const auto& h : hs) {
    RatVec row(n);
    for (int j = 0; j < n; ++j) row[j] = Rat(h.normal[j]);
    normals.push_back(std::move(row));
  }
  auto feasible = [&](const RatVec& d) {
    bool nonzero = false;
    for (const Rat& x : d) if (x != 0) nonzero = true;
    if (!nonzero) return false;
    for (const auto& row : normals) if (dot(row, d) < 0) return false;
    return true;
  };
  if (rank_of(normals) < n) {
    // the lineality space of the cone is the kernel of the normal matrix
    auto d = kernel_one(normals, n);
    if (d && feasible(*d)) return d;
    if (d) {
      RatVec neg = *d;
      for (Rat& x : neg) x = -x;
      if (feasible(neg)) return neg;
    }
    return d;  // kernel vector is a line direction, always a recession vector
  }
  if (n == 1) {
    RatVec plus{Rat(1)}, minus{Rat(-1)};
    if (feasible(plus)) return plus;
    if (feasible(minus)) return minus;
    return std::nullopt;
  }
  std::optional<RatVec> found;
  for_each_subset(static_cast<int>(normals.size()), n - 1, [&](const std::vector<int>& idx) {
    if (found) return;
    Matrix rows;
    for (int i : idx) rows.push_back(normals[i]);
    if (rank_of(rows) != n - 1) return;
    auto d = kernel_one(rows, n);
    if (!d) return;
    if (feasible(*d)) { found = *d; return; }
    RatVec neg = *d;
    for (Rat& x : neg) x = -x;
    if (feasible(neg)) found = neg;
  });
  return found;
}

}  // namespace

Rat simplex_volume(const std::vector<RatVec>& verts) {
  const int n = static_cast<int>(verts.size()) - 1;
  Matrix m;
  for (int i = 1; i <= n; ++i) {
    RatVec row(n);
    for (int j = 0; j < n; ++j) row[j] = verts[i][j] - verts[0][j];
    m.push_back(std::move(row));
  }
  // determinant by fraction-free-ish elimination
  Rat det = 1;
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r) {
      if (m[r][col] != 0) { pivot = r; break; }
    }
    if (pivot < 0) return Rat(0);
    if (pivot != col) { std::swap(m[col], m[pivot]); det = -det; }
    det *= m[col][col];
    for (int r = col + 1; r < n; ++r) {
      if (m[r][col] == 0) continue;
      Rat f = m[r][col] / m[col][col];
      for (int c = col; c < n; ++c) m[r][c] -= f * m[col][c];
    }
  }
  Rat fact = 1;
  for (int i = 2; i <= n; ++i) fact *= i;
  if (det < 0) det = -det;
  return det / fact;
}

// ---------------------------------------------------------------------------
// PLFunction

Rat PLFunction::eval(const RatVec& x) const {
  Rat best = dot(pieces[0].gradient, x) + pieces[0].constant;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    Rat v = dot(pieces[i].gradient, x) + pieces[i].constant;
    if (v > best) best = v;
  }
  return best;
}

double PLFunction::eval(const std::vector<double>& x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) {
    double v = to_double(p.constant);
    for (std::size_t j = 0; j < x.size(); ++j) v += to_double(p.gradient[j]) * x[j];
    best = std::max(best, v);
  }
  return best;
}

int PLFunction::argmax(const RatVec& x) const {
  int best = 0;
  Rat bv = dot(pieces[0].gradient, x) + pieces[0].constant;
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    Rat v = dot(pieces[i].gradient, x) + pieces[i].constant;
    if (v > bv) { bv = v; best = static_cast<int>(i); }
  }
  return best;
}

PLFunction PLFunction::affine(RatVec gradient, Rat constant) {
  PLFunction q;
  q.pieces.push_back({std::move(gradient), std::move(constant)});
  return q;
}

PLFunction PLFunction::operator+(const PLFunction& other) const {
  PLFunction out;
  for (const auto& p : pieces) {
    for (const auto& r : other.pieces) {
      RatVec g(p.gradient.size());
      for (std::size_t j = 0; j < g.size(); ++j) g[j] = p.gradient[j] + r.gradient[j];
      out.pieces.push_back({std::move(g), p.constant + r.constant});
    }
  }
  return out;
}

PLFunction PLFunction::shifted(const Rat& c) const {
  PLFunction out = *this;
  for (auto& p : out.pieces) p.constant += c;
  return out;
}

// ---------------------------------------------------------------------------
// Construction

Polytope from_halfspaces(const std::vector<Halfspace>& input) {
  if (input.empty()) throw Error(ErrorKind::ValidationError, "empty halfspace list");
  const int n = static_cast<int>(input[0].normal.size());
  if (n < 1) throw Error(ErrorKind::ValidationError, "dimension must be positive");

  // normalize: primitive normals, drop trivial constraints, merge parallels
  std::map<IntVec, Rat, bool (*)(const IntVec&, const IntVec&)> merged(lex_less_int);
  for (const auto& h : input) {
    if (static_cast<int>(h.normal.size()) != n)
      throw Error(ErrorKind::ValidationError, "inconsistent normal dimensions");
    IntVec u = h.normal;
    Int g = make_primitive(u);
    if (g == 0) {
      if (h.offset < 0) throw Error(ErrorKind::Empty, "zero normal with negative offset");
      continue;
    }
    Rat c = h.offset / Rat(g);
    auto it = merged.find(u);
    if (it == merged.end()) merged.emplace(u, c);
    else if (c < it->second) it->second = c;  // tighter constraint wins
  }
  std::vector<Halfspace> hs;
  for (auto& [u, c] : merged) hs.push_back({u, c});
  if (hs.empty()) throw Error(ErrorKind::Unbounded, "no effective constraints");

  if (auto d = recession_direction(hs, n)) throw Error(ErrorKind::Unbounded, "recession cone is nontrivial");

  // vertex enumeration: intersect every n-subset of facet hyperplanes
  std::vector<RatVec> verts;
  const int m = static_cast<int>(hs.size());
  for_each_subset(m, n, [&](const std::vector<int>& idx) {
    Matrix a;
    RatVec b;
    for (int i : idx) {
      RatVec row(n);
      for (int j = 0; j < n; ++j) row[j] = Rat(hs[i].normal[j]);
      a.push_back(std::move(row));
      b.push_back(-hs[i].offset);
    }
    auto x = solve_square(std::move(a), std::move(b));
    if (!x) return;
    for (const auto& h : hs) {
      if (dot(h.normal, *x) < -h.offset) return;
    }
    verts.push_back(std::move(*x));
  });
  std::sort(verts.begin(), verts.end(), lex_less);
  verts.erase(std::unique(verts.begin(), verts.end()), verts.end());
  if (verts.empty()) throw Error(ErrorKind::Empty, "halfspace system is infeasible");
  if (affine_rank(verts) < n) throw Error(ErrorKind::NotFullDim, "affine hull is lower dimensional");

  // keep halfspaces whose vertex set spans an (n-1)-dimensional face
  Polytope P;
  P.dim_ = n;
  P.vertices_ = std::move(verts);
  for (const auto& h : hs) {
    std::vector<int> incident;
    std::vector<RatVec> pts;
    for (std::size_t i = 0; i < P.vertices_.size(); ++i) {
      if (dot(h.normal, P.vertices_[i]) == -h.offset) {
        incident.push_back(static_cast<int>(i));
        pts.push_back(P.vertices_[i]);
      }
    }
    if (static_cast<int>(incident.size()) < n) continue;
    if (affine_rank(pts) != n - 1) continue;
    Facet f;
    f.normal = h.normal;
    f.offset = h.offset;
    f.vertex_indices = std::move(incident);
    double norm2 = 0.0;
    for (const Int& x : f.normal) norm2 += to_double(Rat(x)) * to_double(Rat(x));
    f.lattice_density = 1.0 / std::sqrt(norm2);
    P.facets_.push_back(std::move(f));
  }
  std::sort(P.facets_.begin(), P.facets_.end(), [](const Facet& a, const Facet& b) {
    if (a.normal != b.normal) return lex_less_int(a.normal, b.normal);
    return a.offset < b.offset;
  });

  P.facets_of_vertex_.assign(P.vertices_.size(), {});
  for (std::size_t fi = 0; fi < P.facets_.size(); ++fi) {
    for (int vi : P.facets_[fi].vertex_indices) P.facets_of_vertex_[vi].push_back(static_cast<int>(fi));
  }
  P.build_caches();
  return P;
}

Polytope from_vertices(const std::vector<RatVec>& input) {
  if (input.empty()) throw Error(ErrorKind::ValidationError, "empty point list");
  const int n = static_cast<int>(input[0].size());
  std::vector<RatVec> pts = input;
  std::sort(pts.begin(), pts.end(), lex_less);
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (static_cast<int>(pts.size()) < n + 1 || affine_rank(pts) < n)
    throw Error(ErrorKind::NotFullDim, "points do not affinely span");

  std::set<std::pair<IntVec, Rat>> halfspaces;
  const int N = static_cast<int>(pts.size());
  for_each_subset(N, n, [&](const std::vector<int>& idx) {
    Matrix diffs;
    for (int i = 1; i < n; ++i) {
      RatVec d(n);
      for (int j = 0; j < n; ++j) d[j] = pts[idx[i]][j] - pts[idx[0]][j];
      diffs.push_back(std::move(d));
    }
    std::optional<RatVec> normal;
    if (n == 1) {
      normal = RatVec{Rat(1)};
    } else {
      if (rank_of(diffs) != n - 1) return;
      normal = kernel_one(diffs, n);
    }
    if (!normal) return;
    IntVec u = clear_denominators(*normal);
    Rat h = dot(u, pts[idx[0]]);
    bool above = false, below = false;
    for (const auto& p : pts) {
      Rat v = dot(u, p);
      if (v > h) above = true;
      if (v < h) below = true;
    }
    if (above && below) return;
    if (above) {
      halfspaces.insert({u, -h});  // <x,u> >= h
    } else {
      IntVec neg(u.size());
      for (std::size_t j = 0; j < u.size(); ++j) neg[j] = -u[j];
      halfspaces.insert({neg, h});  // <x,-u> >= -h
    }
  });
  std::vector<Halfspace> hs;
  for (const auto& [u, c] : halfspaces) hs.push_back({u, c});
  return from_halfspaces(hs);
}

// ---------------------------------------------------------------------------
// Triangulation

std::vector<Simplex> triangulate_fan(const Polytope& P, int anchor) {
  const int n = P.dim();
  std::vector<Simplex> out;
  if (n == 1) {
    Simplex s;
    s.vertices = {P.vertices()[0], P.vertices()[1]};
    s.volume = simplex_volume(s.vertices);
    out.push_back(std::move(s));
    return out;
  }
  const auto& charts = P.facet_charts();
  for (const auto& chart : charts) {
    const Facet& f = P.facets()[chart.facet_index];
    bool contains_anchor =
        std::find(f.vertex_indices.begin(), f.vertex_indices.end(), anchor) != f.vertex_indices.end();
    if (contains_anchor) continue;
    for (const auto& sub : chart.polytope->triangulation()) {
      Simplex s;
      s.vertices.push_back(P.vertices()[anchor]);
      for (const auto& y : sub.vertices) s.vertices.push_back(chart.to_ambient(y));
      s.volume = simplex_volume(s.vertices);
      if (s.volume == 0) continue;  // anchor in the facet hyperplane; cannot happen for facets avoiding it
      out.push_back(std::move(s));
    }
  }
  return out;
}

std::vector<Simplex> triangulate(const Polytope& P) { return triangulate_fan(P, 0); }

// ---------------------------------------------------------------------------
// Facet charts and boundary cells

RatVec FacetChart::to_ambient(const RatVec& y) const {
  RatVec x = origin;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    for (std::size_t j = 0; j < x.size(); ++j) x[j] += y[k] * basis[k][j];
  }
  return x;
}

std::vector<FacetChart> facet_polytopes(const Polytope& P) {
  const int n = P.dim();
  std::vector<FacetChart> charts;
  for (std::size_t fi = 0; fi < P.facets().size(); ++fi) {
    const Facet& f = P.facets()[fi];
    FacetChart chart;
    chart.facet_index = static_cast<int>(fi);
    chart.origin = P.vertices()[f.vertex_indices[0]];
    chart.chart_density = 1.0;  // lattice chart: chart Lebesgue equals d(sigma)
    if (n == 1) {
      chart.vertex_map = {f.vertex_indices[0]};
      charts.push_back(std::move(chart));
      continue;
    }
    auto basis_int = lattice_complement_basis(f.normal);
    for (const auto& b : basis_int) {
      RatVec bv(n);
      for (int j = 0; j < n; ++j) bv[j] = Rat(b[j]);
      chart.basis.push_back(std::move(bv));
    }
    // chart coordinates of the facet vertices: solve basis^T y = v - origin
    std::vector<RatVec> ys;
    for (int vi : f.vertex_indices) {
      Matrix a(n, RatVec(n - 1));
      RatVec b(n);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n - 1; ++c) a[r][c] = chart.basis[c][r];
        b[r] = P.vertices()[vi][r] - chart.origin[r];
      }
      // consistent overdetermined system; reduce to a square solvable block
      Matrix sq;
      RatVec rhs;
      for (int r = 0; r < n && static_cast<int>(sq.size()) < n - 1; ++r) {
        Matrix probe = sq;
        probe.push_back(a[r]);
        if (rank_of(probe) == static_cast<int>(sq.size()) + 1) {
          sq.push_back(a[r]);
          rhs.push_back(b[r]);
        }
      }
      auto y = solve_square(std::move(sq), std::move(rhs));
      if (!y) throw Error(ErrorKind::ComputeError, "facet chart solve failed");
      ys.push_back(std::move(*y));
    }
    // map chart vertices back to ambient vertex indices after hull reorders
    Polytope chart_poly = from_vertices(ys);
    chart.vertex_map.assign(chart_poly.vertices().size(), -1);
    for (std::size_t ci = 0; ci < chart_poly.vertices().size(); ++ci) {
      for (std::size_t k = 0; k < ys.size(); ++k) {
        if (chart_poly.vertices()[ci] == ys[k]) {
          chart.vertex_map[ci] = f.vertex_indices[k];
          break;
        }
      }
    }
    chart.polytope = std::make_shared<Polytope>(std::move(chart_poly));
    charts.push_back(std::move(chart));
  }
  return charts;
}

const std::vector<FacetChart>& Polytope::facet_charts() const {
  if (!facet_charts_) {
    facet_charts_ = std::make_shared<std::vector<FacetChart>>(facet_polytopes(*this));
  }
  return *facet_charts_;
}

const std::vector<FlatSimplex>& Polytope::boundary_cells() const {
  if (!boundary_cells_) {
    auto cells = std::make_shared<std::vector<FlatSimplex>>();
    Rat total = 0;
    for (const auto& chart : facet_charts()) {
      if (dim_ == 1) {
        FlatSimplex cell;
        cell.vertices = {vertices_d_[chart.vertex_map[0]]};
        cell.measure = 1.0;  // a point facet has d(sigma)-mass 1
        cells->push_back(std::move(cell));
        total += 1;
        continue;
      }
      for (const auto& sub : chart.polytope->triangulation()) {
        FlatSimplex cell;
        for (const auto& y : sub.vertices) {
          cell.vertices.push_back(to_double(chart.to_ambient(y)));
        }
        cell.measure = to_double(sub.volume) * chart.chart_density;
        cells->push_back(std::move(cell));
        total += sub.volume;
      }
    }
    boundary_cells_ = cells;
    boundary_volume_ = std::make_shared<Rat>(total);
  }
  return *boundary_cells_;
}

Rat Polytope::boundary_volume() const {
  boundary_cells();
  return *boundary_volume_;
}

// ---------------------------------------------------------------------------
// Caches, predicates

void Polytope::build_caches() {
  vertices_d_.clear();
  for (const auto& v : vertices_) vertices_d_.push_back(to_double(v));
  triangulation_ = triangulate_fan(*this, 0);
  volume_ = 0;
  flat_cells_.clear();
  for (const auto& s : triangulation_) {
    volume_ += s.volume;
    FlatSimplex cell;
    for (const auto& v : s.vertices) cell.vertices.push_back(to_double(v));
    cell.measure = to_double(s.volume);
    flat_cells_.push_back(std::move(cell));
  }
}

Rat Polytope::volume() const { return volume_; }

bool Polytope::contains(const RatVec& x) const {
  for (const auto& f : facets_) {
    if (dot(f.normal, x) < -f.offset) return false;
  }
  return true;
}

bool Polytope::is_reflexive() const {
  for (const auto& f : facets_) {
    if (f.offset != 1) return false;
  }
  return true;
}

const std::vector<std::vector<IntVec>>& Polytope::vertex_edge_generators() const {
  if (edge_generators_) return *edge_generators_;
  auto gens = std::make_shared<std::vector<std::vector<IntVec>>>();
  const int n = dim_;
  for (std::size_t vi = 0; vi < vertices_.size(); ++vi) {
    const auto& active = facets_of_vertex_[vi];
    if (static_cast<int>(active.size()) != n)
      throw Error(ErrorKind::NotDelzant, "vertex is not simple");
    std::vector<IntVec> edges;
    for (int skip = 0; skip < n; ++skip) {
      Matrix rows;
      for (int k = 0; k < n; ++k) {
        if (k == skip) continue;
        RatVec row(n);
        for (int j = 0; j < n; ++j) row[j] = Rat(facets_[active[k]].normal[j]);
        rows.push_back(std::move(row));
      }
      std::optional<RatVec> d;
      if (n == 1) {
        d = RatVec{Rat(1)};
      } else {
        d = kernel_one(rows, n);
      }
      if (!d) throw Error(ErrorKind::NotDelzant, "degenerate vertex cone");
      IntVec e = clear_denominators(*d);
      Rat side = dot(facets_[active[skip]].normal, *d);
      if (side == 0) throw Error(ErrorKind::NotDelzant, "degenerate vertex cone");
      if (side < 0) for (Int& x : e) x = -x;
      edges.push_back(std::move(e));
    }
    gens->push_back(std::move(edges));
  }
  edge_generators_ = gens;
  return *edge_generators_;
}

bool Polytope::is_delzant() const {
  const int n = dim_;
  try {
    const auto& gens = vertex_edge_generators();
    for (const auto& edges : gens) {
      std::vector<RatVec> pts;
      pts.emplace_back(n, Rat(0));
      for (const auto& e : edges) {
        RatVec p(n);
        for (int j = 0; j < n; ++j) p[j] = Rat(e[j]);
        pts.push_back(std::move(p));
      }
      Rat fact = 1;
      for (int i = 2; i <= n; ++i) fact *= i;
      if (simplex_volume(pts) * fact != 1) return false;
    }
  } catch (const Error&) {
    return false;
  }
  return true;
}

bool check_delzant(const Polytope& P) { return P.is_delzant(); }

Polytope Polytope::dilated(const Rat& tau) const {
  if (tau <= 0) throw Error(ErrorKind::ValidationError, "dilation factor must be positive");
  std::vector<Halfspace> hs;
  for (const auto& f : facets_) hs.push_back({f.normal, f.offset * tau});
  return from_halfspaces(hs);
}

// ---------------------------------------------------------------------------
// PL refinement

std::vector<RefinedCell> refine_for_pl(const Polytope& P, const PLFunction& q) {
  if (q.pieces.empty()) throw Error(ErrorKind::ValidationError, "piecewise linear function has no pieces");
  const int n = P.dim();
  for (const auto& p : q.pieces) {
    if (static_cast<int>(p.gradient.size()) != n)
      throw Error(ErrorKind::ValidationError, "piece dimension mismatch");
  }
  // drop duplicate pieces so dominance regions have disjoint interiors
  std::vector<PLFunction::Piece> pieces;
  for (const auto& p : q.pieces) {
    bool dup = false;
    for (const auto& r : pieces) {
      if (r.gradient == p.gradient && r.constant == p.constant) { dup = true; break; }
    }
    if (!dup) pieces.push_back(p);
  }

  std::vector<RefinedCell> out;
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    std::vector<Halfspace> hs;
    for (const auto& f : P.facets()) hs.push_back({f.normal, f.offset});
    bool infeasible = false;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      if (j == i) continue;
      RatVec diff(n);
      for (int k = 0; k < n; ++k) diff[k] = pieces[i].gradient[k] - pieces[j].gradient[k];
      Rat scale;
      IntVec u = clear_denominators(diff, &scale);
      if (scale == 0) {
        if (pieces[i].constant < pieces[j].constant) { infeasible = true; break; }
        continue;  // piece j is dominated everywhere
      }
      // <a_i - a_j, x> + (b_i - b_j) >= 0, scaled to the primitive normal
      hs.push_back({u, (pieces[i].constant - pieces[j].constant) / scale});
    }
    if (infeasible) continue;
    try {
      Polytope region = from_halfspaces(hs);
      for (const auto& s : region.triangulation()) {
        out.push_back({s, pieces[i], static_cast<int>(i)});
      }
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Empty || e.kind() == ErrorKind::NotFullDim) continue;
      throw;
    }
  }
  return out;
}

}  // namespace mukstab
