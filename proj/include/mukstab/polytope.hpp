#ifndef MUKSTAB_POLYTOPE_HPP
#define MUKSTAB_POLYTOPE_HPP

#include <array>
#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "mukstab/rational.hpp"

namespace mukstab {

// Halfspace { x : <x, normal> >= -offset } with a primitive integer normal.
struct Halfspace {
  IntVec normal;
  Rat offset;
};

// One facet of a full-dimensional polytope.  `lattice_density` converts the
// Euclidean (n-1)-measure on the facet to the lattice-normalized measure
// d(sigma) fixed by  d(mu) = d(sigma) ^ d<., u_F>  for the primitive normal:
// it equals 1/|u_F|_2.
struct Facet {
  IntVec normal;
  Rat offset;
  std::vector<int> vertex_indices;
  double lattice_density = 1.0;
};

// Affinely independent vertex tuple with positive Lebesgue volume
// |det(v_i - v_0)| / n!.
struct Simplex {
  std::vector<RatVec> vertices;  // n+1 rational points in R^n
  Rat volume;                    // exact Lebesgue volume
  int orientation = 1;           // sign of det(v_i - v_0) before normalization
};

// Convex piecewise linear function q(x) = max_i (<a_i, x> + b_i).
struct PLFunction {
  struct Piece {
    RatVec gradient;
    Rat constant;
  };
  std::vector<Piece> pieces;

  Rat eval(const RatVec& x) const;
  double eval(const std::vector<double>& x) const;
  // Index of a piece attaining the max at x (lowest index on ties).
  int argmax(const RatVec& x) const;

  static PLFunction affine(RatVec gradient, Rat constant);
  // Pointwise sum (max-of-affines of all pairwise piece sums).
  PLFunction operator+(const PLFunction& other) const;
  PLFunction shifted(const Rat& c) const;
};

// Internal integration cache: one simplex of a triangulation flattened to
// doubles.  `vertices` holds (dim+1) points of size `dim`; `measure` is the
// reference measure of the cell (Lebesgue for interior cells, d(sigma) for
// boundary cells).
struct FlatSimplex {
  std::vector<std::vector<double>> vertices;
  double measure = 0.0;
};

// Facet prepared for boundary integration: the facet as a full-dimensional
// polytope in lattice chart coordinates y -> origin + basis * y.  A lattice
// chart has unit density with respect to d(sigma); `chart_density` is kept
// explicit so the conversion is visible at the call site.
class Polytope;
struct FacetChart {
  int facet_index = -1;
  RatVec origin;                     // w_0 in R^n
  std::vector<RatVec> basis;         // n-1 lattice vectors spanning u^perp
  std::shared_ptr<const Polytope> polytope;  // facet in chart coordinates
  std::vector<int> vertex_map;       // chart vertex -> ambient vertex index
  double chart_density = 1.0;        // chart Lebesgue -> d(sigma)

  RatVec to_ambient(const RatVec& y) const;
};

// Full-dimensional rational convex polytope with consistent H- and V-
// representations.  Immutable after construction; construction canonicalizes
// (facets sorted lexicographically by normal then offset, vertices sorted
// lexicographically) so equal polytopes compare equal member by member.
class Polytope {
 public:
  int dim() const { return dim_; }
  const std::vector<Facet>& facets() const { return facets_; }
  const std::vector<RatVec>& vertices() const { return vertices_; }
  const std::vector<std::vector<int>>& facets_of_vertex() const { return facets_of_vertex_; }

  const std::vector<std::vector<double>>& vertices_d() const { return vertices_d_; }

  Rat volume() const;                       // exact, from the cached triangulation
  Rat boundary_volume() const;              // lattice-normalized d(sigma) mass
  const std::vector<Simplex>& triangulation() const { return triangulation_; }
  const std::vector<FlatSimplex>& flat_cells() const { return flat_cells_; }
  const std::vector<FacetChart>& facet_charts() const;
  const std::vector<FlatSimplex>& boundary_cells() const;  // ambient vertices, sigma measure

  bool is_reflexive() const;      // every facet offset equals 1
  bool is_delzant() const;        // primitive vertex-cone generators form Z-bases

  // Primitive inward edge generators at each vertex (defined for simple
  // vertices; computed on demand, throws NotDelzant for non-simple vertices).
  const std::vector<std::vector<IntVec>>& vertex_edge_generators() const;

  bool contains(const RatVec& x) const;

  // Dilation tau * P (tau > 0), used by the scaling checks.
  Polytope dilated(const Rat& tau) const;

  friend Polytope from_halfspaces(const std::vector<Halfspace>& halfspaces);

 private:
  Polytope() = default;
  void build_caches();

  int dim_ = 0;
  std::vector<Facet> facets_;
  std::vector<RatVec> vertices_;
  std::vector<std::vector<int>> facets_of_vertex_;

  std::vector<std::vector<double>> vertices_d_;
  std::vector<Simplex> triangulation_;
  std::vector<FlatSimplex> flat_cells_;
  Rat volume_ = 0;

  // lazily built boundary data (const-observable caches)
  mutable std::shared_ptr<std::vector<FacetChart>> facet_charts_;
  mutable std::shared_ptr<std::vector<FlatSimplex>> boundary_cells_;
  mutable std::shared_ptr<Rat> boundary_volume_;
  mutable std::shared_ptr<std::vector<std::vector<IntVec>>> edge_generators_;
};

// Vertex enumeration from a halfspace system.  Throws Unbounded, Empty or
// NotFullDim.  Normals are made primitive and redundant halfspaces dropped.
Polytope from_halfspaces(const std::vector<Halfspace>& halfspaces);

// Convex hull of rational points; round-trips with from_halfspaces.
Polytope from_vertices(const std::vector<RatVec>& points);

// Covering triangulation with disjoint interiors; the exact volumes sum to
// volume(P).  `anchor` selects the fan apex so tests can compare distinct
// triangulations of the same polytope.
std::vector<Simplex> triangulate(const Polytope& P);
std::vector<Simplex> triangulate_fan(const Polytope& P, int anchor);

// Refinement of P by the linearity domains of q: on each returned simplex the
// recorded piece attains the max.  Pieces active only on a measure-zero set
// are dropped silently.
struct RefinedCell {
  Simplex simplex;
  PLFunction::Piece piece;
  int piece_index = -1;
};
std::vector<RefinedCell> refine_for_pl(const Polytope& P, const PLFunction& q);

// Facets as (n-1)-dimensional polytopes in lattice chart coordinates together
// with the density converting chart Lebesgue measure to d(sigma).
std::vector<FacetChart> facet_polytopes(const Polytope& P);

bool check_delzant(const Polytope& P);

// Exact volume of the simplex spanned by the given points.
Rat simplex_volume(const std::vector<RatVec>& verts);

}  // namespace mukstab

#endif
