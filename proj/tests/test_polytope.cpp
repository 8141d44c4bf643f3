#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "mukstab/fixtures.hpp"
#include "mukstab/polytope.hpp"

using namespace mukstab;

namespace {

Halfspace hs(std::vector<long long> normal, long long num, long long den = 1) {
  IntVec u(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) u[i] = normal[i];
  return {u, Rat(num, den)};
}

RatVec pt(std::vector<long long> coords) {
  RatVec v(coords.size());
  for (std::size_t i = 0; i < coords.size(); ++i) v[i] = coords[i];
  return v;
}

}  // namespace

TEST_CASE("interval from halfspaces") {
  Polytope P = from_halfspaces({hs({1}, 0), hs({-1}, 1)});
  CHECK(P.dim() == 1);
  REQUIRE(P.vertices().size() == 2);
  CHECK(P.vertices()[0] == pt({0}));
  CHECK(P.vertices()[1] == pt({1}));
  CHECK(P.volume() == 1);
}

TEST_CASE("blp2 vertex enumeration") {
  const Polytope& P = fixture("blp2");
  REQUIRE(P.vertices().size() == 4);
  std::vector<RatVec> expect = {pt({-1, 0}), pt({-1, 2}), pt({0, -1}), pt({2, -1})};
  CHECK(P.vertices() == expect);  // lexicographic order
  CHECK(P.volume() == 4);
  CHECK(P.facets().size() == 4);
}

TEST_CASE("infeasible system reports Empty") {
  CHECK_THROWS_WITH_AS(from_halfspaces({hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, 1), hs({1, 1}, -2)}),
                       "halfspace system is infeasible", Error);
}

TEST_CASE("unbounded system reports Unbounded") {
  try {
    from_halfspaces({hs({1, 0}, 0), hs({0, 1}, 0)});
    FAIL("expected Unbounded");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Unbounded);
  }
}

TEST_CASE("lower dimensional system reports NotFullDim") {
  try {
    from_halfspaces({hs({1}, 0), hs({-1}, 0)});  // the single point {0}
    FAIL("expected NotFullDim");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NotFullDim);
  }
}

TEST_CASE("hull of interval endpoints") {
  Polytope P = from_vertices({pt({0}), pt({1})});
  REQUIRE(P.facets().size() == 2);
  CHECK(P.facets()[0].normal[0] == -1);
  CHECK(P.facets()[0].offset == 1);
  CHECK(P.facets()[1].normal[0] == 1);
  CHECK(P.facets()[1].offset == 0);
}

TEST_CASE("hull of standard simplex has primitive normals") {
  Polytope P = from_vertices({pt({0, 0}), pt({1, 0}), pt({0, 1})});
  REQUIRE(P.facets().size() == 3);
  for (const auto& f : P.facets()) {
    Int g = 0;
    for (const auto& x : f.normal) g = boost::multiprecision::gcd(g, x);
    CHECK(g == 1);
  }
}

TEST_CASE("hull drops non-extreme points") {
  Polytope P = from_vertices({pt({0, 0}), pt({2, 0}), pt({0, 2}), pt({1, 1})});
  CHECK(P.vertices().size() == 3);
  CHECK(P.facets().size() == 3);
}

TEST_CASE("round trip H -> V -> H is the identity on canonical form") {
  for (const auto& name : fixture_names()) {
    const Polytope& P = fixture(name);
    Polytope Q = from_vertices(P.vertices());
    REQUIRE(Q.facets().size() == P.facets().size());
    for (std::size_t i = 0; i < P.facets().size(); ++i) {
      CHECK(Q.facets()[i].normal == P.facets()[i].normal);
      CHECK(Q.facets()[i].offset == P.facets()[i].offset);
    }
    CHECK(Q.vertices() == P.vertices());
  }
}

TEST_CASE("triangulation volumes are exact") {
  CHECK(fixture("interval").triangulation().size() == 1);
  CHECK(fixture("square").volume() == 1);
  CHECK(fixture("square").triangulation().size() == 2);
  CHECK(fixture("blp2").volume() == 4);  // 9/2 big triangle minus 1/2 corner
  CHECK(fixture("cube").volume() == 8);

  for (const auto& name : fixture_names()) {
    const Polytope& P = fixture(name);
    for (int anchor = 0; anchor < static_cast<int>(P.vertices().size()); ++anchor) {
      Rat total = 0;
      for (const auto& s : triangulate_fan(P, anchor)) total += s.volume;
      CHECK(total == P.volume());  // identical rational from any fan
    }
  }
}

TEST_CASE("facet charts carry the lattice normalization") {
  // interval: two point facets of sigma-mass 1
  CHECK(fixture("interval").boundary_volume() == 2);
  // standard 2-simplex: hypotenuse has Euclidean length sqrt(2), lattice 1
  CHECK(fixture("simplex2").boundary_volume() == 3);
  CHECK(fixture("square").boundary_volume() == 4);
  CHECK(fixture("cube").boundary_volume() == 24);
  CHECK(fixture("blp2").boundary_volume() == 8);

  // d(sigma) x |u|_2 recovers the Euclidean facet measure
  const Polytope& S = fixture("simplex2");
  for (const auto& chart : S.facet_charts()) {
    const Facet& f = S.facets()[chart.facet_index];
    double usq = 0.0;
    for (const auto& x : f.normal) usq += to_double(Rat(x)) * to_double(Rat(x));
    CHECK(f.lattice_density == doctest::Approx(1.0 / std::sqrt(usq)));
  }
}

TEST_CASE("refine_for_pl splits at the kink") {
  const Polytope& P = fixture("interval");
  PLFunction q;
  q.pieces.push_back({{Rat(0)}, Rat(0)});
  q.pieces.push_back({{Rat(1)}, Rat(-1, 2)});  // x - 1/2
  auto cells = refine_for_pl(P, q);
  REQUIRE(cells.size() == 2);
  Rat total = 0;
  for (const auto& cell : cells) total += cell.simplex.volume;
  CHECK(total == P.volume());
  // the active piece dominates at every cell vertex
  for (const auto& cell : cells) {
    for (const auto& v : cell.simplex.vertices) {
      Rat active = dot(cell.piece.gradient, v) + cell.piece.constant;
      CHECK(active == q.eval(v));
    }
  }
}

TEST_CASE("refine_for_pl with an affine piece is plain triangulation") {
  const Polytope& P = fixture("square");
  PLFunction q = PLFunction::affine({Rat(1), Rat(2)}, Rat(3));
  auto cells = refine_for_pl(P, q);
  CHECK(cells.size() == P.triangulation().size());
}

TEST_CASE("refine_for_pl diagonal split of the square") {
  const Polytope& P = fixture("square");
  PLFunction q;
  q.pieces.push_back({{Rat(0), Rat(0)}, Rat(0)});
  q.pieces.push_back({{Rat(1), Rat(1)}, Rat(-1)});  // x + y - 1
  auto cells = refine_for_pl(P, q);
  Rat total = 0;
  for (const auto& cell : cells) total += cell.simplex.volume;
  CHECK(total == 1);
  // each dominance region is one triangle of area 1/2
  Rat area0 = 0, area1 = 0;
  for (const auto& cell : cells) {
    (cell.piece_index == 0 ? area0 : area1) += cell.simplex.volume;
  }
  CHECK(area0 == Rat(1, 2));
  CHECK(area1 == Rat(1, 2));
}

TEST_CASE("degenerate pieces are dropped silently") {
  const Polytope& P = fixture("interval");
  PLFunction q;
  q.pieces.push_back({{Rat(0)}, Rat(0)});
  q.pieces.push_back({{Rat(0)}, Rat(-1)});   // dominated everywhere
  q.pieces.push_back({{Rat(1)}, Rat(-1)});   // active only at x = 1
  auto cells = refine_for_pl(P, q);
  Rat total = 0;
  for (const auto& cell : cells) {
    CHECK(cell.piece_index == 0);
    total += cell.simplex.volume;
  }
  CHECK(total == 1);
}

TEST_CASE("delzant check and edge generators") {
  for (const auto& name : delzant_fixture_names()) {
    CHECK(check_delzant(fixture(name)));
  }
  // interval edge generators: +1 at 0, -1 at 1
  const Polytope& I = fixture("interval");
  const auto& gens = I.vertex_edge_generators();
  REQUIRE(gens.size() == 2);
  CHECK(gens[0][0][0] == 1);
  CHECK(gens[1][0][0] == -1);

  // a non-Delzant cone: vertices of the triangle conv{0, 2e1, e2}
  Polytope bad = from_vertices({pt({0, 0}), pt({2, 0}), pt({0, 1})});
  CHECK(!check_delzant(bad));
}

TEST_CASE("reflexive predicate") {
  CHECK(fixture("blp2").is_reflexive());
  CHECK(fixture("cube").is_reflexive());
  CHECK(fixture("sym_interval").is_reflexive());
  CHECK(!fixture("interval").is_reflexive());
  CHECK(!fixture("square").is_reflexive());
}

TEST_CASE("dilation scales volume by tau^n") {
  const Polytope& P = fixture("simplex2");
  Polytope Q = P.dilated(Rat(3));
  CHECK(Q.volume() == P.volume() * 9);
}
