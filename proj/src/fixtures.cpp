#include "mukstab/fixtures.hpp"

#include <map>

namespace mukstab {

namespace {

Halfspace hs(std::vector<long long> normal, long long num, long long den = 1) {
  IntVec u(normal.size());
  for (std::size_t i = 0; i < normal.size(); ++i) u[i] = normal[i];
  return {u, Rat(num, den)};
}

Polytope build(const std::string& name) {
  if (name == "interval") {
    return from_halfspaces({hs({1}, 0), hs({-1}, 1)});
  }
  if (name == "sym_interval") {
    return from_halfspaces({hs({1}, 1), hs({-1}, 1)});
  }
  if (name == "square") {
    return from_halfspaces({hs({1, 0}, 0), hs({-1, 0}, 1), hs({0, 1}, 0), hs({0, -1}, 1)});
  }
  if (name == "simplex2") {
    return from_halfspaces({hs({1, 0}, 0), hs({0, 1}, 0), hs({-1, -1}, 1)});
  }
  if (name == "blp2") {
    return from_halfspaces({hs({1, 0}, 1), hs({0, 1}, 1), hs({-1, -1}, 1), hs({1, 1}, 1)});
  }
  if (name == "cube") {
    return from_halfspaces({hs({1, 0, 0}, 1), hs({-1, 0, 0}, 1), hs({0, 1, 0}, 1),
                            hs({0, -1, 0}, 1), hs({0, 0, 1}, 1), hs({0, 0, -1}, 1)});
  }
  throw Error(ErrorKind::ValidationError, "unknown fixture: " + name);
}

}  // namespace

const Polytope& fixture(const std::string& name) {
  static std::map<std::string, Polytope> cache;
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, build(name)).first;
  return it->second;
}

std::vector<std::string> fixture_names() {
  return {"interval", "sym_interval", "square", "simplex2", "blp2", "cube"};
}

std::vector<std::string> delzant_fixture_names() {
  return {"interval", "square", "simplex2", "blp2", "cube"};
}

}  // namespace mukstab
