#ifndef MUKSTAB_FIXTURES_HPP
#define MUKSTAB_FIXTURES_HPP

#include <string>
#include <vector>

#include "mukstab/polytope.hpp"

namespace mukstab {

// Named polytope library:
//   interval      [0,1]                    (P^1, O(1))
//   sym_interval  [-1,1]                   (P^1, O(2) centered)
//   square        [0,1]^2                  (P^1 x P^1, O(1,1))
//   simplex2      conv{0, e1, e2}          (P^2, O(1))
//   blp2          {x>=-1, y>=-1, x+y<=1, x+y>=-1}   (Bl_p P^2, -K)
//   cube          [-1,1]^3                 ((P^1)^3, -K)
const Polytope& fixture(const std::string& name);
std::vector<std::string> fixture_names();

// The five Delzant fixtures used by the Brion oracle sweep.
std::vector<std::string> delzant_fixture_names();

}  // namespace mukstab

#endif
