#pragma once

#include <vector>

#include "bvn/braid.hpp"

namespace bvn {

// Left-greedy (Garside) normal form Delta^k s_1 ... s_m with the s_j
// permutation braids, each pair (s_j, s_{j+1}) left-weighted. Canonical:
// two words represent the same braid iff their forms are identical.
struct GarsideNF {
  int strands = 1;
  int delta = 0;
  std::vector<Permutation> simples;

  friend bool operator==(const GarsideNF&, const GarsideNF&) = default;
};

GarsideNF garside_nf(const BraidWord& u);

// Canonical Artin word of the normal form (Delta letters first).
BraidWord garside_word(const GarsideNF& nf);

// Independent equality route; must agree with bvn::equal everywhere.
bool equal_garside(const BraidWord& u, const BraidWord& v);

// Canonical positive word of a permutation braid (min-descent peeling).
std::vector<int> simple_word(const Permutation& p);

}  // namespace bvn
