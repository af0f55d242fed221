#pragma once

#include <optional>
#include <vector>

#include "bvn/errors.hpp"

namespace bvn {

// A word in the Artin generators of B_l. Letters are signed indices:
// +i stands for sigma_i, -i for its inverse, 1 <= i <= l-1.
// Convention (fixed project-wide): words read top to bottom; sigma_i crosses
// the strand at position i OVER the strand at position i+1; compose(u, v)
// stacks u above v.
struct BraidWord {
  int strands = 1;
  std::vector<int> letters;

  BraidWord() = default;
  BraidWord(int l, std::vector<int> w);

  bool empty() const { return letters.empty(); }
  int length() const { return static_cast<int>(letters.size()); }
};

// Bijection of {1..l}; image[i-1] = pi(i).
struct Permutation {
  std::vector<int> image;

  static Permutation identity(int l);
  int size() const { return static_cast<int>(image.size()); }
  int of(int i) const { return image[i - 1]; }
  int preimage(int i) const;
  bool is_identity() const;
  Permutation inverse() const;
  // (a * b)(i) = a(b(i))
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  friend bool operator==(const Permutation&, const Permutation&) = default;
};

BraidWord compose(const BraidWord& u, const BraidWord& v);
BraidWord inverse(const BraidWord& u);

// pi(i) = ending position of the strand starting at position i.
Permutation permutation(const BraidWord& u);

int writhe(const BraidWord& u);

// Cancels adjacent inverse pairs.
std::vector<int> free_reduce(std::vector<int> w);

// Dehornoy handle reduction to a handle-free word (empty iff trivial).
std::vector<int> handle_reduce(std::vector<int> w);

// Complete decision procedure for the braid word problem.
bool is_trivial(const BraidWord& u);
bool equal(const BraidWord& u, const BraidWord& v);

// Geometric strand deletion: keep the strands whose *start* positions are in
// `keep`; drop crossings involving deleted strands; reindex.
BraidWord delete_strands(const BraidWord& u, const std::vector<int>& keep);

// Replace the strand starting at position k by n parallel strands; crossings
// with that strand become blocks of n same-sign crossings; `inner` (a braid
// on n strands) is appended at the cable's final position block, at the
// bottom end.
BraidWord cable_strand(const BraidWord& u, int k, int n, const BraidWord& inner);

// If the strands starting at positions p..p+n-1 form a sub-braid (a tube),
// returns (inner braid on n strands, outer braid with the block fused to one
// strand); otherwise nullopt. The fused strand keeps start position p.
struct CableParts {
  BraidWord inner;
  BraidWord outer;
};
std::optional<CableParts> extract_cable(const BraidWord& u, int p, int n);

// Positive and every pair of strands crosses at most once.
bool is_simple(const BraidWord& u);

// Minimal-length simple braid on l strands carrying the block of n strands
// starting at p to start at q, order-preservingly, with no crossings inside
// the block; all other strands keep their relative order.
BraidWord ribbon_word(int l, int p, int q, int n);

}  // namespace bvn
