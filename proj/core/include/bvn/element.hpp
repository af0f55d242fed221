#pragma once

#include <cstdint>
#include <vector>

#include "bvn/subgroup.hpp"
#include "bvn/trees.hpp"

namespace bvn {

// A member of BV_{n,r}(H): (domain forest, braid, labels, range forest).
// The label at range position i is the recursive braid carried by the strand
// ending at i (the strand starting at permutation(braid)^-1(i)).
struct Element {
  SpecPtr spec;
  Forest domain;
  BraidWord braid;
  std::vector<LabelWord> labels;
  Forest range;

  int arity() const { return domain.arity(); }
  int roots() const { return domain.roots(); }
  int strands() const { return braid.strands; }
};

// Validates all structural invariants; throws ValidationError naming the
// failing field.
Element make_element(SpecPtr spec, Forest domain, BraidWord braid,
                     std::vector<LabelWord> labels, Forest range);

Element identity_element(SpecPtr spec, int roots);

bool is_identity_shaped(const Element& v);

int depth(const Element& v);

// One simultaneous expansion: domain at the strand's start leaf, range at
// leaf i, braid cabled with the label's braid, label cloned n times.
Element expand_at_range_leaf(const Element& v, int i);
Element expand_at_domain_leaf(const Element& v, int j);

// One inverse expansion at a matching caret pair, if any (nullopt when the
// representative is already reduced).
std::optional<Element> reduce_once(const Element& v);

// Fixpoint of reduce_once.
Element reduce(const Element& v);

Element compose(const Element& v, const Element& w);
Element inverse(const Element& v);

// Group equality: reduce both and compare forests structurally, braids and
// label pairs up to braid equality.
bool equal(const Element& v, const Element& w);

// Deterministic pseudo-random element with labels drawn from S_H words.
Element random_element(SpecPtr spec, int roots, int max_depth, uint64_t seed);

}  // namespace bvn
