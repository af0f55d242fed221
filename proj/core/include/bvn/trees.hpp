#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bvn/errors.hpp"

namespace bvn {

// Full finite n-ary tree, stored as its preorder shape: 1 = internal node
// (caret), 0 = leaf. The trivial tree is the single leaf {0}.
class Tree {
 public:
  explicit Tree(int arity);                          // trivial tree
  Tree(int arity, std::vector<uint8_t> shape);       // validates

  int arity() const { return arity_; }
  const std::vector<uint8_t>& shape() const { return shape_; }

  int leaf_count() const;
  int caret_count() const;        // = depth in the paper's sense
  bool is_leaf() const { return shape_.size() == 1; }

  // Leaf addresses as words over {0..n-1}, left to right.
  std::vector<std::string> leaves() const;

  // 1-based position of the leaf with the given address.
  int leaf_position(const std::string& address) const;
  std::string leaf_address(int position) const;

  // True if the addressed node is internal; false if it is a leaf.
  // AddressError if the address does not reach a node.
  bool node_is_internal(const std::string& address) const;

  // Expansion: append a caret at the leaf with 1-based position `pos`.
  Tree expand_at(int pos) const;
  Tree expand(const std::string& leaf_address) const;

  // Final carets: internal nodes whose children are all leaves.
  // Each is reported as (address word, 1-based leaf position of first child).
  struct FinalCaret {
    std::string address;
    int first_leaf_pos;
  };
  std::vector<FinalCaret> final_carets() const;

  // Reduction: remove the final caret rooted at `address`.
  Tree reduce_caret(const std::string& address) const;

  // True if *this embeds in `other` as a rooted subtree (other is an
  // expansion of *this).
  bool embeds_in(const Tree& other) const;

  friend bool operator==(const Tree&, const Tree&) = default;

 private:
  int arity_;
  std::vector<uint8_t> shape_;
};

// Minimal common expansion of two trees.
Tree lcm(const Tree& a, const Tree& b);

// Spine tree S_d: d carets, all on the rightmost branch.
Tree spine(int arity, int depth);

// The base tree T(n) of the finite-generation argument:
// T[0][1][00][01] for n = 2 and T[0][1][2] for n > 2.
Tree base_tree(int arity);

// Leaf count m(n) of base_tree(n): 6 for n = 2, 4n-3 otherwise.
int base_leaf_count(int arity);

// Ordered forest of full n-ary trees; global leaf order is the concatenation
// of the per-tree orders.
class Forest {
 public:
  Forest(int arity, int roots);                      // trivial forest
  Forest(int arity, std::vector<Tree> trees);

  int arity() const { return arity_; }
  int roots() const { return static_cast<int>(trees_.size()); }
  const std::vector<Tree>& trees() const { return trees_; }
  const Tree& tree(int root_1based) const;

  int leaf_count() const;
  int caret_count() const;

  // Global leaf address: (1-based root, word).
  struct LeafAddress {
    int root;
    std::string word;
    friend bool operator==(const LeafAddress&, const LeafAddress&) = default;
  };
  std::vector<LeafAddress> leaves() const;
  int leaf_position(const LeafAddress& a) const;     // 1-based global
  LeafAddress leaf_address(int position) const;

  Forest expand_at(int pos) const;
  Forest expand(const LeafAddress& a) const;

  struct FinalCaret {
    int root;
    std::string address;
    int first_leaf_pos;  // 1-based global position of the caret's first leaf
  };
  std::vector<FinalCaret> final_carets() const;
  Forest reduce_caret(const FinalCaret& c) const;

  friend bool operator==(const Forest&, const Forest&) = default;

 private:
  int arity_;
  std::vector<Tree> trees_;
};

// Root-wise least common multiple; ArityError/ValidationError on mismatch.
Forest lcm(const Forest& a, const Forest& b);

}  // namespace bvn
