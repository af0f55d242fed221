#pragma once

#include <map>
#include <string>
#include <vector>

#include "bvn/element.hpp"

namespace bvn {

// A word over named generators with exponents +-1.
struct GeneratorWord {
  std::vector<std::pair<std::string, int>> tokens;

  bool empty() const { return tokens.empty(); }
};

GeneratorWord inverse(const GeneratorWord& w);
GeneratorWord concat(const GeneratorWord& a, const GeneratorWord& b);
// Cancels adjacent name^e name^-e pairs.
GeneratorWord simplify(const GeneratorWord& w);
std::string format_word(const GeneratorWord& w);
GeneratorWord parse_word(const std::string& text);

// The named generating elements of BV_n(H) for r = 1:
//   x0..x{n-1}         the tree-rotation generators,
//   e_<tree>           (T, Id, Id, T(n)) for trees T with m(n) leaves,
//   h1..h{m(n)-1}      (T(n), sigma_i, Id, T(n)),
//   g_<name>           (R, Id, {s, Id, ..}, R) per subgroup generator,
// plus the auxiliary v_i / w<i>_<k> / z_i / r<k> elements used by the
// index-reduction identities.
class GeneratorTable {
 public:
  GeneratorTable(int n, SpecPtr spec);

  int arity() const { return n_; }
  int base_leaves() const { return m_; }
  int base_depth() const { return depth_; }
  const SpecPtr& spec() const { return spec_; }

  bool has(const std::string& name) const { return entries_.count(name) != 0; }
  const Element& at(const std::string& name) const;
  // e_<tree> entries materialize lazily for n >= 4.
  const Element& ensure_e(const Tree& t);
  std::string e_name(const Tree& t) const;

  const std::vector<std::string>& theorem_set() const { return theorem_set_; }
  std::map<std::string, Element>& entries() { return entries_; }
  const std::map<std::string, Element>& entries() const { return entries_; }

  // Index-reduction rewrites, verified by `equal` at construction and cached:
  // h_i for n <= i <= m-2 over {e, h_{<n}}; h_i for i < n over {e, g, x}
  // (requires the sigma_i labels to exist in S_H).
  const GeneratorWord& rewrite_h_large(int i);
  const GeneratorWord& rewrite_h_small(int i);

  // Positive y-word peeling: Psi(T) = (spine, Id, T) as y_{k} tokens, and the
  // y -> x index reduction. Used by decompose_F.
  std::vector<int> psi_peel(const Tree& t) const;
  GeneratorWord y_word_to_x(const std::vector<int>& ys);
  Element y_element(int k) const;

 private:
  void verify_entry(const std::string& name, const Element& got, const Element& want) const;
  void build();

  int n_, m_, depth_;
  SpecPtr spec_;
  std::map<std::string, Element> entries_;
  std::vector<std::string> theorem_set_;
  std::map<int, GeneratorWord> large_cache_;
  std::map<int, GeneratorWord> small_cache_;
  std::map<int, GeneratorWord> y_cache_;
};

GeneratorTable standard_table(int n, SpecPtr spec);

Element evaluate(const GeneratorWord& w, const GeneratorTable& table);

// One Prop-fg peeling step: factors of depth < depth(v) whose product equals
// v. Requires r = 1 and depth(v) > depth(T(n)).
std::vector<Element> decompose_step(const Element& v, GeneratorTable& table);

// Full decomposition into e/h/g tokens (r = 1).
GeneratorWord decompose(const Element& v, GeneratorTable& table);

// Decomposition of a braid-free, label-free element over x0..x{n-1}.
GeneratorWord decompose_F(const Element& v, GeneratorTable& table);

// Rewrites a decomposition into the 2n-element set: x's, h_{m-1}, plus g's
// when S_H covers the sigma_i labels (H = B_n) or h_1..h_{n-1} when H = Id.
GeneratorWord decompose_to_basis(const Element& v, GeneratorTable& table);

// The 2n-element parabolic tables of the standard parabolic A_X (alpha empty)
// and its conjugates alpha^-1 A_X alpha.
GeneratorTable parabolic_table(int n, const std::vector<int>& X, const BraidWord& alpha);

}  // namespace bvn
