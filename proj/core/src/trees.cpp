#include "bvn/trees.hpp"

#include <algorithm>

namespace bvn {

namespace {

void check_arity(int arity) {
  if (arity < 2) throw ArityError("tree arity must be >= 2, got " + std::to_string(arity));
}

// Validates a preorder shape: exactly one full tree, every internal node
// with `arity` children.
void check_shape(int arity, const std::vector<uint8_t>& shape) {
  long need = 1;
  for (size_t i = 0; i < shape.size(); ++i) {
    if (need <= 0) throw ValidationError("tree shape has trailing data");
    --need;
    if (shape[i]) need += arity;
  }
  if (need != 0) throw ValidationError("tree shape is truncated");
}

// Size (in shape entries) of the subtree starting at index i.
size_t subtree_size(int arity, const std::vector<uint8_t>& shape, size_t i) {
  long need = 1;
  size_t j = i;
  while (need > 0) {
    --need;
    if (shape[j]) need += arity;
    ++j;
  }
  return j - i;
}

}  // namespace

Tree::Tree(int arity) : arity_(arity), shape_{0} { check_arity(arity); }

Tree::Tree(int arity, std::vector<uint8_t> shape) : arity_(arity), shape_(std::move(shape)) {
  check_arity(arity);
  check_shape(arity_, shape_);
}

int Tree::leaf_count() const {
  return static_cast<int>(std::count(shape_.begin(), shape_.end(), 0));
}

int Tree::caret_count() const {
  return static_cast<int>(std::count(shape_.begin(), shape_.end(), 1));
}

std::vector<std::string> Tree::leaves() const {
  std::vector<std::string> out;
  out.reserve(leaf_count());
  std::string word;
  // Iterative preorder walk tracking the path word.
  struct Frame { int child; };
  std::vector<Frame> stack;
  size_t i = 0;
  auto descend = [&]() {
    while (shape_[i]) {
      stack.push_back({0});
      word.push_back('0');
      ++i;
    }
    out.push_back(word);
    ++i;
  };
  descend();
  while (!stack.empty()) {
    if (++stack.back().child >= arity_) {
      stack.pop_back();
      if (!word.empty()) word.pop_back();
      continue;
    }
    word.back() = static_cast<char>('0' + stack.back().child);
    descend();
  }
  return out;
}

int Tree::leaf_position(const std::string& address) const {
  // Walk the address, counting leaves of skipped siblings.
  size_t i = 0;
  int pos = 1;
  for (char c : address) {
    if (!shape_[i]) throw AddressError("address descends below a leaf: " + address);
    int child = c - '0';
    if (child < 0 || child >= arity_) throw AddressError("bad digit in address: " + address);
    ++i;  // move to first child
    for (int k = 0; k < child; ++k) {
      size_t sz = subtree_size(arity_, shape_, i);
      for (size_t j = i; j < i + sz; ++j)
        if (!shape_[j]) ++pos;
      i += sz;
    }
  }
  if (shape_[i]) throw AddressError("address is an internal node, not a leaf: " + address);
  return pos;
}

std::string Tree::leaf_address(int position) const {
  auto ls = leaves();
  if (position < 1 || position > static_cast<int>(ls.size()))
    throw RangeError("leaf position out of range: " + std::to_string(position));
  return ls[position - 1];
}

bool Tree::node_is_internal(const std::string& address) const {
  size_t i = 0;
  for (char c : address) {
    if (!shape_[i]) throw AddressError("address descends below a leaf: " + address);
    int child = c - '0';
    if (child < 0 || child >= arity_) throw AddressError("bad digit in address: " + address);
    ++i;
    for (int k = 0; k < child; ++k) i += subtree_size(arity_, shape_, i);
  }
  return shape_[i] != 0;
}

Tree Tree::expand_at(int pos) const {
  if (pos < 1 || pos > leaf_count())
    throw RangeError("expand position out of range: " + std::to_string(pos));
  // Locate the pos-th leaf in preorder.
  int seen = 0;
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (!shape_[i] && ++seen == pos) {
      std::vector<uint8_t> next(shape_);
      next[i] = 1;
      next.insert(next.begin() + i + 1, arity_, 0);
      return Tree(arity_, std::move(next));
    }
  }
  throw InternalError("expand_at: unreachable");
}

Tree Tree::expand(const std::string& leaf) const { return expand_at(leaf_position(leaf)); }

std::vector<Tree::FinalCaret> Tree::final_carets() const {
  std::vector<FinalCaret> out;
  // An internal node is a final caret iff its next n shape entries are leaves.
  int leaf_idx = 0;
  std::string word;
  struct Frame { int child; };
  std::vector<Frame> stack;
  size_t i = 0;
  auto visit = [&]() {
    while (shape_[i]) {
      bool final_caret = true;
      for (int k = 1; k <= arity_; ++k)
        if (shape_[i + k]) { final_caret = false; break; }
      if (final_caret) out.push_back({word, leaf_idx + 1});
      stack.push_back({0});
      word.push_back('0');
      ++i;
    }
    ++leaf_idx;
    ++i;
  };
  visit();
  while (!stack.empty()) {
    if (++stack.back().child >= arity_) {
      stack.pop_back();
      if (!word.empty()) word.pop_back();
      continue;
    }
    word.back() = static_cast<char>('0' + stack.back().child);
    visit();
  }
  std::sort(out.begin(), out.end(),
            [](const FinalCaret& a, const FinalCaret& b) { return a.first_leaf_pos < b.first_leaf_pos; });
  return out;
}

Tree Tree::reduce_caret(const std::string& address) const {
  // `address` must be an internal node whose children are all leaves.
  size_t i = 0;
  for (char c : address) {
    if (!shape_[i]) throw CaretError("not a caret: address passes a leaf: " + address);
    int child = c - '0';
    if (child < 0 || child >= arity_) throw CaretError("bad digit in caret address: " + address);
    ++i;
    for (int k = 0; k < child; ++k) i += subtree_size(arity_, shape_, i);
  }
  if (!shape_[i]) throw CaretError("not a caret (a leaf): " + address);
  for (int k = 1; k <= arity_; ++k)
    if (shape_[i + k]) throw CaretError("not a final caret: " + address);
  std::vector<uint8_t> next(shape_);
  next.erase(next.begin() + i + 1, next.begin() + i + 1 + arity_);
  next[i] = 0;
  return Tree(arity_, std::move(next));
}

bool Tree::embeds_in(const Tree& other) const {
  if (arity_ != other.arity_) return false;
  // Parallel preorder walk: whenever *this has a leaf, skip other's subtree.
  size_t i = 0, j = 0;
  long open = 1;
  while (open > 0) {
    --open;
    if (shape_[i]) {
      if (!other.shape_[j]) return false;
      open += arity_;
      ++i;
      ++j;
    } else {
      j += subtree_size(other.arity_, other.shape_, j);
      ++i;
    }
  }
  return true;
}

Tree lcm(const Tree& a, const Tree& b) {
  if (a.arity() != b.arity()) throw ArityError("lcm of trees with different arities");
  const int n = a.arity();
  std::vector<uint8_t> out;
  // Recursive merge over the flat forms.
  struct Merger {
    int n;
    const std::vector<uint8_t>& A;
    const std::vector<uint8_t>& B;
    std::vector<uint8_t>& out;
    void merge(size_t i, size_t j) {
      if (!A[i] && !B[j]) { out.push_back(0); return; }
      out.push_back(1);
      if (A[i] && B[j]) {
        size_t ci = i + 1, cj = j + 1;
        for (int k = 0; k < n; ++k) {
          size_t ni = ci + subtree_size(n, A, ci), nj = cj + subtree_size(n, B, cj);
          merge(ci, cj);
          ci = ni; cj = nj;
        }
      } else if (A[i]) {
        copy(A, i);
      } else {
        copy(B, j);
      }
    }
    void copy(const std::vector<uint8_t>& S, size_t i) {
      size_t sz = subtree_size(n, S, i);
      out.insert(out.end(), S.begin() + i + 1, S.begin() + i + sz);
    }
  } m{n, a.shape(), b.shape(), out};
  m.merge(0, 0);
  return Tree(n, std::move(out));
}

Tree spine(int arity, int depth) {
  check_arity(arity);
  if (depth < 0) throw RangeError("spine depth must be >= 0");
  Tree t(arity);
  for (int d = 0; d < depth; ++d) t = t.expand_at(t.leaf_count());
  return t;
}

Tree base_tree(int arity) {
  check_arity(arity);
  Tree t = Tree(arity).expand("");
  if (arity == 2) {
    t = t.expand("0").expand("1").expand("00").expand("01");
  } else {
    t = t.expand("0").expand("1").expand("2");
  }
  return t;
}

int base_leaf_count(int arity) { return arity == 2 ? 6 : 4 * arity - 3; }

Forest::Forest(int arity, int roots) : arity_(arity) {
  check_arity(arity);
  if (roots < 1) throw ValidationError("forest needs at least one root");
  trees_.assign(roots, Tree(arity));
}

Forest::Forest(int arity, std::vector<Tree> trees) : arity_(arity), trees_(std::move(trees)) {
  check_arity(arity);
  if (trees_.empty()) throw ValidationError("forest needs at least one root");
  for (const Tree& t : trees_)
    if (t.arity() != arity_) throw ArityError("forest tree arity mismatch");
}

const Tree& Forest::tree(int root) const {
  if (root < 1 || root > roots()) throw RangeError("root index out of range");
  return trees_[root - 1];
}

int Forest::leaf_count() const {
  int c = 0;
  for (const Tree& t : trees_) c += t.leaf_count();
  return c;
}

int Forest::caret_count() const {
  int c = 0;
  for (const Tree& t : trees_) c += t.caret_count();
  return c;
}

std::vector<Forest::LeafAddress> Forest::leaves() const {
  std::vector<LeafAddress> out;
  out.reserve(leaf_count());
  for (int r = 1; r <= roots(); ++r)
    for (auto& w : trees_[r - 1].leaves()) out.push_back({r, w});
  return out;
}

int Forest::leaf_position(const LeafAddress& a) const {
  if (a.root < 1 || a.root > roots()) throw RangeError("root index out of range");
  int pos = 0;
  for (int r = 1; r < a.root; ++r) pos += trees_[r - 1].leaf_count();
  return pos + trees_[a.root - 1].leaf_position(a.word);
}

Forest::LeafAddress Forest::leaf_address(int position) const {
  if (position < 1 || position > leaf_count()) throw RangeError("leaf position out of range");
  int r = 1;
  while (position > trees_[r - 1].leaf_count()) {
    position -= trees_[r - 1].leaf_count();
    ++r;
  }
  return {r, trees_[r - 1].leaf_address(position)};
}

Forest Forest::expand_at(int pos) const { return expand(leaf_address(pos)); }

Forest Forest::expand(const LeafAddress& a) const {
  std::vector<Tree> next(trees_);
  next[a.root - 1] = next[a.root - 1].expand(a.word);
  return Forest(arity_, std::move(next));
}

std::vector<Forest::FinalCaret> Forest::final_carets() const {
  std::vector<FinalCaret> out;
  int offset = 0;
  for (int r = 1; r <= roots(); ++r) {
    for (auto& c : trees_[r - 1].final_carets())
      out.push_back({r, c.address, offset + c.first_leaf_pos});
    offset += trees_[r - 1].leaf_count();
  }
  return out;
}

Forest Forest::reduce_caret(const FinalCaret& c) const {
  if (c.root < 1 || c.root > roots()) throw RangeError("root index out of range");
  std::vector<Tree> next(trees_);
  next[c.root - 1] = next[c.root - 1].reduce_caret(c.address);
  return Forest(arity_, std::move(next));
}

Forest lcm(const Forest& a, const Forest& b) {
  if (a.arity() != b.arity()) throw ArityError("lcm of forests with different arities");
  if (a.roots() != b.roots()) throw ValidationError("lcm of forests with different root counts");
  std::vector<Tree> out;
  out.reserve(a.roots());
  for (int r = 0; r < a.roots(); ++r) out.push_back(lcm(a.trees()[r], b.trees()[r]));
  return Forest(a.arity(), std::move(out));
}

}  // namespace bvn
