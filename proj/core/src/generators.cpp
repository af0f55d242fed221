#include "bvn/generators.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <sstream>

#include "bvn/text.hpp"

namespace bvn {

GeneratorWord inverse(const GeneratorWord& w) {
  GeneratorWord out;
  out.tokens.assign(w.tokens.rbegin(), w.tokens.rend());
  for (auto& t : out.tokens) t.second = -t.second;
  return out;
}

GeneratorWord concat(const GeneratorWord& a, const GeneratorWord& b) {
  GeneratorWord out = a;
  out.tokens.insert(out.tokens.end(), b.tokens.begin(), b.tokens.end());
  return out;
}

GeneratorWord simplify(const GeneratorWord& w) {
  GeneratorWord out;
  for (auto& t : w.tokens) {
    if (!out.tokens.empty() && out.tokens.back().first == t.first &&
        out.tokens.back().second == -t.second)
      out.tokens.pop_back();
    else
      out.tokens.push_back(t);
  }
  return out;
}

std::string format_word(const GeneratorWord& w) {
  std::ostringstream os;
  for (size_t i = 0; i < w.tokens.size(); ++i) {
    if (i) os << ' ';
    os << w.tokens[i].first;
    if (w.tokens[i].second < 0) os << "^-1";
  }
  return os.str();
}

GeneratorWord parse_word(const std::string& text) {
  GeneratorWord out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    int sign = 1;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      sign = -1;
      tok = tok.substr(0, tok.size() - 3);
    }
    out.tokens.push_back({tok, sign});
  }
  return out;
}

namespace {

Element tuple1(const SpecPtr& spec, const Tree& dom, BraidWord braid,
               std::vector<LabelWord> labels, const Tree& ran) {
  return make_element(spec, Forest(spec->arity, {dom}), std::move(braid), std::move(labels),
                      Forest(spec->arity, {ran}));
}

Element braid_only(const SpecPtr& spec, const Tree& dom, BraidWord braid, const Tree& ran) {
  std::vector<LabelWord> labels(dom.leaf_count());
  return tuple1(spec, dom, std::move(braid), std::move(labels), ran);
}

// Index of the S_H generator whose word is braid-equal to sigma_i; -1 if none.
int sigma_label_index(const SubgroupSpec& spec, int i) {
  const BraidWord target(spec.arity, {i});
  for (int k = 0; k < spec.generator_count(); ++k)
    if (equal(spec.gen_words[k], target)) return k;
  return -1;
}

// All full n-ary trees with the given caret count, by recursive composition
// of the root's children.
std::vector<Tree> all_trees(int arity, int carets) {
  if (carets == 0) return {Tree(arity)};
  std::vector<std::vector<Tree>> memo(carets + 1);
  memo[0] = {Tree(arity)};
  for (int c = 1; c <= carets; ++c) {
    std::vector<Tree> acc;
    // Children caret counts summing to c-1.
    std::vector<int> parts(arity, 0);
    std::function<void(int, int, std::vector<std::vector<uint8_t>>&)> rec =
        [&](int k, int left, std::vector<std::vector<uint8_t>>& chosen) {
          if (k == arity - 1) {
            parts[k] = left;
            std::vector<uint8_t> shape{1};
            std::vector<std::vector<uint8_t>> kid(arity);
            std::function<void(int)> pick = [&](int j) {
              if (j == arity) {
                std::vector<uint8_t> s{1};
                for (auto& ks : kid) s.insert(s.end(), ks.begin(), ks.end());
                acc.push_back(Tree(arity, s));
                return;
              }
              for (const Tree& t : memo[parts[j]]) {
                kid[j] = t.shape();
                pick(j + 1);
              }
            };
            pick(0);
            return;
          }
          for (int take = 0; take <= left; ++take) {
            parts[k] = take;
            rec(k + 1, left - take, chosen);
          }
        };
    std::vector<std::vector<uint8_t>> scratch;
    rec(0, c - 1, scratch);
    memo[c] = acc;
  }
  return memo[carets];
}

}  // namespace

GeneratorTable::GeneratorTable(int n, SpecPtr spec) : n_(n), spec_(std::move(spec)) {
  if (!spec_) throw ValidationError("generator table needs a subgroup spec");
  if (spec_->arity != n) throw ValidationError("generator table arity differs from spec");
  m_ = base_leaf_count(n);
  depth_ = base_tree(n).caret_count();
  build();
}

const Element& GeneratorTable::at(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) throw RangeError("unknown generator: " + name);
  return it->second;
}

std::string GeneratorTable::e_name(const Tree& t) const { return "e_" + format_tree(t, false); }

const Element& GeneratorTable::ensure_e(const Tree& t) {
  if (t.leaf_count() != m_) throw ValidationError("e_T needs a tree with m(n) leaves");
  const std::string name = e_name(t);
  auto it = entries_.find(name);
  if (it != entries_.end()) return it->second;
  auto [pos, ok] = entries_.emplace(name, braid_only(spec_, t, BraidWord(m_, {}), base_tree(n_)));
  return pos->second;
}

void GeneratorTable::verify_entry(const std::string& name, const Element& got,
                                  const Element& want) const {
  if (!equal(got, want))
    throw InternalError("generator identity failed verification: " + name);
}

void GeneratorTable::build() {
  const Tree R = Tree(n_).expand("");
  const Tree Tn = base_tree(n_);

  // x generators of F_n.
  {
    Tree dom = R.expand(std::string(1, '0' + n_ - 1));
    for (int i = 0; i <= n_ - 2; ++i)
      entries_.emplace("x" + std::to_string(i),
                       braid_only(spec_, dom, BraidWord(dom.leaf_count(), {}),
                                  R.expand(std::string(1, '0' + i))));
    std::string last(1, '0' + n_ - 1);
    Tree dom2 = dom.expand(last + last);
    Tree ran2 = dom.expand(last + "0");
    entries_.emplace("x" + std::to_string(n_ - 1),
                     braid_only(spec_, dom2, BraidWord(dom2.leaf_count(), {}), ran2));
  }

  // h generators over the base tree.
  for (int i = 1; i <= m_ - 1; ++i)
    entries_.emplace("h" + std::to_string(i), braid_only(spec_, Tn, BraidWord(m_, {i}), Tn));

  // g generators, one per subgroup generator.
  for (int k = 0; k < spec_->generator_count(); ++k) {
    std::vector<LabelWord> labels(n_);
    labels[0].letters.push_back({k, 1});
    entries_.emplace("g_" + spec_->gen_names[k],
                     tuple1(spec_, R, BraidWord(n_, {}), labels, R));
  }

  // e generators, eager for n <= 3.
  if (n_ <= 3)
    for (const Tree& t : all_trees(n_, depth_)) ensure_e(t);

  // Auxiliary v_i / w / z elements whenever S_H covers sigma_i.
  for (int i = 1; i <= n_ - 1; ++i) {
    const int li = sigma_label_index(*spec_, i);
    if (li < 0) continue;
    auto s_at = [&](std::vector<int> positions) {
      std::vector<LabelWord> labels(m_);
      for (int p : positions) labels[p - 1].letters.push_back({li, 1});
      return labels;
    };
    std::vector<int> first_block(n_);
    std::iota(first_block.begin(), first_block.end(), 1);
    entries_.emplace("v" + std::to_string(i),
                     tuple1(spec_, Tn, BraidWord(m_, {i}), s_at(first_block), Tn));
    for (int k = 0; k <= i; ++k)
      entries_.emplace("w" + std::to_string(i) + "_" + std::to_string(k),
                       tuple1(spec_, Tn, BraidWord(m_, {}), s_at({k + 1}), Tn));
    std::vector<int> tail;
    for (int q = i + 2; q <= n_; ++q) tail.push_back(q);
    entries_.emplace("z" + std::to_string(i),
                     tuple1(spec_, Tn, BraidWord(m_, {i}), s_at(tail), Tn));
  }

  // The 2n-element set.
  for (int i = 0; i <= n_ - 1; ++i) theorem_set_.push_back("x" + std::to_string(i));
  bool all_sigma = true;
  std::vector<std::string> gs;
  for (int i = 1; i <= n_ - 1; ++i) {
    int li = sigma_label_index(*spec_, i);
    if (li < 0)
      all_sigma = false;
    else
      gs.push_back("g_" + spec_->gen_names[li]);
  }
  if (all_sigma && n_ >= 2) {
    theorem_set_.push_back("h" + std::to_string(m_ - 1));
    for (auto& g : gs) theorem_set_.push_back(g);
  } else if (spec_->generator_count() == 0) {
    for (int i = 1; i <= n_ - 1; ++i) theorem_set_.push_back("h" + std::to_string(i));
    theorem_set_.push_back("h" + std::to_string(m_ - 1));
  } else {
    // Parabolic-style spec: keep h_i for uncovered sigma_i, g's for covered.
    for (int i = 1; i <= n_ - 1; ++i) {
      int li = sigma_label_index(*spec_, i);
      if (li < 0)
        theorem_set_.push_back("h" + std::to_string(i));
      else
        theorem_set_.push_back("g_" + spec_->gen_names[li]);
    }
    theorem_set_.push_back("h" + std::to_string(m_ - 1));
  }
}

GeneratorTable standard_table(int n, SpecPtr spec) { return GeneratorTable(n, std::move(spec)); }

Element evaluate(const GeneratorWord& w, const GeneratorTable& table) {
  Element acc = identity_element(table.spec(), 1);
  for (auto& [name, sign] : w.tokens) {
    const Element& g = table.at(name);
    acc = reduce(compose(acc, sign > 0 ? g : inverse(g)));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// y-family: Psi(T) = (spine, Id, T) peeling and the y -> x reduction.

Element GeneratorTable::y_element(int k) const {
  Tree upper = spine(n_, k + 2);
  Tree base = spine(n_, k + 1);
  Tree lower = base.expand_at(k + 1);
  return braid_only(spec_, upper, BraidWord(upper.leaf_count(), {}), lower);
}

std::vector<int> GeneratorTable::psi_peel(const Tree& t) const {
  std::vector<int> ys;
  Tree cur = t;
  while (cur.caret_count() > 0) {
    auto fc = cur.final_carets();
    const auto& c = fc.front();  // leftmost
    if (c.first_leaf_pos != cur.leaf_count() - n_ + 1) ys.push_back(c.first_leaf_pos - 1);
    cur = cur.reduce_caret(c.address);
  }
  return ys;
}

GeneratorWord GeneratorTable::y_word_to_x(const std::vector<int>& ys) {
  GeneratorWord out;
  std::function<void(int, int)> emit = [&](int k, int sign) {
    if (k <= n_ - 1) {
      out.tokens.push_back({"x" + std::to_string(k), sign});
      return;
    }
    // y_k = y_0 y_{k-n+1} y_0^-1
    if (sign > 0) {
      emit(0, 1);
      emit(k - n_ + 1, 1);
      emit(0, -1);
    } else {
      emit(0, 1);
      emit(k - n_ + 1, -1);
      emit(0, -1);
    }
  };
  for (int k : ys) emit(k, 1);
  return out;
}

GeneratorWord decompose_F(const Element& v, GeneratorTable& table) {
  if (v.roots() != 1) throw ValidationError("decompose_F handles r = 1 only");
  if (!is_trivial(v.braid)) throw ValidationError("decompose_F needs a trivial braid");
  for (auto& l : v.labels)
    if (!label_trivial(l, *v.spec)) throw ValidationError("decompose_F needs trivial labels");
  Element r = reduce(v);
  const Tree A = r.domain.trees()[0];
  const Tree B = r.range.trees()[0];
  GeneratorWord wa = table.y_word_to_x(table.psi_peel(A));
  GeneratorWord wb = table.y_word_to_x(table.psi_peel(B));
  GeneratorWord out = simplify(concat(inverse(wa), wb));
  return out;
}

// ---------------------------------------------------------------------------
// Verified index-reduction rewrites.

namespace {

// Word for v_i: the g-generator expanded to the base tree pair (n >= 3), or
// its x0-conjugate for n = 2.
GeneratorWord v_word(GeneratorTable& t, int i, const std::string& gname) {
  GeneratorWord w;
  if (t.arity() >= 3) {
    w.tokens.push_back({gname, 1});
  } else {
    w.tokens.push_back({"x0", -1});
    w.tokens.push_back({gname, 1});
    w.tokens.push_back({"x0", 1});
  }
  return w;
}

}  // namespace

const GeneratorWord& GeneratorTable::rewrite_h_small(int i) {
  auto hit = small_cache_.find(i);
  if (hit != small_cache_.end()) return hit->second;
  if (i < 1 || i > n_ - 1) throw RangeError("rewrite_h_small: index out of 1..n-1");
  const int li = sigma_label_index(*spec_, i);
  if (li < 0) throw SubgroupError("rewrite_h_small: S_H has no generator equal to sigma_" +
                                  std::to_string(i));
  const std::string gname = "g_" + spec_->gen_names[li];
  const std::string si = std::to_string(i);
  const std::string e_spine = e_name(spine(n_, depth_));

  // Claim machinery: words for w_i^(k) and z_i, each verified against the
  // directly-built element.
  std::vector<GeneratorWord> w_words(i + 1);
  {
    GeneratorWord w0;
    w0.tokens = {{e_spine, -1}, {gname, 1}, {e_spine, 1}};
    verify_entry("w" + si + "_0", evaluate(w0, *this), at("w" + si + "_0"));
    w_words[0] = w0;
  }
  // r(k) = z_k ... z_1 needs z_q for q < i, built recursively through the
  // same machinery (or h_q tokens when sigma_q is not in S_H, per the
  // parabolic variant).
  std::function<GeneratorWord(int)> z_word = [&](int q) -> GeneratorWord {
    GeneratorWord zw;
    if (sigma_label_index(*spec_, q) < 0) {
      zw.tokens.push_back({"h" + std::to_string(q), 1});
      return zw;
    }
    const int lq = sigma_label_index(*spec_, q);
    const std::string gq = "g_" + spec_->gen_names[lq];
    const std::string sq = std::to_string(q);
    std::vector<GeneratorWord> wq(q + 1);
    GeneratorWord w0;
    w0.tokens = {{e_spine, -1}, {gq, 1}, {e_spine, 1}};
    wq[0] = w0;
    for (int k = 1; k <= q; ++k) {
      if (k < q) {
        GeneratorWord rk;
        for (int p = k; p >= 1; --p) rk = concat(rk, z_word(p));
        wq[k] = concat(concat(rk, wq[0]), inverse(rk));
      } else {
        GeneratorWord vq = v_word(*this, q, gq);
        wq[k] = concat(concat(vq, wq[k - 1]), inverse(vq));
      }
      verify_entry("w" + sq + "_" + std::to_string(k), evaluate(wq[k], *this),
                   at("w" + sq + "_" + std::to_string(k)));
    }
    zw = v_word(*this, q, gq);
    for (int k = 0; k <= q; ++k) zw = concat(zw, inverse(wq[k]));
    verify_entry("z" + sq, evaluate(zw, *this), at("z" + sq));
    return zw;
  };

  verify_entry("v" + si, evaluate(v_word(*this, i, gname), *this), at("v" + si));
  for (int k = 1; k <= i; ++k) {
    if (k < i) {
      GeneratorWord rk;
      for (int p = k; p >= 1; --p) rk = concat(rk, z_word(p));
      w_words[k] = concat(concat(rk, w_words[0]), inverse(rk));
    } else {
      GeneratorWord vi = v_word(*this, i, gname);
      w_words[k] = concat(concat(vi, w_words[k - 1]), inverse(vi));
    }
    verify_entry("w" + si + "_" + std::to_string(k), evaluate(w_words[k], *this),
                 at("w" + si + "_" + std::to_string(k)));
  }

  GeneratorWord out;
  if (i == n_ - 1) {
    out = z_word(i);
  } else {
    // h_i = h_{i+1} w_i^(i-1) z_i h_{i+1} z_i^-1 (w_i^(i-1))^-1 h_{i+1}^-1
    GeneratorWord hnext;
    if (sigma_label_index(*spec_, i + 1) >= 0 && i + 1 <= n_ - 1)
      hnext = rewrite_h_small(i + 1);
    else
      hnext.tokens.push_back({"h" + std::to_string(i + 1), 1});
    GeneratorWord zi = z_word(i);
    out = hnext;
    out = concat(out, w_words[i - 1]);
    out = concat(out, zi);
    out = concat(out, hnext);
    out = concat(out, inverse(zi));
    out = concat(out, inverse(w_words[i - 1]));
    out = concat(out, inverse(hnext));
  }
  out = simplify(out);
  verify_entry("h" + si, evaluate(out, *this), at("h" + si));
  return small_cache_.emplace(i, std::move(out)).first->second;
}

const GeneratorWord& GeneratorTable::rewrite_h_large(int i) {
  auto hit = large_cache_.find(i);
  if (hit != large_cache_.end()) return hit->second;
  if (i < n_ || i > m_ - 2)
    throw RangeError("rewrite_h_large: index " + std::to_string(i) + " outside n..m-2");

  const Tree Tn = base_tree(n_);
  GeneratorWord out;
  if (i == n_) {
    // h_n = e_{T1}^-1 h_1 e_{T2} h_1^-1 ... h_{n-1}^-1 with T1, T2 obtained
    // from T(n) by trading its rightmost final caret for one under the first
    // or second leaf.
    auto fc = Tn.final_carets();
    Tree stripped = Tn.reduce_caret(fc.back().address);
    Tree T1 = stripped.expand_at(1);
    Tree T2 = stripped.expand_at(2);
    ensure_e(T1);
    ensure_e(T2);
    out.tokens.push_back({e_name(T1), -1});
    out.tokens.push_back({"h1", 1});
    out.tokens.push_back({e_name(T2), 1});
    for (int j = 1; j <= n_ - 1; ++j) out.tokens.push_back({"h" + std::to_string(j), -1});
  } else {
    // Shift: h_i = e_{T''}^-1 e_{T'} h_{i-n+1} e_{T'}^-1 e_{T''}.
    Tree Tp = Tn;
    if (n_ >= 4) {
      auto fc = Tn.final_carets();
      Tp = Tn.reduce_caret(fc.back().address);
      Tp = Tp.expand_at(Tp.leaf_count());
    }
    auto fcp = Tp.final_carets();
    Tree Tpp = Tp.reduce_caret(fcp.back().address).expand_at(1);
    ensure_e(Tpp);
    out.tokens.push_back({e_name(Tpp), -1});
    if (!(Tp == Tn)) {
      ensure_e(Tp);
      out.tokens.push_back({e_name(Tp), 1});
    }
    const int j = i - n_ + 1;
    if (j >= n_) {
      out = concat(out, rewrite_h_large(j));
    } else {
      out.tokens.push_back({"h" + std::to_string(j), 1});
    }
    if (!(Tp == Tn)) out.tokens.push_back({e_name(Tp), -1});
    out.tokens.push_back({e_name(Tpp), 1});
  }
  out = simplify(out);
  verify_entry("h" + std::to_string(i), evaluate(out, *this), at("h" + std::to_string(i)));
  return large_cache_.emplace(i, std::move(out)).first->second;
}

// ---------------------------------------------------------------------------
// Decomposition.

namespace {

// Builds a depth-d tree with exactly three final carets, whose blocks include
// the prescribed ones (disjoint block starts, 1-based).
Tree tree_with_three_final_carets(int n, int leaves, std::vector<int> block_starts) {
  std::sort(block_starts.begin(), block_starts.end());
  auto overlaps = [&](int start) {
    for (int b : block_starts)
      if (std::abs(b - start) < n) return true;
    return false;
  };
  // Fill up to three blocks, preferring the tail so the last spine node is
  // never all-leaves.
  for (int cand = leaves - n + 1; static_cast<int>(block_starts.size()) < 3 && cand >= 1; --cand)
    if (!overlaps(cand)) {
      block_starts.push_back(cand);
      std::sort(block_starts.begin(), block_starts.end());
    }
  if (block_starts.size() != 3) throw DepthError("tree too small for three final carets");

  // Units: blocks and single leaves, in position order.
  struct Unit { bool block; };
  std::vector<Unit> units;
  for (int pos = 1; pos <= leaves;) {
    bool b = std::find(block_starts.begin(), block_starts.end(), pos) != block_starts.end();
    units.push_back({b});
    pos += b ? n : 1;
  }
  const int K = static_cast<int>(units.size());
  if ((K - 1) % (n - 1) != 0 || K < n) throw DepthError("unit count does not fit a spine");

  // Rightmost-spine over the units; block units are single carets.
  std::function<std::vector<uint8_t>(int, int)> build = [&](int from, int count) {
    std::vector<uint8_t> shape{1};
    if (count == n) {
      for (int k = 0; k < n; ++k) {
        if (units[from + k].block) {
          shape.push_back(1);
          shape.insert(shape.end(), n, 0);
        } else {
          shape.push_back(0);
        }
      }
      return shape;
    }
    for (int k = 0; k < n - 1; ++k) {
      if (units[from + k].block) {
        shape.push_back(1);
        shape.insert(shape.end(), n, 0);
      } else {
        shape.push_back(0);
      }
    }
    auto rest = build(from + n - 1, count - (n - 1));
    shape.insert(shape.end(), rest.begin(), rest.end());
    return shape;
  };
  Tree t(n, build(0, K));
  if (static_cast<int>(t.final_carets().size()) != 3)
    throw InternalError("three-final-caret construction failed");
  return t;
}

// Factorization of a label-free element through a three-final-caret tree:
// factors of smaller depth whose product is (A, w, Id, B).
std::vector<Element> peel_braid_part(const SpecPtr& spec, const Tree& A, const BraidWord& w,
                                     const Tree& B) {
  const int n = spec->arity;
  const int l = A.leaf_count();
  const int d = A.caret_count();
  auto fca = A.final_carets();
  auto fcb = B.final_carets();
  // Prefer caret pairs whose leaf blocks are disjoint and leave room for the
  // third final caret, so both ribbons are trivial; otherwise align the
  // domain caret and ribbon the range one.
  auto third_fits = [&](int a, int b) {
    for (int cand = l - n + 1; cand >= 1; --cand)
      if (std::abs(cand - a) >= n && std::abs(cand - b) >= n) return true;
    return false;
  };
  int P1 = fca.front().first_leaf_pos;
  int P2 = fcb.front().first_leaf_pos;
  bool disjoint = false;
  for (auto& ca : fca) {
    for (auto& cb : fcb)
      if (std::abs(ca.first_leaf_pos - cb.first_leaf_pos) >= n &&
          third_fits(ca.first_leaf_pos, cb.first_leaf_pos)) {
        P1 = ca.first_leaf_pos;
        P2 = cb.first_leaf_pos;
        disjoint = true;
      }
    if (disjoint) break;
  }
  std::vector<Element> out;
  Tree T3(n);
  BraidWord r1(l, {}), r2(l, {});
  if (disjoint) {
    T3 = tree_with_three_final_carets(n, l, {P1, P2});
  } else {
    T3 = tree_with_three_final_carets(n, l, {P1});
    // Ribbon from another final caret of T3 to c2.
    int q4 = -1;
    for (auto& c : T3.final_carets())
      if (c.first_leaf_pos != P1 &&
          (q4 < 0 || std::abs(c.first_leaf_pos - P2) < std::abs(q4 - P2)))
        q4 = c.first_leaf_pos;
    r2 = ribbon_word(l, q4, P2, n);
  }
  const BraidWord mid = compose(compose(inverse(r1), w), inverse(r2));
  Element fa = reduce(braid_only(spec, A, r1, T3));
  if (depth(fa) >= d) throw InternalError("peel factor did not lose depth");
  out.push_back(std::move(fa));
  for (int x : mid.letters) {
    Element f = reduce(braid_only(spec, T3, BraidWord(l, {x}), T3));
    if (depth(f) >= d) throw InternalError("peel sigma-factor did not lose depth");
    out.push_back(std::move(f));
  }
  Element fc = reduce(braid_only(spec, T3, r2, B));
  if (depth(fc) >= d) throw InternalError("peel factor did not lose depth");
  out.push_back(std::move(fc));
  return out;
}

BraidWord gamma_word(int l, int j) {
  std::vector<int> letters;
  for (int k = j - 1; k >= 1; --k) letters.push_back(k);
  return BraidWord(l, std::move(letters));
}

}  // namespace

std::vector<Element> decompose_step(const Element& v0, GeneratorTable& table) {
  Element v = reduce(v0);
  if (v.roots() != 1) throw ValidationError("decompose_step handles r = 1 only");
  const int d = depth(v);
  if (d <= table.base_depth()) throw DepthError("decompose_step needs depth > depth(T(n))");
  const SpecPtr& spec = v.spec;
  const int n = v.arity();
  const int l = v.strands();
  const Tree A = v.domain.trees()[0];
  const Tree B = v.range.trees()[0];
  const Tree Sd = spine(n, A.caret_count());
  const Tree R = Tree(n).expand("");

  std::vector<Element> out =
      peel_braid_part(spec, A, v.braid, B);
  for (int j = 1; j <= l; ++j) {
    for (auto [gi, sgn] : v.labels[j - 1].letters) {
      auto part1 = peel_braid_part(spec, B, gamma_word(l, j), Sd);
      out.insert(out.end(), part1.begin(), part1.end());
      std::vector<LabelWord> labels(n);
      labels[0].letters.push_back({gi, sgn});
      out.push_back(tuple1(spec, R, BraidWord(n, {}), labels, R));
      auto part2 = peel_braid_part(spec, Sd, inverse(gamma_word(l, j)), B);
      out.insert(out.end(), part2.begin(), part2.end());
    }
  }
  return out;
}

namespace {

// Base case: depth <= depth(T(n)). Expand to m leaves and read the word off
// the (T(n), beta, lambda, T(n)) middle.
GeneratorWord decompose_base(const Element& v0, GeneratorTable& table) {
  Element v = v0;
  const int m = table.base_leaves();
  const Tree target = base_tree(table.arity());
  while (v.strands() < m) {
    // Steer the domain toward T(n) when it embeds there, so generators come
    // back as themselves; otherwise expand anywhere.
    int pick = v.strands();
    const auto leaves = v.domain.leaves();
    for (int j = 1; j <= static_cast<int>(leaves.size()); ++j) {
      bool internal;
      try {
        internal = target.node_is_internal(leaves[j - 1].word);
      } catch (const AddressError&) {
        internal = false;
      }
      if (internal) {
        pick = j;
        break;
      }
    }
    v = expand_at_domain_leaf(v, pick);
  }
  if (v.strands() != m) throw InternalError("decompose_base: leaf count overshoot");
  const Tree A = v.domain.trees()[0];
  const Tree B = v.range.trees()[0];
  const Tree Tn = base_tree(table.arity());
  const std::string e_spine = table.e_name(spine(table.arity(), table.base_depth()));
  table.ensure_e(spine(table.arity(), table.base_depth()));

  GeneratorWord w;
  if (!(A == Tn)) {
    table.ensure_e(A);
    w.tokens.push_back({table.e_name(A), 1});
  }
  for (int x : v.braid.letters) w.tokens.push_back({"h" + std::to_string(std::abs(x)), x > 0 ? 1 : -1});
  for (int j = 1; j <= m; ++j) {
    for (auto [gi, sgn] : v.labels[j - 1].letters) {
      for (int k = j - 1; k >= 1; --k) w.tokens.push_back({"h" + std::to_string(k), 1});
      w.tokens.push_back({e_spine, -1});
      w.tokens.push_back({"g_" + table.spec()->gen_names[gi], sgn});
      w.tokens.push_back({e_spine, 1});
      for (int k = 1; k <= j - 1; ++k) w.tokens.push_back({"h" + std::to_string(k), -1});
    }
  }
  if (!(B == Tn)) {
    table.ensure_e(B);
    w.tokens.push_back({table.e_name(B), -1});
  }
  return w;
}

}  // namespace

GeneratorWord decompose(const Element& v0, GeneratorTable& table) {
  Element v = reduce(v0);
  if (v.roots() != 1) throw ValidationError("decompose handles r = 1 only");
  if (depth(v) <= table.base_depth()) return simplify(decompose_base(v, table));
  GeneratorWord out;
  for (const Element& f : decompose_step(v, table)) out = concat(out, decompose(f, table));
  return simplify(out);
}

GeneratorWord decompose_to_basis(const Element& v, GeneratorTable& table) {
  GeneratorWord base = decompose(v, table);
  const int n = table.arity();
  const int m = table.base_leaves();
  GeneratorWord out;
  std::function<void(const std::string&, int)> expand_token = [&](const std::string& name,
                                                                  int sign) {
    auto emit_word = [&](const GeneratorWord& w) {
      const GeneratorWord ww = sign > 0 ? w : inverse(w);
      for (auto& t : ww.tokens) expand_token(t.first, t.second);
    };
    if (name.size() > 2 && name[0] == 'e' && name[1] == '_') {
      // e_T = Psi(T)^-1 Psi(T(n)) over x's.
      Tree t = parse_tree(name.substr(2), n);
      GeneratorWord wt = table.y_word_to_x(table.psi_peel(t));
      GeneratorWord wb = table.y_word_to_x(table.psi_peel(base_tree(n)));
      emit_word(concat(inverse(wt), wb));
      return;
    }
    if (name[0] == 'h') {
      const int i = std::stoi(name.substr(1));
      if (i == m - 1) {
        out.tokens.push_back({name, sign});
        return;
      }
      if (i >= n) {
        emit_word(table.rewrite_h_large(i));
        return;
      }
      if (sigma_label_index(*table.spec(), i) >= 0) {
        emit_word(table.rewrite_h_small(i));
        return;
      }
      out.tokens.push_back({name, sign});
      return;
    }
    out.tokens.push_back({name, sign});
  };
  for (auto& [name, sign] : base.tokens) expand_token(name, sign);
  return simplify(out);
}

// ---------------------------------------------------------------------------
// Parabolic tables.

GeneratorTable parabolic_table(int n, const std::vector<int>& X, const BraidWord& alpha) {
  for (int i : X)
    if (i < 1 || i > n - 1) throw ValidationError("parabolic X must be Artin indices of B_n");
  if (alpha.strands != n) throw ValidationError("alpha must be a braid on n strands");
  const bool conj = !is_trivial(alpha);
  std::vector<int> xs = X;
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  SubgroupSpec spec;
  spec.arity = n;
  if (!conj) {
    spec.name = "A_X";
    for (int i : xs) spec.add_generator("s" + std::to_string(i), BraidWord(n, {i}));
  } else {
    spec.name = "A_X_conj";
    for (int i : xs)
      spec.add_generator("a" + std::to_string(i),
                         compose(compose(inverse(alpha), BraidWord(n, {i})), alpha));
  }
  auto sp = std::make_shared<SubgroupSpec>(std::move(spec));
  GeneratorTable table(n, sp);
  if (!conj) return table;

  // Conjugated members: h_alpha wraps everything; g members get the extra
  // g_alpha sandwich so their labels land in alpha^-1 A_X alpha.
  const Tree Tn = base_tree(n);
  const Tree R = Tree(n).expand("");
  const int m = base_leaf_count(n);
  Element h_alpha = braid_only(sp, Tn, BraidWord(m, alpha.letters), Tn);
  auto conj_plain = [&](const Element& e) {
    return reduce(compose(compose(inverse(h_alpha), e), h_alpha));
  };
  for (int i = 0; i <= n - 1; ++i) {
    std::string nm = "x" + std::to_string(i);
    table.entries().at(nm) = conj_plain(table.at(nm));
  }
  for (int i = 1; i <= m - 1; ++i) {
    std::string nm = "h" + std::to_string(i);
    table.entries().at(nm) = conj_plain(table.at(nm));
  }

  // Build g members over an extended spec carrying alpha and the raw
  // sigma_i labels, then re-spell the labels over S_H.
  SubgroupSpec extspec = *sp;
  extspec.name = sp->name + "+aux";
  extspec.add_generator("alpha", alpha);
  for (int i : xs) extspec.add_generator("raw" + std::to_string(i), BraidWord(n, {i}));
  auto ext = std::make_shared<SubgroupSpec>(std::move(extspec));

  auto over_ext = [&](const Element& e) {
    return make_element(ext, e.domain, e.braid, e.labels, e.range);
  };
  std::vector<LabelWord> galab(n);
  galab[0].letters.push_back({ext->index_of("alpha"), 1});
  Element g_alpha = make_element(ext, Forest(n, {R}), BraidWord(n, {}), galab, Forest(n, {R}));
  Element h_alpha_ext = over_ext(h_alpha);

  for (int i : xs) {
    std::vector<LabelWord> gl(n);
    gl[0].letters.push_back({ext->index_of("raw" + std::to_string(i)), 1});
    Element g_raw = make_element(ext, Forest(n, {R}), BraidWord(n, {}), gl, Forest(n, {R}));
    Element member = reduce(compose(
        compose(compose(compose(inverse(h_alpha_ext), inverse(g_alpha)), g_raw), g_alpha),
        h_alpha_ext));
    // Re-spell every label as a single S_H letter (or the empty word).
    std::vector<LabelWord> labels(member.labels.size());
    for (size_t q = 0; q < member.labels.size(); ++q) {
      const LabelWord& lw = member.labels[q];
      if (label_trivial(lw, *ext)) continue;
      const BraidWord want = expand(lw, *ext);
      bool found = false;
      for (int k = 0; k < sp->generator_count() && !found; ++k)
        for (int sgn : {1, -1}) {
          BraidWord cand = sgn > 0 ? sp->gen_words[k] : inverse(sp->gen_words[k]);
          if (equal(want, cand)) {
            labels[q].letters.push_back({k, sgn});
            found = true;
            break;
          }
        }
      if (!found)
        throw ValidationError("conjugated g member has a label outside the subgroup spelling");
    }
    table.entries().at("g_a" + std::to_string(i)) =
        make_element(sp, member.domain, member.braid, labels, member.range);
  }
  return table;
}

}  // namespace bvn
