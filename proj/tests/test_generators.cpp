#include <doctest.h>

#include <memory>
#include <random>

#include "bvn/generators.hpp"
#include "bvn/text.hpp"

using namespace bvn;

namespace {

SpecPtr spec_b(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n)); }
SpecPtr spec_id(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n)); }

}  // namespace

TEST_CASE("word text form round trips") {
  GeneratorWord w = parse_word("e_((..).) h2 e_((..).)^-1 g_s1");
  CHECK(format_word(w) == "e_((..).) h2 e_((..).)^-1 g_s1");
  CHECK(simplify(parse_word("h1 h1^-1")).empty());
  CHECK(format_word(inverse(parse_word("h1 h2"))) == "h2^-1 h1^-1");
}

TEST_CASE("table families and counts for n=2 and n=3") {
  {
    GeneratorTable t(2, spec_b(2));
    CHECK(t.base_leaves() == 6);
    CHECK(t.base_depth() == 5);
    CHECK(t.has("x0"));
    CHECK(t.has("x1"));
    CHECK(t.has("h5"));
    CHECK(t.has("g_s1"));
    CHECK(t.theorem_set() == std::vector<std::string>{"x0", "x1", "h5", "g_s1"});
    int e_count = 0;
    for (auto& [k, v] : t.entries()) e_count += k.rfind("e_", 0) == 0;
    CHECK(e_count == 42);  // binary trees with five carets
  }
  {
    GeneratorTable t(3, spec_b(3));
    CHECK(t.base_leaves() == 9);
    CHECK(t.base_depth() == 4);
    CHECK(t.theorem_set().size() == 6);
    int e_count = 0;
    for (auto& [k, v] : t.entries()) e_count += k.rfind("e_", 0) == 0;
    CHECK(e_count == 55);  // ternary trees with four carets
  }
  {
    GeneratorTable t(2, spec_id(2));
    CHECK(t.theorem_set() == std::vector<std::string>{"x0", "x1", "h1", "h5"});
  }
}

TEST_CASE("every table entry validates and meets the depth bound") {
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    for (auto& [name, e] : t.entries()) {
      CHECK(depth(e) <= t.base_depth());
      if (name.rfind("e_", 0) == 0 || name[0] == 'h')
        CHECK(depth(e) == t.base_depth());
    }
  }
}

TEST_CASE("the theorem set's h entry reduces to the small tree pair") {
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    // (R', sigma_{2n-2}, Id, R') with R' = R[n-1] (n=2) or R[2] (n>2)
    Tree R = Tree(n).expand("");
    Tree Rp = R.expand(std::string(1, '0' + (n == 2 ? 1 : 2)));
    Element small = make_element(spec_b(n), Forest(n, {Rp}),
                                 BraidWord(Rp.leaf_count(), {2 * n - 2}),
                                 std::vector<LabelWord>(Rp.leaf_count()), Forest(n, {Rp}));
    CHECK(equal(t.at("h" + std::to_string(t.base_leaves() - 1)), small));
  }
}

TEST_CASE("evaluate folds left to right with the identity as base") {
  GeneratorTable t(2, spec_b(2));
  CHECK(is_identity_shaped(evaluate(GeneratorWord{}, t)));
  CHECK(is_identity_shaped(evaluate(parse_word("g_s1 g_s1^-1"), t)));
  Element sq = evaluate(parse_word("h1 h1"), t);
  Element direct = make_element(spec_b(2), t.at("h1").domain, BraidWord(6, {1, 1}),
                                std::vector<LabelWord>(6), t.at("h1").range);
  CHECK(equal(sq, direct));
}

TEST_CASE("y elements satisfy the shift relation and match the x family") {
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    for (int i = 0; i <= n - 1; ++i)
      CHECK(equal(t.y_element(i), t.at("x" + std::to_string(i))));
    // y_k = y_0 y_{k-n+1} y_0^-1 for k >= n
    for (int k = n; k <= n + 2; ++k) {
      Element lhs = t.y_element(k);
      Element rhs = reduce(compose(compose(t.y_element(0), t.y_element(k - n + 1)),
                                   inverse(t.y_element(0))));
      CHECK(equal(lhs, rhs));
    }
  }
}

TEST_CASE("psi peel reproduces the spine-to-tree element") {
  std::mt19937_64 rng(311);
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    for (int rep = 0; rep < 6; ++rep) {
      Tree tr(n);
      const int carets = 1 + static_cast<int>(rng() % 4);
      for (int c = 0; c < carets; ++c) tr = tr.expand_at(1 + rng() % tr.leaf_count());
      GeneratorWord w = t.y_word_to_x(t.psi_peel(tr));
      Element psi = make_element(spec_b(n), Forest(n, {spine(n, tr.caret_count())}),
                                 BraidWord(tr.leaf_count(), {}),
                                 std::vector<LabelWord>(tr.leaf_count()), Forest(n, {tr}));
      CHECK(equal(evaluate(w, t), psi));
    }
  }
}

TEST_CASE("decompose_F expresses tree pairs over the x family") {
  std::mt19937_64 rng(313);
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    Element x0 = t.at("x0");
    CHECK(format_word(decompose_F(x0, t)) == "x0");
    CHECK(decompose_F(identity_element(spec_b(n), 1), t).empty());
    for (int rep = 0; rep < 4; ++rep) {
      Tree a(n), b(n);
      const int carets = 1 + static_cast<int>(rng() % 4);
      for (int c = 0; c < carets; ++c) {
        a = a.expand_at(1 + rng() % a.leaf_count());
        b = b.expand_at(1 + rng() % b.leaf_count());
      }
      Element v = make_element(spec_b(n), Forest(n, {a}), BraidWord(a.leaf_count(), {}),
                               std::vector<LabelWord>(a.leaf_count()), Forest(n, {b}));
      GeneratorWord w = decompose_F(v, t);
      for (auto& [name, sign] : w.tokens) CHECK(name[0] == 'x');
      CHECK(equal(evaluate(w, t), v));
    }
  }
}

TEST_CASE("e_T decomposes over x generators, exhaustively for n=2") {
  GeneratorTable t(2, spec_b(2));
  int checked = 0;
  for (auto& [name, e] : t.entries()) {
    if (name.rfind("e_", 0) != 0) continue;
    GeneratorWord w = decompose_F(e, t);
    for (auto& [nm, sgn] : w.tokens) CHECK(nm[0] == 'x');
    CHECK(equal(evaluate(w, t), e));
    ++checked;
  }
  CHECK(checked == 42);
}

TEST_CASE("lemma identities: v_i matches g_i for n=3 and its x0-conjugate for n=2") {
  {
    GeneratorTable t(3, spec_b(3));
    CHECK(equal(t.at("v1"), t.at("g_s1")));
    CHECK(equal(t.at("v2"), t.at("g_s2")));
  }
  {
    GeneratorTable t(2, spec_b(2));
    Element conj = reduce(compose(compose(inverse(t.at("x0")), t.at("g_s1")), t.at("x0")));
    CHECK(equal(t.at("v1"), conj));
    CHECK(!equal(t.at("v1"), t.at("g_s1")));
  }
}

TEST_CASE("lemma conjugation identity z_i h_{i+1} z_i^-1 for n=3") {
  GeneratorTable t(3, spec_b(3));
  const int i = 1;
  Element lhs = reduce(compose(compose(t.at("z1"), t.at("h2")), inverse(t.at("z1"))));
  // (T(n), s_i s_{i+1} s_i^-1, nu, T(n)) with nu = sigma_i at position i and
  // sigma_i^-1 at position i+2 (1-based).
  const int m = t.base_leaves();
  std::vector<LabelWord> nu(m);
  nu[i - 1].letters.push_back({0, 1});
  nu[i + 1].letters.push_back({0, -1});
  Element rhs = make_element(spec_b(3), t.at("h1").domain, BraidWord(m, {1, 2, -1}), nu,
                             t.at("h1").range);
  CHECK(equal(lhs, rhs));
}

TEST_CASE("rewrite_h_small expresses h_i over e and g tokens") {
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    for (int i = 1; i <= n - 1; ++i) {
      const GeneratorWord& w = t.rewrite_h_small(i);
      for (auto& [name, sign] : w.tokens) {
        bool ok = name.rfind("e_", 0) == 0 || name.rfind("g_", 0) == 0 || name[0] == 'x';
        CHECK_MESSAGE(ok, "unexpected token ", name);
      }
      CHECK(equal(evaluate(w, t), t.at("h" + std::to_string(i))));
    }
  }
}

TEST_CASE("rewrite_h_large walks indices down to the small range") {
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    const int m = t.base_leaves();
    for (int i = n; i <= m - 2; ++i) {
      const GeneratorWord& w = t.rewrite_h_large(i);
      for (auto& [name, sign] : w.tokens) {
        bool ok = name.rfind("e_", 0) == 0;
        if (name[0] == 'h') {
          int idx = std::stoi(name.substr(1));
          ok = idx < n;
        }
        CHECK_MESSAGE(ok, "unexpected token ", name);
      }
      CHECK(equal(evaluate(w, t), t.at("h" + std::to_string(i))));
    }
    CHECK_THROWS_AS(t.rewrite_h_large(m - 1), RangeError);
  }
}

TEST_CASE("the h_1 bridge identity behind the large rewrite") {
  // h_1 = (T_1, s_n s_{n-1} ... s_1, Id, T_2)
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    Tree Tn = base_tree(n);
    Tree stripped = Tn.reduce_caret(Tn.final_carets().back().address);
    Tree T1 = stripped.expand_at(1);
    Tree T2 = stripped.expand_at(2);
    std::vector<int> letters;
    for (int k = n; k >= 1; --k) letters.push_back(k);
    Element bridge = make_element(spec_b(n), Forest(n, {T1}),
                                  BraidWord(T1.leaf_count(), std::move(letters)),
                                  std::vector<LabelWord>(T1.leaf_count()), Forest(n, {T2}));
    CHECK(equal(bridge, t.at("h1")));
  }
}

TEST_CASE("the crossing shift identity for n=4 (sigma_8 to index 11)") {
  auto sp = spec_b(4);
  Tree Tn = base_tree(4);
  Tree Tp = Tn.reduce_caret(Tn.final_carets().back().address);
  Tp = Tp.expand_at(Tp.leaf_count());
  Tree Tpp = Tp.reduce_caret(Tp.final_carets().back().address).expand_at(1);
  Element lhs = make_element(sp, Forest(4, {Tp}), BraidWord(13, {8}),
                             std::vector<LabelWord>(13), Forest(4, {Tp}));
  Element rhs = make_element(sp, Forest(4, {Tpp}), BraidWord(13, {11}),
                             std::vector<LabelWord>(13), Forest(4, {Tpp}));
  CHECK(equal(lhs, rhs));
}

TEST_CASE("rho_k label pattern: the Lemma-1 count n-k-2 is the consistent one") {
  // r(2) = z2 z1 for n=4: compare against both displayed candidates.
  GeneratorTable t(4, spec_b(4));
  Element r2 = reduce(compose(t.at("z2"), t.at("z1")));
  const int m = t.base_leaves();
  auto candidate = [&](int copies) {
    // {Id, Id, r_1, r_2, r_3 x copies, Id...} with r_p = s_p s_{p-1} ... s_1,
    // 0-indexed positions starting at 2.
    std::vector<LabelWord> rho(m);
    int pos = 2;
    for (int p = 1; p <= 2; ++p, ++pos)
      for (int q = p; q >= 1; --q) rho[pos].letters.push_back({q - 1, 1});
    for (int c = 0; c < copies; ++c, ++pos)
      for (int q = 3; q >= 1; --q) rho[pos].letters.push_back({q - 1, 1});
    return make_element(spec_b(4), t.at("h1").domain, BraidWord(m, {2, 1}), rho,
                        t.at("h1").range);
  };
  const bool lemma1_count = equal(r2, candidate(4 - 2 - 2));
  const bool lemma4_count = equal(r2, candidate(4 - 2 - 1));
  CHECK(lemma1_count);
  CHECK(!lemma4_count);
}

TEST_CASE("decompose_step peels one depth level with verified product") {
  std::mt19937_64 rng(317);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = rep % 2 ? 3 : 2;
    GeneratorTable t(n, spec_b(n));
    Element v = random_element(spec_b(n), 1, t.base_depth() + 2, rng());
    while (depth(reduce(v)) <= t.base_depth())
      v = random_element(spec_b(n), 1, t.base_depth() + 2, rng());
    v = reduce(v);
    auto factors = decompose_step(v, t);
    Element prod = identity_element(spec_b(n), 1);
    for (auto& f : factors) {
      CHECK(depth(f) < depth(v));
      prod = reduce(compose(prod, f));
    }
    CHECK(equal(prod, v));
  }
}

TEST_CASE("a trivial-braid deep element peels into ribbon factors only") {
  // With disjoint final carets available the chosen tree aligns both and no
  // sigma factors appear.
  const int n = 2;
  GeneratorTable t(n, spec_b(n));
  const int d = t.base_depth() + 1;
  Tree a(n), b(n);
  for (int c = 0; c < d; ++c) a = a.expand_at(1);            // left comb
  for (int c = 0; c < d; ++c) b = b.expand_at(b.leaf_count());  // spine
  Element v = make_element(spec_b(n), Forest(n, {a}), BraidWord(a.leaf_count(), {}),
                           std::vector<LabelWord>(a.leaf_count()), Forest(n, {b}));
  for (auto& f : decompose_step(v, t)) {
    CHECK(is_trivial(f.braid));
    for (auto& l : f.labels) CHECK(l.empty());
  }
}

TEST_CASE("decompose emits e/h/g words whose evaluation returns the input") {
  std::mt19937_64 rng(331);
  for (int rep = 0; rep < 6; ++rep) {
    const int n = rep % 2 ? 3 : 2;
    GeneratorTable t(n, spec_b(n));
    Element v = random_element(spec_b(n), 1, 3, rng());
    GeneratorWord w = decompose(v, t);
    for (auto& [name, sign] : w.tokens) {
      bool ok = name.rfind("e_", 0) == 0 || name.rfind("g_", 0) == 0 || name[0] == 'h';
      CHECK_MESSAGE(ok, "unexpected token ", name);
    }
    CHECK(equal(evaluate(w, t), v));
  }
}

TEST_CASE("decompose maps generators to themselves modulo free simplification") {
  GeneratorTable t(3, spec_b(3));
  GeneratorWord w = decompose(t.at("h2"), t);
  CHECK(format_word(w) == "h2");
}

TEST_CASE("decompose_to_basis lands in the 2n set and evaluates back") {
  std::mt19937_64 rng(337);
  for (int rep = 0; rep < 4; ++rep) {
    const int n = rep % 2 ? 3 : 2;
    GeneratorTable t(n, spec_b(n));
    Element v = random_element(spec_b(n), 1, 3, rng());
    GeneratorWord w = decompose_to_basis(v, t);
    const auto& basis = t.theorem_set();
    for (auto& [name, sign] : w.tokens)
      CHECK_MESSAGE(std::find(basis.begin(), basis.end(), name) != basis.end(),
                    "token outside the 2n set: ", name);
    CHECK(equal(evaluate(w, t), v));
  }
}

TEST_CASE("decompose_to_basis for H=Id uses only x and the kept h generators") {
  std::mt19937_64 rng(341);
  GeneratorTable t(2, spec_id(2));
  Element v = random_element(spec_id(2), 1, 3, rng());
  GeneratorWord w = decompose_to_basis(v, t);
  for (auto& [name, sign] : w.tokens) {
    bool ok = name == "x0" || name == "x1" || name == "h1" || name == "h5";
    CHECK_MESSAGE(ok, "token outside the BV_2 set: ", name);
  }
  CHECK(equal(evaluate(w, t), v));
}

TEST_CASE("parabolic tables have 2n members with prescribed label spellings") {
  const int n = 3;
  std::vector<std::vector<int>> subsets = {{}, {1}, {2}, {1, 2}};
  for (auto& X : subsets) {
    GeneratorTable t = parabolic_table(n, X, BraidWord(n, {}));
    CHECK(static_cast<int>(t.theorem_set().size()) == 2 * n);
    for (auto& name : t.theorem_set()) CHECK(t.has(name));
    // Lemma 4: h_i for sigma_i in X rewrites over e/g/h_{not in X}/x.
    for (int i : X) {
      const GeneratorWord& w = t.rewrite_h_small(i);
      for (auto& [name, sign] : w.tokens) {
        if (name[0] == 'h') {
          int idx = std::stoi(name.substr(1));
          CHECK(std::find(X.begin(), X.end(), idx) == X.end());
        }
      }
      CHECK(equal(evaluate(w, t), t.at("h" + std::to_string(i))));
    }
  }
}

TEST_CASE("conjugated parabolic tables wrap members and re-spell labels") {
  const int n = 3;
  BraidWord alpha(3, {1, 2});
  GeneratorTable t = parabolic_table(n, {1}, alpha);
  CHECK(static_cast<int>(t.theorem_set().size()) == 2 * n);
  // Member coherence: the conjugated h entries equal h_alpha^-1 h h_alpha.
  GeneratorTable base(n, spec_b(n));
  Element h_alpha = make_element(spec_b(n), base.at("h1").domain, BraidWord(9, {1, 2}),
                                 std::vector<LabelWord>(9), base.at("h1").range);
  Element expect = reduce(compose(compose(inverse(h_alpha), base.at("h2")), h_alpha));
  // Compare data: same spec-independent parts.
  Element got = t.at("h2");
  CHECK(got.domain == expect.domain);
  CHECK(got.range == expect.range);
  CHECK(bvn::equal(got.braid, expect.braid));
  // g member labels live in the conjugated subgroup spelling.
  const Element& g = t.at("g_a1");
  bool has_label = false;
  for (auto& l : g.labels) has_label = has_label || !l.empty();
  CHECK(has_label);
}
