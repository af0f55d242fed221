#include "bvn/selftest.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <random>
#include <sstream>

#include "bvn/diagram.hpp"
#include "bvn/garside.hpp"
#include "bvn/generators.hpp"
#include "bvn/text.hpp"

namespace bvn {

namespace {

SpecPtr spec_b(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n)); }
SpecPtr spec_id(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n)); }

BraidWord rand_word(std::mt19937_64& rng, int l, int len) {
  std::vector<int> w;
  for (int k = 0; k < len && l >= 2; ++k) {
    int i = 1 + static_cast<int>(rng() % (l - 1));
    w.push_back(rng() % 2 ? i : -i);
  }
  return BraidWord(l, std::move(w));
}

BraidWord rand_trivial_word(std::mt19937_64& rng, int l, int inserts) {
  std::vector<int> w;
  for (int k = 0; k < inserts; ++k) {
    std::vector<int> chunk;
    switch (rng() % 3) {
      case 0: {
        int i = 1 + static_cast<int>(rng() % (l - 1));
        int s = rng() % 2 ? 1 : -1;
        chunk = {s * i, -s * i};
        break;
      }
      case 1: {
        if (l < 3) { chunk = {1, -1}; break; }
        int i = 1 + static_cast<int>(rng() % (l - 2));
        chunk = {i, i + 1, i, -(i + 1), -i, -(i + 1)};
        break;
      }
      default: {
        if (l < 4) { chunk = {-1, 1}; break; }
        int i = 1 + static_cast<int>(rng() % (l - 3));
        int j = i + 2 + static_cast<int>(rng() % (l - i - 2));
        chunk = {i, j, -i, -j};
        break;
      }
    }
    size_t at = w.empty() ? 0 : rng() % (w.size() + 1);
    w.insert(w.begin() + at, chunk.begin(), chunk.end());
  }
  return BraidWord(l, std::move(w));
}

struct Check {
  int failures = 0;
  int total = 0;
  std::ostringstream why;

  void expect(bool ok, const std::string& what) {
    ++total;
    if (!ok) {
      if (failures < 4) why << (failures ? "; " : "") << what;
      ++failures;
    }
  }
  CriterionResult result(int id, const std::string& name) const {
    CriterionResult r{id, name, failures == 0, ""};
    std::ostringstream d;
    d << total << " checks";
    if (failures) d << ", " << failures << " failed: " << why.str();
    r.detail = d.str();
    return r;
  }
};

CriterionResult criterion_1(uint64_t seed) {
  Check c;
  for (int l = 2; l <= 6; ++l) {
    for (int i = 1; i + 1 <= l - 1; ++i)
      c.expect(equal(BraidWord(l, {i, i + 1, i}), BraidWord(l, {i + 1, i, i + 1})),
               "braid relation l=" + std::to_string(l));
    for (int i = 1; i <= l - 1; ++i)
      for (int j = i + 2; j <= l - 1; ++j)
        c.expect(equal(BraidWord(l, {i, j}), BraidWord(l, {j, i})),
                 "far commutation l=" + std::to_string(l));
  }
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 1000; ++k) {
    int l = 2 + static_cast<int>(rng() % 5);
    BraidWord w = rand_trivial_word(rng, l, 1 + static_cast<int>(rng() % 6));
    bool ok = is_trivial(w) && equal_garside(w, BraidWord(l, {}));
    c.expect(ok, "trivial word reported nontrivial");
  }
  int made = 0;
  while (made < 1000) {
    int l = 2 + static_cast<int>(rng() % 5);
    BraidWord w = rand_word(rng, l, 1 + static_cast<int>(rng() % 10));
    if (permutation(w).is_identity()) continue;
    ++made;
    c.expect(!is_trivial(w) && !equal_garside(w, BraidWord(l, {})),
             "word with nontrivial permutation reported trivial");
  }
  return c.result(1, "braid kernel soundness");
}

CriterionResult criterion_2(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int n : {2, 3})
    for (int r : {1, 2})
      for (bool full : {false, true}) {
        auto sp = full ? spec_b(n) : spec_id(n);
        Element id = identity_element(sp, r);
        for (int k = 0; k < 25; ++k) {
          Element a = random_element(sp, r, 2, rng());
          Element b = random_element(sp, r, 2, rng());
          Element cc = random_element(sp, r, 2, rng());
          c.expect(equal(compose(compose(a, b), cc), compose(a, compose(b, cc))),
                   "associativity");
          c.expect(equal(compose(a, id), a) && equal(compose(id, a), a), "identity");
          c.expect(equal(compose(a, inverse(a)), id) && equal(compose(inverse(a), a), id),
                   "inverse");
        }
      }
  return c.result(2, "group axioms in BV_{n,r}(H)");
}

CriterionResult criterion_3(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto sp = rng() % 2 ? spec_b(n) : spec_id(n);
    const int r = 1 + static_cast<int>(rng() % 2);
    Element v = random_element(sp, r, 2, rng());
    Element e1 = v, e2 = v;
    const int len1 = static_cast<int>(rng() % 6), len2 = static_cast<int>(rng() % 6);
    for (int q = 0; q < len1; ++q) e1 = expand_at_range_leaf(e1, 1 + rng() % e1.strands());
    for (int q = 0; q < len2; ++q) e2 = expand_at_range_leaf(e2, 1 + rng() % e2.strands());
    Element r1 = reduce(e1), r2 = reduce(e2);
    bool same = r1.domain == r2.domain && r1.range == r2.range && equal(r1.braid, r2.braid);
    for (int i = 0; same && i < r1.strands(); ++i)
      same = label_equal(r1.labels[i], r2.labels[i], *sp);
    c.expect(same, "reduced forms diverged");
  }
  return c.result(3, "unique reduced form");
}

CriterionResult criterion_4(uint64_t seed) {
  ConfluenceOptions opts;
  opts.count = 500;
  opts.max_slices = 12;
  opts.seed = seed;
  ConfluenceReport rep = check_local_confluence(spec_b(2), opts);
  CriterionResult r{4, "local confluence of the diagram rewriting", rep.ok(), ""};
  std::ostringstream d;
  d << rep.diagrams << " diagrams, " << rep.peaks << " move peaks, "
    << rep.counterexamples.size() << " counterexamples";
  if (!rep.ok()) d << "; first: " << rep.counterexamples.front();
  r.detail = d.str();
  return r;
}

CriterionResult criterion_5(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 200; ++k) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto sp = rng() % 2 ? spec_b(n) : spec_id(n);
    const int r = 1 + static_cast<int>(rng() % 2);
    Element v = random_element(sp, r, 2, rng());
    c.expect(equal(to_element(from_element(v)), v), "diagram round trip changed the element");
    std::string why;
    c.expect(reduced_shape_ok(normal_form(from_element(v)), &why), "shape: " + why);
  }
  return c.result(5, "element/diagram bijection round trip");
}

CriterionResult criterion_6(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int n : {2, 3}) {
    GeneratorTable table(n, spec_b(n));
    const auto& basis = table.theorem_set();
    for (int k = 0; k < 50; ++k) {
      Element v = random_element(spec_b(n), 1, 6, rng());
      GeneratorWord w = decompose_to_basis(v, table);
      bool inside = true;
      for (auto& [name, sign] : w.tokens)
        inside = inside && std::find(basis.begin(), basis.end(), name) != basis.end();
      c.expect(inside, "token outside the 2n set");
      c.expect(equal(evaluate(w, table), v), "basis word evaluation diverged");
    }
  }
  {
    GeneratorTable table(2, spec_id(2));
    c.expect(table.theorem_set() == std::vector<std::string>{"x0", "x1", "h1", "h5"},
             "BV_2 generating set is not {x1, x2, h1, h5}");
    for (int k = 0; k < 10; ++k) {
      Element v = random_element(spec_id(2), 1, 5, rng());
      GeneratorWord w = decompose_to_basis(v, table);
      bool inside = true;
      for (auto& [name, sign] : w.tokens)
        inside = inside && (name == "x0" || name == "x1" || name == "h1" || name == "h5");
      c.expect(inside, "BV_2 token outside {x, h1, h5}");
      c.expect(equal(evaluate(w, table), v), "BV_2 word evaluation diverged");
    }
  }
  return c.result(6, "theorem-fg decomposition into 2n generators");
}

CriterionResult criterion_7(uint64_t seed) {
  (void)seed;
  Check c;
  {
    GeneratorTable t(3, spec_b(3));
    c.expect(equal(t.at("v1"), t.at("g_s1")), "v_1 != g_1 for n=3");
    c.expect(equal(t.at("v2"), t.at("g_s2")), "v_2 != g_2 for n=3");
    // Lemma 1 product for h_1 (n=3): h_2 w z h_2 z^-1 w^-1 h_2^-1.
    Element prod = t.at("h2");
    prod = reduce(compose(prod, t.at("w1_0")));
    prod = reduce(compose(prod, t.at("z1")));
    prod = reduce(compose(prod, t.at("h2")));
    prod = reduce(compose(prod, inverse(t.at("z1"))));
    prod = reduce(compose(prod, inverse(t.at("w1_0"))));
    prod = reduce(compose(prod, inverse(t.at("h2"))));
    c.expect(equal(prod, t.at("h1")), "Lemma 1 product for h_1 (n=3)");
    // Conjugation identity, n=3, i=1.
    Element lhs = reduce(compose(compose(t.at("z1"), t.at("h2")), inverse(t.at("z1"))));
    std::vector<LabelWord> nu(t.base_leaves());
    nu[0].letters.push_back({0, 1});
    nu[2].letters.push_back({0, -1});
    Element rhs = make_element(spec_b(3), t.at("h1").domain,
                               BraidWord(t.base_leaves(), {1, 2, -1}), nu, t.at("h1").range);
    c.expect(equal(lhs, rhs), "z_1 h_2 z_1^-1 conjugation identity (n=3)");
  }
  {
    GeneratorTable t(2, spec_b(2));
    Element conj = reduce(compose(compose(inverse(t.at("x0")), t.at("g_s1")), t.at("x0")));
    c.expect(equal(t.at("v1"), conj), "v_1 corrected identity (n=2)");
  }
  // Lemma 2 base identity for h_n, Lemma 1/2 rewrites re-verified by equal.
  for (int n : {2, 3}) {
    GeneratorTable t(n, spec_b(n));
    const int m = t.base_leaves();
    Tree Tn = base_tree(n);
    Tree stripped = Tn.reduce_caret(Tn.final_carets().back().address);
    Tree T1 = stripped.expand_at(1);
    Tree T2 = stripped.expand_at(2);
    Element prod = inverse(t.ensure_e(T1));
    prod = reduce(compose(prod, t.at("h1")));
    prod = reduce(compose(prod, t.ensure_e(T2)));
    for (int j = 1; j <= n - 1; ++j)
      prod = reduce(compose(prod, inverse(t.at("h" + std::to_string(j)))));
    c.expect(equal(prod, t.at("h" + std::to_string(n))),
             "Lemma 2 base identity for h_n, n=" + std::to_string(n));
    for (int i = 1; i <= n - 1; ++i)
      c.expect(equal(evaluate(t.rewrite_h_small(i), t), t.at("h" + std::to_string(i))),
               "Lemma 1 rewrite h_" + std::to_string(i));
    for (int i = n; i <= m - 2; ++i)
      c.expect(equal(evaluate(t.rewrite_h_large(i), t), t.at("h" + std::to_string(i))),
               "Lemma 2 rewrite h_" + std::to_string(i));
  }
  {
    // The sigma_{i+n-1} shift, n=4, matching the sigma_8 -> index 11 figure.
    auto sp = spec_b(4);
    Tree Tn = base_tree(4);
    Tree Tp = Tn.reduce_caret(Tn.final_carets().back().address);
    Tp = Tp.expand_at(Tp.leaf_count());
    Tree Tpp = Tp.reduce_caret(Tp.final_carets().back().address).expand_at(1);
    Element lhs = make_element(sp, Forest(4, {Tp}), BraidWord(13, {8}),
                               std::vector<LabelWord>(13), Forest(4, {Tp}));
    Element rhs = make_element(sp, Forest(4, {Tpp}), BraidWord(13, {11}),
                               std::vector<LabelWord>(13), Forest(4, {Tpp}));
    c.expect(equal(lhs, rhs), "shift identity sigma_8 -> index 11 (n=4)");
  }
  // Lemma 4 rewrites for strict subsets, n=3.
  for (const std::vector<int>& X : std::vector<std::vector<int>>{{1}, {2}}) {
    GeneratorTable t = parabolic_table(3, X, BraidWord(3, {}));
    for (int i : X)
      c.expect(equal(evaluate(t.rewrite_h_small(i), t), t.at("h" + std::to_string(i))),
               "Lemma 4 rewrite h_" + std::to_string(i));
  }
  return c.result(7, "lemma identities under the fixed conventions");
}

CriterionResult criterion_8(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  const int n = 3;
  std::vector<BraidWord> alphas{BraidWord(n, {}), rand_word(rng, n, 3), rand_word(rng, n, 4)};
  for (const std::vector<int>& X : std::vector<std::vector<int>>{{}, {1}, {2}, {1, 2}}) {
    for (const BraidWord& alpha : alphas) {
      GeneratorTable t = parabolic_table(n, X, alpha);
      c.expect(static_cast<int>(t.theorem_set().size()) == 2 * n, "set size is not 2n");
      for (auto& name : t.theorem_set()) {
        c.expect(t.has(name), "missing member " + name);
        // Labels must be spelled over S_H.
        const Element& e = t.at(name);
        for (auto& l : e.labels)
          for (auto& [idx, sign] : l.letters)
            c.expect(idx >= 0 && idx < t.spec()->generator_count(), "label outside S_H");
      }
      if (!is_trivial(alpha)) {
        // Conjugated coherence for one h member and one x member.
        GeneratorTable base(n, spec_b(n));
        Element h_alpha = make_element(spec_b(n), base.at("h1").domain,
                                       BraidWord(base.base_leaves(), alpha.letters),
                                       std::vector<LabelWord>(base.base_leaves()),
                                       base.at("h1").range);
        for (const std::string nm : {std::string("h2"), std::string("x0")}) {
          Element expect = reduce(compose(compose(inverse(h_alpha), base.at(nm)), h_alpha));
          const Element& got = t.at(nm);
          bool same = got.domain == expect.domain && got.range == expect.range &&
                      bvn::equal(got.braid, expect.braid);
          c.expect(same, "conjugated member " + nm + " incoherent");
        }
      }
    }
    // Index-reduction rewrites on the standard parabolic table (Lemma 4's
    // scope; the full-X case degenerates to the Lemma 1 machinery).
    if (!X.empty()) {
      GeneratorTable t = parabolic_table(n, X, BraidWord(n, {}));
      for (int i : X)
        c.expect(equal(evaluate(t.rewrite_h_small(i), t), t.at("h" + std::to_string(i))),
                 "parabolic rewrite h_" + std::to_string(i));
    }
  }
  return c.result(8, "parabolic generating sets");
}

CriterionResult criterion_9(uint64_t seed) {
  (void)seed;
  Check c;
  // Memoized brute-force oracle over permutation braids.
  std::map<std::tuple<int, int, int, int>, int> oracle;
  auto min_simple = [&](int l, int p, int q, int nblk) {
    auto key = std::make_tuple(l, p, q, nblk);
    auto it = oracle.find(key);
    if (it != oracle.end()) return it->second;
    std::vector<int> perm(l);
    std::vector<int> rest;
    for (int s = 1; s <= l; ++s)
      if (s < p || s >= p + nblk) rest.push_back(s);
    std::vector<int> targets;
    for (int s = 1; s <= l; ++s)
      if (s < q || s >= q + nblk) targets.push_back(s);
    std::sort(targets.begin(), targets.end());
    int best = -1;
    do {
      for (int k = 0; k < nblk; ++k) perm[p - 1 + k] = q + k;
      for (size_t k = 0; k < rest.size(); ++k) perm[rest[k] - 1] = targets[k];
      Permutation pi;
      pi.image = perm;
      BraidWord cand(l, simple_word(pi));
      if (!is_simple(cand)) continue;
      auto parts = extract_cable(cand, p, nblk);
      if (!parts || !parts->inner.letters.empty()) continue;
      if (best < 0 || cand.length() < best) best = cand.length();
    } while (std::next_permutation(targets.begin(), targets.end()));
    oracle[key] = best;
    return best;
  };

  auto all_trees_upto = [](int arity, int max_leaves) {
    std::vector<Tree> acc{Tree(arity)};
    std::vector<Tree> out{Tree(arity)};
    while (true) {
      std::vector<Tree> next;
      for (const Tree& t : acc)
        for (int pos = 1; pos <= t.leaf_count(); ++pos) {
          Tree e = t.expand_at(pos);
          if (e.leaf_count() <= max_leaves) next.push_back(e);
        }
      if (next.empty()) break;
      // dedup
      std::sort(next.begin(), next.end(), [](const Tree& a, const Tree& b) {
        return a.shape() < b.shape();
      });
      next.erase(std::unique(next.begin(), next.end()), next.end());
      out.insert(out.end(), next.begin(), next.end());
      acc = next;
    }
    return out;
  };

  for (int n : {2, 3}) {
    auto trees = all_trees_upto(n, 6);
    for (const Tree& a : trees) {
      for (const Tree& b : trees) {
        if (a.leaf_count() != b.leaf_count() || a.leaf_count() < 2) continue;
        const int l = a.leaf_count();
        for (auto& ca : a.final_carets()) {
          for (auto& cb : b.final_carets()) {
            const int p = ca.first_leaf_pos, q = cb.first_leaf_pos;
            BraidWord r = ribbon_word(l, p, q, n);
            const int best = min_simple(l, p, q, n);
            c.expect(best == r.length(), "ribbon length not minimal");
            c.expect(is_simple(r), "ribbon not simple");
            auto parts = extract_cable(r, p, n);
            bool tube = parts.has_value() && parts->inner.letters.empty();
            c.expect(tube, "ribbon is not a trivial tube");
            Permutation pi = permutation(r);
            bool order_ok = true;
            for (int k = 0; k < n; ++k) order_ok = order_ok && pi.of(p + k) == q + k;
            c.expect(order_ok, "ribbon block not order preserving");
          }
        }
      }
    }
  }
  return c.result(9, "ribbon minimality against the brute-force oracle");
}

CriterionResult criterion_10(uint64_t seed) {
  Check c;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < 100; ++k) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto sp = rng() % 2 ? spec_b(n) : spec_id(n);
    Element v = random_element(sp, 1 + static_cast<int>(rng() % 2), 3, rng());
    Element w = parse_element(format_element(v));
    bool same = v.domain == w.domain && v.range == w.range &&
                v.braid.letters == w.braid.letters && v.labels == w.labels;
    c.expect(same, "format/parse changed the element");
  }
  return c.result(10, "grammar round trip");
}

}  // namespace

std::vector<CriterionResult> run_acceptance(uint64_t seed, std::ostream* progress) {
  std::vector<CriterionResult> out;
  auto run = [&](CriterionResult (*f)(uint64_t), uint64_t s) {
    CriterionResult r;
    try {
      r = f(s);
    } catch (const std::exception& e) {
      r.id = static_cast<int>(out.size()) + 1;
      r.name = "criterion aborted";
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    out.push_back(r);
    if (progress)
      (*progress) << (r.pass ? "PASS" : "FAIL") << " criterion " << r.id << " (" << r.name
                  << "): " << r.detail << "\n";
  };
  run(criterion_1, seed + 1);
  run(criterion_2, seed + 2);
  run(criterion_3, seed + 3);
  run(criterion_4, seed + 4);
  run(criterion_5, seed + 5);
  run(criterion_6, seed + 6);
  run(criterion_7, seed + 7);
  run(criterion_8, seed + 8);
  run(criterion_9, seed + 9);
  run(criterion_10, seed + 10);
  return out;
}

bool all_pass(const std::vector<CriterionResult>& results) {
  for (auto& r : results)
    if (!r.pass) return false;
  return true;
}

}  // namespace bvn
