#include <doctest.h>

#include <memory>
#include <random>

#include "bvn/element.hpp"

using namespace bvn;

namespace {

SpecPtr spec_b(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n)); }
SpecPtr spec_id(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n)); }

// g_s over the depth-1 tree: (R, Id, {s, Id, ..., Id}, R).
Element g_gen(SpecPtr spec, int gen_index) {
  Forest r(spec->arity, 1);
  r = r.expand_at(1);
  std::vector<LabelWord> labels(spec->arity);
  labels[0].letters.push_back({gen_index, 1});
  return make_element(spec, r, BraidWord(spec->arity, {}), labels, r);
}

}  // namespace

TEST_CASE("identity element validates and reduces to itself") {
  for (int r : {1, 2}) {
    Element e = identity_element(spec_id(2), r);
    CHECK(depth(e) == 0);
    CHECK(equal(e, reduce(e)));
    CHECK(is_identity_shaped(reduce(e)));
  }
}

TEST_CASE("make_element rejects mismatched leaf counts") {
  auto sp = spec_id(2);
  Forest dom(2, 1);
  Forest ran = dom.expand_at(1);
  CHECK_THROWS_AS(make_element(sp, dom, BraidWord(1, {}), {LabelWord{}}, ran), ValidationError);
}

TEST_CASE("five-strand figure element validates in BV_3") {
  auto sp = spec_b(3);
  Forest t(3, 1);
  t = t.expand_at(1).expand_at(1);  // two carets, five leaves
  Element v = make_element(sp, t, BraidWord(5, {3, 2, -1, -4, -3}),
                           std::vector<LabelWord>(5), t);
  CHECK(depth(v) == 2);
  CHECK(equal(v, v));
}

TEST_CASE("expanding g_1 at range leaf 1 clones the label and cables the braid") {
  auto sp = spec_b(2);
  Element g1 = g_gen(sp, 0);
  Element e = expand_at_range_leaf(g1, 1);
  CHECK(e.braid.strands == 3);
  CHECK(e.braid.letters == std::vector<int>{1});
  REQUIRE(e.labels.size() == 3);
  CHECK(e.labels[0].letters == e.labels[1].letters);
  CHECK(e.labels[2].empty());
  CHECK(equal(e, g1));
  // Reduction undoes it.
  CHECK(equal(reduce(e), reduce(g1)));
  auto once = reduce_once(e);
  REQUIRE(once.has_value());
  CHECK(equal(*once, g1));
}

TEST_CASE("label Id expansion is the plain expansion") {
  auto sp = spec_id(2);
  Element id1 = identity_element(sp, 1);
  Element e = expand_at_range_leaf(id1, 1);
  CHECK(e.braid.letters.empty());
  CHECK(depth(e) == 1);
  CHECK(equal(e, id1));
}

TEST_CASE("reduce reaches the identity forest for expansion chains of the identity") {
  auto sp = spec_id(2);
  Element v = identity_element(sp, 1);
  std::mt19937_64 rng(5);
  for (int k = 0; k < 5; ++k) v = expand_at_range_leaf(v, 1 + rng() % v.strands());
  Element r = reduce(v);
  CHECK(depth(r) == 0);
  CHECK(is_identity_shaped(r));
}

TEST_CASE("reduce is idempotent and stable across expansion orderings") {
  std::mt19937_64 rng(41);
  for (int caseno = 0; caseno < 20; ++caseno) {
    auto sp = caseno % 2 ? spec_b(2) : spec_id(2);
    Element v = random_element(sp, 1 + caseno % 2, 3, rng());
    Element r = reduce(v);
    CHECK(reduce(r).domain == r.domain);
    Element e1 = v, e2 = v;
    for (int k = 0; k < 3; ++k) {
      e1 = expand_at_range_leaf(e1, 1 + rng() % e1.strands());
      e2 = expand_at_range_leaf(e2, 1 + rng() % e2.strands());
    }
    Element r1 = reduce(e1), r2 = reduce(e2);
    CHECK(r1.domain == r2.domain);
    CHECK(r1.range == r2.range);
    CHECK(equal(r1.braid, r2.braid));
  }
}

TEST_CASE("composition with identity and with inverse") {
  std::mt19937_64 rng(43);
  for (int caseno = 0; caseno < 12; ++caseno) {
    auto sp = caseno % 2 ? spec_b(3) : spec_id(2);
    int roots = 1 + caseno % 2;
    Element v = random_element(sp, roots, 3, rng());
    Element id = identity_element(sp, roots);
    CHECK(equal(compose(v, id), v));
    CHECK(equal(compose(id, v), v));
    CHECK(equal(compose(v, inverse(v)), id));
    CHECK(equal(compose(inverse(v), v), id));
    CHECK(equal(inverse(inverse(v)), v));
  }
}

TEST_CASE("composition concatenates recursive braid labels") {
  auto sp = spec_b(2);
  Element g1 = g_gen(sp, 0);
  Element sq = compose(g1, g1);
  REQUIRE(sq.labels.size() == 2);
  CHECK(sq.labels[0].letters.size() == 2);
  CHECK(sq.braid.letters.empty());
  CHECK(!equal(sq, g1));
  // And it matches the directly-built square label.
  Forest r(2, 1);
  r = r.expand_at(1);
  std::vector<LabelWord> labels(2);
  labels[0].letters = {{0, 1}, {0, 1}};
  CHECK(equal(sq, make_element(sp, r, BraidWord(2, {}), labels, r)));
}

TEST_CASE("g_1 differs from the identity when H is nontrivial") {
  auto sp = spec_b(2);
  CHECK(!equal(g_gen(sp, 0), identity_element(sp, 1)));
}

TEST_CASE("group axioms on random triples") {
  std::mt19937_64 rng(47);
  for (int n : {2, 3}) {
    for (int r : {1, 2}) {
      for (bool full : {false, true}) {
        auto sp = full ? spec_b(n) : spec_id(n);
        for (int k = 0; k < 3; ++k) {
          Element a = random_element(sp, r, 2, rng());
          Element b = random_element(sp, r, 2, rng());
          Element c = random_element(sp, r, 2, rng());
          CHECK(equal(compose(compose(a, b), c), compose(a, compose(b, c))));
        }
      }
    }
  }
}

TEST_CASE("expansion preserves equality and labels relocate coherently") {
  std::mt19937_64 rng(53);
  for (int k = 0; k < 10; ++k) {
    auto sp = spec_b(2);
    Element v = random_element(sp, 1, 3, rng());
    int i = 1 + static_cast<int>(rng() % v.strands());
    CHECK(equal(expand_at_range_leaf(v, i), v));
    int j = 1 + static_cast<int>(rng() % v.strands());
    CHECK(equal(expand_at_domain_leaf(v, j), v));
  }
}

TEST_CASE("random_element is deterministic in the seed") {
  auto sp = spec_b(3);
  Element a = random_element(sp, 2, 4, 99);
  Element b = random_element(sp, 2, 4, 99);
  CHECK(a.domain == b.domain);
  CHECK(a.range == b.range);
  CHECK(a.braid.letters == b.braid.letters);
  CHECK(a.labels == b.labels);
}

TEST_CASE("all-empty labels stay empty through compose and reduce") {
  std::mt19937_64 rng(59);
  auto sp = spec_id(2);
  Element a = random_element(sp, 1, 3, rng());
  Element b = random_element(sp, 1, 3, rng());
  Element c = reduce(compose(a, b));
  for (auto& w : c.labels) CHECK(w.empty());
}
