#include <doctest.h>

#include "bvn/trees.hpp"

using namespace bvn;

namespace {

Tree t2() { return Tree(2); }

}  // namespace

TEST_CASE("trivial tree has one leaf with empty address") {
  Tree t = t2();
  CHECK(t.leaf_count() == 1);
  CHECK(t.caret_count() == 0);
  CHECK(t.leaves() == std::vector<std::string>{""});
}

TEST_CASE("leaves of R[0] in order") {
  Tree t = t2().expand("").expand("0");
  CHECK(t.leaves() == std::vector<std::string>{"00", "01", "1"});
  CHECK(t.leaf_position("01") == 2);
  CHECK(t.leaf_address(3) == "1");
}

TEST_CASE("leaf count follows 1 + carets*(n-1)") {
  for (int n : {2, 3, 4}) {
    Tree t(n);
    for (int k = 0; k < 6; ++k) {
      CHECK(t.leaf_count() == 1 + t.caret_count() * (n - 1));
      t = t.expand_at(1 + (k * 7) % t.leaf_count());
    }
  }
}

TEST_CASE("n=3 base tree T(3) has the nine expected leaves") {
  Tree t = base_tree(3);
  CHECK(t.leaves() == std::vector<std::string>{"00", "01", "02", "10", "11", "12", "20", "21", "22"});
}

TEST_CASE("expand at internal node address fails") {
  Tree t = t2().expand("").expand("0");
  CHECK_THROWS_AS(t.expand("0"), AddressError);
}

TEST_CASE("reduce_caret undoes expand") {
  Tree r = t2().expand("");
  Tree t = r.expand("0");
  CHECK(t.reduce_caret("0") == r);
  CHECK_THROWS_AS(t.reduce_caret("1"), CaretError);
  CHECK_THROWS_AS(t.reduce_caret("00"), CaretError);
}

TEST_CASE("expand/reduce round trip on random-ish positions") {
  Tree t(3);
  for (int k = 1; k <= 5; ++k) {
    int pos = 1 + (3 * k) % t.leaf_count();
    Tree bigger = t.expand_at(pos);
    std::string addr = t.leaf_address(pos);
    CHECK(bigger.reduce_caret(addr) == t);
    t = bigger;
  }
}

TEST_CASE("final carets are reported left to right") {
  Tree t = base_tree(2);  // T[0][1][00][01]
  auto fc = t.final_carets();
  REQUIRE(fc.size() == 3);
  CHECK(fc[0].address == "00");
  CHECK(fc[0].first_leaf_pos == 1);
  CHECK(fc[1].address == "01");
  CHECK(fc[1].first_leaf_pos == 3);
  CHECK(fc[2].address == "1");
  CHECK(fc[2].first_leaf_pos == 5);
}

TEST_CASE("base trees have exactly 3 final carets and m(n) leaves") {
  for (int n : {2, 3, 4, 5}) {
    Tree t = base_tree(n);
    CHECK(t.leaf_count() == base_leaf_count(n));
    CHECK(t.final_carets().size() == 3);
    CHECK(spine(n, t.caret_count()).leaf_count() == base_leaf_count(n));
  }
}

TEST_CASE("lcm basics") {
  Tree r0 = t2().expand("").expand("0");
  Tree r1 = t2().expand("").expand("1");
  Tree both = t2().expand("").expand("0").expand("1");
  CHECK(lcm(r0, r1) == both);
  CHECK(lcm(r0, r0) == r0);
  CHECK(lcm(t2(), r0) == r0);
  CHECK(lcm(r1, r0) == both);
  CHECK(r0.embeds_in(both));
  CHECK(!both.embeds_in(r0));
}

TEST_CASE("lcm embeds both arguments and no reduction of it does") {
  // Brute-force shadow for a handful of small pairs.
  auto all_trees = [](int carets) {
    std::vector<Tree> acc{Tree(2)};
    for (int c = 0; c < carets; ++c) {
      std::vector<Tree> next;
      for (const Tree& t : acc)
        for (int p = 1; p <= t.leaf_count(); ++p) next.push_back(t.expand_at(p));
      acc = next;
    }
    return acc;
  };
  auto ts = all_trees(2);
  for (const Tree& a : ts)
    for (const Tree& b : ts) {
      Tree m = lcm(a, b);
      CHECK(a.embeds_in(m));
      CHECK(b.embeds_in(m));
      // Minimality: removing any final caret of m breaks an embedding,
      // unless that caret is below both.
      for (auto& c : m.final_carets()) {
        Tree red = m.reduce_caret(c.address);
        CHECK(!(a.embeds_in(red) && b.embeds_in(red)));
      }
    }
}

TEST_CASE("spine(3,2) leaves") {
  CHECK(spine(3, 2).leaves() == std::vector<std::string>{"0", "1", "20", "21", "22"});
}

TEST_CASE("forest leaf order concatenates per-root orders") {
  Forest f(2, 2);
  f = f.expand_at(1);
  CHECK(f.leaf_count() == 3);
  auto ls = f.leaves();
  REQUIRE(ls.size() == 3);
  CHECK(ls[0] == Forest::LeafAddress{1, "0"});
  CHECK(ls[1] == Forest::LeafAddress{1, "1"});
  CHECK(ls[2] == Forest::LeafAddress{2, ""});
  CHECK(f.leaf_position({2, ""}) == 3);

  auto fc = f.final_carets();
  REQUIRE(fc.size() == 1);
  CHECK(fc[0].first_leaf_pos == 1);
  CHECK(f.reduce_caret(fc[0]) == Forest(2, 2));
}

TEST_CASE("m(4) is 13") { CHECK(base_leaf_count(4) == 13); }
