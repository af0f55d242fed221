#include <doctest.h>

#include <numeric>
#include <random>

#include "bvn/braid.hpp"
#include "bvn/garside.hpp"

using namespace bvn;

namespace {

BraidWord rand_word(std::mt19937_64& rng, int l, int len) {
  std::vector<int> w;
  for (int k = 0; k < len; ++k) {
    int i = 1 + static_cast<int>(rng() % (l - 1));
    w.push_back(rng() % 2 ? i : -i);
  }
  return BraidWord(l, std::move(w));
}

// Builds a word freely equal to the identity by inserting relator subwords
// and cancelling pairs into an empty word.
BraidWord rand_trivial_word(std::mt19937_64& rng, int l, int inserts) {
  std::vector<int> w;
  for (int k = 0; k < inserts; ++k) {
    std::vector<int> chunk;
    switch (rng() % 3) {
      case 0: {  // cancelling pair
        int i = 1 + static_cast<int>(rng() % (l - 1));
        int s = rng() % 2 ? 1 : -1;
        chunk = {s * i, -s * i};
        break;
      }
      case 1: {  // braid relation: s_i s_j s_i (s_j s_i s_j)^-1, |i-j| = 1
        if (l < 3) { int i = 1; chunk = {i, -i}; break; }
        int i = 1 + static_cast<int>(rng() % (l - 2));
        int j = i + 1;
        chunk = {i, j, i, -j, -i, -j};
        break;
      }
      default: {  // far commutation: s_i s_j s_i^-1 s_j^-1, |i-j| > 1
        if (l < 4) { int i = 1; chunk = {-i, i}; break; }
        int i = 1 + static_cast<int>(rng() % (l - 3));
        int j = i + 2 + static_cast<int>(rng() % (l - 1 - (i + 2) + 1));
        chunk = {i, j, -i, -j};
        break;
      }
    }
    size_t at = w.empty() ? 0 : rng() % (w.size() + 1);
    w.insert(w.begin() + at, chunk.begin(), chunk.end());
  }
  return BraidWord(l, std::move(w));
}

}  // namespace

TEST_CASE("compose and identity") {
  BraidWord e(3, {});
  BraidWord v(3, {1, -2});
  CHECK(compose(e, v).letters == v.letters);
  CHECK(is_trivial(compose(BraidWord(3, {1}), BraidWord(3, {-1}))));
  CHECK_THROWS_AS(compose(BraidWord(2, {}), BraidWord(3, {})), StrandError);
}

TEST_CASE("braid relation makes s1 s2 s1 equal s2 s1 s2") {
  BraidWord u(3, {1, 2, 1});
  BraidWord v(3, {2, 1, 2});
  CHECK(is_trivial(compose(u, inverse(v))));
  CHECK(equal(u, v));
}

TEST_CASE("inverse reverses and flips, and is an involution") {
  CHECK(inverse(BraidWord(2, {})).letters.empty());
  BraidWord beta(5, {3, 2, -1, -4, -3});  // the running five-strand example
  CHECK(inverse(beta).letters == std::vector<int>{3, 4, 1, -2, -3});
  CHECK(inverse(inverse(beta)).letters == beta.letters);
}

TEST_CASE("permutation traces positions top to bottom") {
  CHECK(permutation(BraidWord(2, {1})).image == std::vector<int>{2, 1});
  CHECK(permutation(BraidWord(2, {1, 1})).is_identity());
  // Derived by letter-by-letter simulation.
  BraidWord beta(5, {3, 2, -1, -4, -3});
  CHECK(permutation(beta).image == std::vector<int>{2, 4, 5, 1, 3});
}

TEST_CASE("permutation is an antihomomorphism-free convention check") {
  // permutation(compose(u,v)) = permutation(v) o permutation(u)
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    BraidWord u = rand_word(rng, 5, 6), v = rand_word(rng, 5, 6);
    CHECK((permutation(v) * permutation(u)).image == permutation(compose(u, v)).image);
  }
}

TEST_CASE("word problem basics") {
  CHECK(is_trivial(BraidWord(3, {1, 2, -2, -1})));
  CHECK(is_trivial(BraidWord(4, {1, 3, -1, -3})));
  CHECK(!is_trivial(BraidWord(3, {1, 2, -1, -2})));  // nontrivial pure braid
  CHECK(!is_trivial(BraidWord(2, {1})));
}

TEST_CASE("defining relations hold for all strand counts up to 6") {
  for (int l = 3; l <= 6; ++l) {
    for (int i = 1; i + 1 <= l - 1; ++i)
      CHECK(equal(BraidWord(l, {i, i + 1, i}), BraidWord(l, {i + 1, i, i + 1})));
    for (int i = 1; i <= l - 1; ++i)
      for (int j = i + 2; j <= l - 1; ++j)
        CHECK(equal(BraidWord(l, {i, j}), BraidWord(l, {j, i})));
  }
}

TEST_CASE("handle reduction and garside agree on random words") {
  std::mt19937_64 rng(11);
  for (int k = 0; k < 300; ++k) {
    int l = 2 + static_cast<int>(rng() % 4);
    BraidWord u = rand_word(rng, l, 1 + static_cast<int>(rng() % 12));
    BraidWord v = rand_word(rng, l, 1 + static_cast<int>(rng() % 12));
    CHECK(equal(u, v) == equal_garside(u, v));
  }
}

TEST_CASE("garside normal form is canonical on randomly respeller words") {
  std::mt19937_64 rng(13);
  for (int k = 0; k < 200; ++k) {
    int l = 2 + static_cast<int>(rng() % 4);
    BraidWord u = rand_word(rng, l, static_cast<int>(rng() % 10));
    BraidWord t = rand_trivial_word(rng, l, 1 + static_cast<int>(rng() % 5));
    BraidWord v = compose(u, t);  // same braid, different word
    CHECK(garside_nf(u) == garside_nf(v));
    CHECK(equal(garside_word(garside_nf(u)), u));
  }
}

TEST_CASE("garside knows the half twist") {
  GarsideNF nf = garside_nf(BraidWord(3, {1, 2, 1}));
  CHECK(nf.delta == 1);
  CHECK(nf.simples.empty());
}

TEST_CASE("randomized trivial words reduce to trivial") {
  std::mt19937_64 rng(17);
  for (int k = 0; k < 200; ++k) {
    int l = 2 + static_cast<int>(rng() % 5);
    CHECK(is_trivial(rand_trivial_word(rng, l, 1 + static_cast<int>(rng() % 8))));
  }
}

TEST_CASE("delete_strands traces geometrically") {
  // s1 s2 in B_3: keep strands starting at 1 and 2 -> s1 survives, the s2
  // crossing involves the deleted strand 3... trace: positions after s1 are
  // [2,1,3]; s2 crosses strands 1 and 3.
  BraidWord u(3, {1, 2});
  CHECK(delete_strands(u, {1, 2}).letters == std::vector<int>{1});
  CHECK(delete_strands(u, {1, 2, 3}).letters == u.letters);
  CHECK(delete_strands(u, {2}).letters.empty());
  CHECK_THROWS_AS(delete_strands(u, {}), RangeError);
}

TEST_CASE("delete_strands respects braid equality") {
  std::mt19937_64 rng(19);
  for (int k = 0; k < 60; ++k) {
    int l = 4 + static_cast<int>(rng() % 2);
    BraidWord u = rand_word(rng, l, static_cast<int>(rng() % 8));
    BraidWord v = compose(u, rand_trivial_word(rng, l, 1 + static_cast<int>(rng() % 4)));
    std::vector<int> keep;
    for (int s = 1; s <= l; ++s)
      if (rng() % 2) keep.push_back(s);
    if (keep.empty()) keep.push_back(1);
    CHECK(equal(delete_strands(u, keep), delete_strands(v, keep)));
  }
}

TEST_CASE("cable_strand block insertion") {
  // Cabling the single strand of an identity braid appends the inner braid.
  CHECK(cable_strand(BraidWord(2, {}), 1, 2, BraidWord(2, {1})).letters == std::vector<int>{1});
  CHECK(cable_strand(BraidWord(2, {}), 2, 2, BraidWord(2, {1})).letters == std::vector<int>{2});
  // One crossing, cable the left strand into two: block crossing.
  BraidWord c = cable_strand(BraidWord(2, {1}), 1, 2, BraidWord(2, {}));
  CHECK(c.strands == 3);
  CHECK(permutation(c).image == std::vector<int>{2, 3, 1});
  CHECK(is_simple(c));
}

TEST_CASE("cable then extract round trip") {
  std::mt19937_64 rng(23);
  for (int k = 0; k < 40; ++k) {
    int l = 2 + static_cast<int>(rng() % 3);
    BraidWord u = rand_word(rng, l, static_cast<int>(rng() % 6));
    int pos = 1 + static_cast<int>(rng() % l);
    int n = 2 + static_cast<int>(rng() % 2);
    BraidWord inner = rand_word(rng, n, static_cast<int>(rng() % 3));
    BraidWord cab = cable_strand(u, pos, n, inner);
    auto parts = extract_cable(cab, pos, n);
    REQUIRE(parts.has_value());
    CHECK(equal(parts->inner, inner));
    CHECK(equal(parts->outer, u));
  }
}

TEST_CASE("cable_strand respects braid equality of the outer word") {
  std::mt19937_64 rng(29);
  for (int k = 0; k < 30; ++k) {
    int l = 3;
    BraidWord u = rand_word(rng, l, static_cast<int>(rng() % 6));
    BraidWord v = compose(u, rand_trivial_word(rng, l, 1 + static_cast<int>(rng() % 3)));
    CHECK(equal(cable_strand(u, 2, 2, BraidWord(2, {})), cable_strand(v, 2, 2, BraidWord(2, {}))));
  }
}

TEST_CASE("extract_cable rejects non-cables") {
  // s2 in B_3, block {1,2}: image {1,3} is not consecutive.
  CHECK(!extract_cable(BraidWord(3, {2}), 1, 2).has_value());
  // Identity: every block is a trivial cable.
  auto parts = extract_cable(BraidWord(3, {}), 2, 2);
  REQUIRE(parts.has_value());
  CHECK(parts->inner.letters.empty());
  CHECK(parts->outer.letters.empty());
  // Consecutive image but strand 3 passes between the block strands (under
  // one, over the other): no tube.
  BraidWord locked(3, {2, -1});
  CHECK(permutation(locked).of(1) == 2);
  CHECK(permutation(locked).of(2) == 3);
  auto none = extract_cable(locked, 1, 2);
  CHECK(!none.has_value());
  // Whereas a coherent double pass around the block is a tube.
  auto tube = extract_cable(BraidWord(3, {2, 1, 1, 2}), 1, 2);
  CHECK(tube.has_value());
}

TEST_CASE("is_simple") {
  CHECK(is_simple(BraidWord(2, {})));
  CHECK(!is_simple(BraidWord(2, {1, 1})));
  CHECK(is_simple(BraidWord(3, {2, 1})));
  CHECK(!is_simple(BraidWord(3, {-1})));
}

TEST_CASE("ribbon word examples") {
  CHECK(ribbon_word(3, 1, 1, 2).letters.empty());
  CHECK(ribbon_word(3, 1, 2, 2).letters == std::vector<int>{2, 1});
  for (int l = 4; l <= 6; ++l)
    for (int n = 2; n <= 3; ++n)
      for (int p = 1; p + n - 1 <= l; ++p)
        for (int q = 1; q + n - 1 <= l; ++q) {
          BraidWord r = ribbon_word(l, p, q, n);
          CHECK(is_simple(r));
          auto parts = extract_cable(r, p, n);
          REQUIRE(parts.has_value());
          CHECK(parts->inner.letters.empty());
          Permutation pi = permutation(r);
          for (int s = 0; s < n; ++s) CHECK(pi.of(p + s) == q + s);
          CHECK(r.length() == n * std::abs(p - q));
        }
}

TEST_CASE("writhe and permutation are invariants of equal words") {
  std::mt19937_64 rng(31);
  for (int k = 0; k < 50; ++k) {
    int l = 3 + static_cast<int>(rng() % 3);
    BraidWord u = rand_word(rng, l, static_cast<int>(rng() % 8));
    BraidWord v = compose(compose(rand_trivial_word(rng, l, 2), u),
                          rand_trivial_word(rng, l, 2));
    CHECK(writhe(u) == writhe(v));
    CHECK(permutation(u).image == permutation(v).image);
    CHECK(equal(u, v));
  }
}
