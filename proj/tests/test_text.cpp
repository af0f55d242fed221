#include <doctest.h>

#include <memory>
#include <random>

#include "bvn/text.hpp"

using namespace bvn;

namespace {

SpecPtr spec_b(int n) { return std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n)); }

}  // namespace

TEST_CASE("tree text forms") {
  Tree t = Tree(2).expand("").expand("0");
  CHECK(format_tree(t) == "((. .) .)");
  CHECK(format_tree(t, false) == "((..).)");
  CHECK(parse_tree("((. .) .)", 2) == t);
  CHECK(parse_tree("((..).)", 2) == t);
  CHECK_THROWS_AS(parse_tree("((..)", 2), ParseError);
  CHECK_THROWS_AS(parse_tree("(. .)", 3), ParseError);
}

TEST_CASE("braid text forms") {
  BraidWord beta(5, {3, 2, -1, -4, -3});
  CHECK(format_braid(beta) == "s3 s2 S1 S4 S3");
  CHECK(parse_braid("s3 s2 S1 S4 S3", 5).letters == beta.letters);
  CHECK(parse_braid("", 4).letters.empty());
  CHECK_THROWS_AS(parse_braid("s9", 4), ParseError);
  CHECK_THROWS_AS(parse_braid("q1", 4), ParseError);
}

TEST_CASE("the identity element text from the grammar example") {
  Element e = parse_element("bv{n=2,r=1,H=Id; domain: .; braid: ; labels: [-]; range: .}");
  CHECK(is_identity_shaped(e));
  CHECK(equal(e, identity_element(e.spec, 1)));
}

TEST_CASE("the five-strand figure element parses and validates") {
  Element v = parse_element(
      "bv{n=3, r=1, H=B3; domain: ((. . .) . .); braid: s3 s2 S1 S4 S3; "
      "labels: [-, -, -, -, -]; range: ((. . .) . .)}");
  CHECK(depth(v) == 2);
  CHECK(v.braid.letters == std::vector<int>{3, 2, -1, -4, -3});
}

TEST_CASE("format then parse is the identity on random elements") {
  std::mt19937_64 rng(401);
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 2 + static_cast<int>(rng() % 2);
    auto sp = rep % 2 ? spec_b(n) : std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n));
    Element v = random_element(sp, 1 + static_cast<int>(rng() % 2), 3, rng());
    Element w = parse_element(format_element(v));
    CHECK(v.domain == w.domain);
    CHECK(v.range == w.range);
    CHECK(v.braid.letters == w.braid.letters);
    CHECK(v.labels == w.labels);
    CHECK(equal(v, w));
  }
}

TEST_CASE("labels with inverse markers parse in both spellings") {
  auto sp = spec_b(3);
  LabelWord l = parse_label("s1 S2 s1^-1", *sp);
  REQUIRE(l.letters.size() == 3);
  CHECK(l.letters[0] == std::pair<int, int>{0, 1});
  CHECK(l.letters[1] == std::pair<int, int>{1, -1});
  CHECK(l.letters[2] == std::pair<int, int>{0, -1});
  CHECK(format_label(l, *sp) == "s1 S2 S1");
  CHECK(parse_label("-", *sp).empty());
  CHECK_THROWS_AS(parse_label("bogus", *sp), ParseError);
}

TEST_CASE("subgroup files parse into named bindings") {
  SubgroupSpec sp = parse_subgroup_file("# comment\n a = s1 s2 s1 \n b = S1\n", 3, "custom");
  CHECK(sp.generator_count() == 2);
  CHECK(sp.index_of("a") == 0);
  CHECK(sp.gen_words[0].letters == std::vector<int>{1, 2, 1});
  CHECK(sp.gen_words[1].letters == std::vector<int>{-1});
  auto spp = std::make_shared<SubgroupSpec>(sp);
  Element v = make_element(spp, Forest(3, 1), BraidWord(1, {}), {LabelWord{{{0, 1}}}},
                           Forest(3, 1));
  Element w = parse_element(format_element(v), spp);
  CHECK(equal(v, w));
}

TEST_CASE("json mirrors the text grammar fields") {
  Element v = parse_element("bv{n=2,r=1,H=B2; domain: (. .); braid: s1; labels: [s1, -]; "
                            "range: (. .)}");
  std::string j = format_element_json(v);
  CHECK(j.find("\"n\": 2") != std::string::npos);
  CHECK(j.find("\"braid\": \"s1\"") != std::string::npos);
  CHECK(j.find("\"H\": \"B2\"") != std::string::npos);
}

TEST_CASE("parse errors carry position context") {
  CHECK_THROWS_AS(parse_element("bv{n=2,r=1,H=Id; domain: ..; braid: ; labels: [-]; range: .}"),
                  ParseError);
  CHECK_THROWS_AS(parse_element("nonsense"), ParseError);
  CHECK_THROWS_AS(parse_element("bv{n=2,r=1,H=Qx; domain: .; braid: ; labels: [-]; range: .}"),
                  ParseError);
}
