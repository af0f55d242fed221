#pragma once

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "bvn/braid.hpp"

namespace bvn {

// A named generating set S_H for a subgroup H <= B_n: each generator name is
// bound to a braid word on n strands. Labels are words over this set, so
// membership in H is syntactic.
struct SubgroupSpec {
  int arity = 2;
  std::string name;
  std::vector<std::string> gen_names;
  std::vector<BraidWord> gen_words;

  static SubgroupSpec trivial(int n);      // H = Id
  static SubgroupSpec full_braid(int n);   // H = B_n, names s1..s(n-1)

  int generator_count() const { return static_cast<int>(gen_names.size()); }
  int index_of(const std::string& name) const;  // -1 if absent
  void add_generator(const std::string& name, BraidWord word);

  friend bool operator==(const SubgroupSpec& a, const SubgroupSpec& b);
};

using SpecPtr = std::shared_ptr<const SubgroupSpec>;

// A word over S_H with signs; expansion into B_n is total.
struct LabelWord {
  std::vector<std::pair<int, int>> letters;  // (generator index, sign)

  bool empty() const { return letters.empty(); }
  friend bool operator==(const LabelWord&, const LabelWord&) = default;
};

LabelWord concat(const LabelWord& a, const LabelWord& b);
LabelWord inverse(const LabelWord& a);
BraidWord expand(const LabelWord& w, const SubgroupSpec& spec);
bool label_trivial(const LabelWord& w, const SubgroupSpec& spec);
bool label_equal(const LabelWord& a, const LabelWord& b, const SubgroupSpec& spec);

}  // namespace bvn
