#include "bvn/subgroup.hpp"

namespace bvn {

SubgroupSpec SubgroupSpec::trivial(int n) {
  SubgroupSpec s;
  s.arity = n;
  s.name = "Id";
  return s;
}

SubgroupSpec SubgroupSpec::full_braid(int n) {
  SubgroupSpec s;
  s.arity = n;
  s.name = "B" + std::to_string(n);
  for (int i = 1; i < n; ++i)
    s.add_generator("s" + std::to_string(i), BraidWord(n, {i}));
  return s;
}

int SubgroupSpec::index_of(const std::string& gname) const {
  for (int i = 0; i < generator_count(); ++i)
    if (gen_names[i] == gname) return i;
  return -1;
}

void SubgroupSpec::add_generator(const std::string& gname, BraidWord word) {
  if (word.strands != arity)
    throw ValidationError("subgroup generator '" + gname + "' must be a braid on " +
                          std::to_string(arity) + " strands");
  if (index_of(gname) >= 0) throw ValidationError("duplicate generator name: " + gname);
  gen_names.push_back(gname);
  gen_words.push_back(std::move(word));
}

bool operator==(const SubgroupSpec& a, const SubgroupSpec& b) {
  if (a.arity != b.arity || a.name != b.name || a.gen_names != b.gen_names) return false;
  for (size_t i = 0; i < a.gen_words.size(); ++i)
    if (a.gen_words[i].letters != b.gen_words[i].letters) return false;
  return true;
}

LabelWord concat(const LabelWord& a, const LabelWord& b) {
  LabelWord out = a;
  for (auto& x : b.letters) {
    if (!out.letters.empty() && out.letters.back().first == x.first &&
        out.letters.back().second == -x.second)
      out.letters.pop_back();  // free cancellation
    else
      out.letters.push_back(x);
  }
  return out;
}

LabelWord inverse(const LabelWord& a) {
  LabelWord out;
  out.letters.assign(a.letters.rbegin(), a.letters.rend());
  for (auto& x : out.letters) x.second = -x.second;
  return out;
}

BraidWord expand(const LabelWord& w, const SubgroupSpec& spec) {
  BraidWord out(spec.arity, {});
  for (auto& [idx, sign] : w.letters) {
    if (idx < 0 || idx >= spec.generator_count())
      throw SubgroupError("label letter refers to unknown generator");
    const BraidWord& g = spec.gen_words[idx];
    out = compose(out, sign > 0 ? g : inverse(g));
  }
  return out;
}

bool label_trivial(const LabelWord& w, const SubgroupSpec& spec) {
  if (w.empty()) return true;
  return is_trivial(expand(w, spec));
}

bool label_equal(const LabelWord& a, const LabelWord& b, const SubgroupSpec& spec) {
  if (a == b) return true;
  return equal(expand(a, spec), expand(b, spec));
}

}  // namespace bvn
