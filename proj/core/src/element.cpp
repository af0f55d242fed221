#include "bvn/element.hpp"

#include <algorithm>
#include <random>

namespace bvn {

Element make_element(SpecPtr spec, Forest domain, BraidWord braid,
                     std::vector<LabelWord> labels, Forest range) {
  if (!spec) throw ValidationError("element: missing subgroup spec");
  if (domain.arity() != spec->arity || range.arity() != spec->arity)
    throw ValidationError("element: forest arity differs from spec arity");
  if (domain.roots() != range.roots())
    throw ValidationError("element: domain and range root counts differ");
  const int l = domain.leaf_count();
  if (range.leaf_count() != l)
    throw ValidationError("element: domain and range leaf counts differ");
  if (braid.strands != l)
    throw ValidationError("element: braid strand count differs from leaf count");
  if (static_cast<int>(labels.size()) != l)
    throw ValidationError("element: label count differs from leaf count");
  for (const LabelWord& w : labels)
    for (auto& [idx, sign] : w.letters)
      if (idx < 0 || idx >= spec->generator_count() || (sign != 1 && sign != -1))
        throw ValidationError("element: label letter outside the subgroup generating set");
  return Element{std::move(spec), std::move(domain), std::move(braid), std::move(labels),
                 std::move(range)};
}

Element identity_element(SpecPtr spec, int roots) {
  Forest f(spec->arity, roots);
  return make_element(spec, f, BraidWord(roots, {}), std::vector<LabelWord>(roots), f);
}

bool is_identity_shaped(const Element& v) {
  if (v.domain.caret_count() != 0 || v.range.caret_count() != 0) return false;
  if (!is_trivial(v.braid)) return false;
  for (const LabelWord& w : v.labels)
    if (!label_trivial(w, *v.spec)) return false;
  return true;
}

int depth(const Element& v) { return v.domain.caret_count(); }

Element expand_at_range_leaf(const Element& v, int i) {
  const int l = v.strands();
  if (i < 1 || i > l) throw RangeError("expand_at_range_leaf: position out of range");
  const int n = v.arity();
  const BraidWord h = expand(v.labels[i - 1], *v.spec);
  const int j = permutation(v.braid).preimage(i);

  Forest domain = v.domain.expand_at(j);
  Forest range = v.range.expand_at(i);
  BraidWord braid = cable_strand(v.braid, j, n, h);
  std::vector<LabelWord> labels;
  labels.reserve(l + n - 1);
  for (int k = 1; k <= l; ++k) {
    if (k == i)
      for (int c = 0; c < n; ++c) labels.push_back(v.labels[i - 1]);
    else
      labels.push_back(v.labels[k - 1]);
  }
  return make_element(v.spec, std::move(domain), std::move(braid), std::move(labels),
                      std::move(range));
}

Element expand_at_domain_leaf(const Element& v, int j) {
  if (j < 1 || j > v.strands()) throw RangeError("expand_at_domain_leaf: position out of range");
  return expand_at_range_leaf(v, permutation(v.braid).of(j));
}

std::optional<Element> reduce_once(const Element& v) {
  const int n = v.arity();
  const Permutation pi = permutation(v.braid);
  auto domain_carets = v.domain.final_carets();
  auto range_carets = v.range.final_carets();

  for (const auto& cd : domain_carets) {
    const int j = cd.first_leaf_pos;
    // The caret's strands must land on a consecutive block that is a range
    // caret's leaf block.
    int qmin = v.strands() + 1, qmax = 0;
    for (int s = j; s < j + n; ++s) {
      qmin = std::min(qmin, pi.of(s));
      qmax = std::max(qmax, pi.of(s));
    }
    if (qmax - qmin + 1 != n) continue;
    const Forest::FinalCaret* match = nullptr;
    for (const auto& cr : range_carets)
      if (cr.first_leaf_pos == qmin) { match = &cr; break; }
    if (!match) continue;

    auto parts = extract_cable(v.braid, j, n);
    if (!parts) continue;

    bool labels_ok = true;
    for (int s = qmin; s < qmin + n && labels_ok; ++s)
      labels_ok = equal(expand(v.labels[s - 1], *v.spec), parts->inner);
    if (!labels_ok) continue;

    Forest domain = v.domain.reduce_caret({cd.root, cd.address, cd.first_leaf_pos});
    Forest range = v.range.reduce_caret(*match);
    std::vector<LabelWord> labels;
    labels.reserve(v.strands() - n + 1);
    for (int s = 1; s <= v.strands(); ++s) {
      if (s == qmin) labels.push_back(v.labels[qmin - 1]);
      if (s < qmin || s >= qmin + n) labels.push_back(v.labels[s - 1]);
    }
    return make_element(v.spec, std::move(domain), std::move(parts->outer), std::move(labels),
                        std::move(range));
  }
  return std::nullopt;
}

Element reduce(const Element& v) {
  Element cur = v;
  while (auto next = reduce_once(cur)) cur = std::move(*next);
  return cur;
}

namespace {

// Expands `v` until its range forest equals `target` (a common expansion).
Element expand_range_to(Element v, const Forest& target) {
  for (;;) {
    if (v.range == target) return v;
    // Find a leaf of v.range that is internal in target, expand there.
    bool expanded = false;
    const auto leaves = v.range.leaves();
    for (int i = 1; i <= static_cast<int>(leaves.size()); ++i) {
      const auto& a = leaves[i - 1];
      if (target.tree(a.root).node_is_internal(a.word)) {
        v = expand_at_range_leaf(v, i);
        expanded = true;
        break;
      }
    }
    if (!expanded) throw InternalError("expand_range_to: target is not an expansion");
  }
}

Element expand_domain_to(Element v, const Forest& target) {
  for (;;) {
    if (v.domain == target) return v;
    bool expanded = false;
    const auto leaves = v.domain.leaves();
    for (int j = 1; j <= static_cast<int>(leaves.size()); ++j) {
      const auto& a = leaves[j - 1];
      if (target.tree(a.root).node_is_internal(a.word)) {
        v = expand_at_domain_leaf(v, j);
        expanded = true;
        break;
      }
    }
    if (!expanded) throw InternalError("expand_domain_to: target is not an expansion");
  }
}

}  // namespace

Element compose(const Element& v, const Element& w) {
  if (!(*v.spec == *w.spec)) throw ValidationError("compose: subgroup specs differ");
  if (v.roots() != w.roots()) throw ValidationError("compose: root counts differ");
  const Forest middle = lcm(v.range, w.domain);
  Element a = expand_range_to(v, middle);
  Element b = expand_domain_to(w, middle);

  const Permutation pib = permutation(b.braid);
  const int l = a.strands();
  std::vector<LabelWord> labels(l);
  for (int i = 1; i <= l; ++i)
    labels[i - 1] = concat(a.labels[pib.preimage(i) - 1], b.labels[i - 1]);
  return make_element(v.spec, a.domain, compose(a.braid, b.braid), std::move(labels), b.range);
}

Element inverse(const Element& v) {
  const Permutation pi = permutation(v.braid);
  const int l = v.strands();
  std::vector<LabelWord> labels(l);
  for (int q = 1; q <= l; ++q) labels[q - 1] = inverse(v.labels[pi.of(q) - 1]);
  return make_element(v.spec, v.range, inverse(v.braid), std::move(labels), v.domain);
}

bool equal(const Element& v, const Element& w) {
  if (!(*v.spec == *w.spec)) throw ValidationError("equal: subgroup specs differ");
  if (v.roots() != w.roots()) throw ValidationError("equal: root counts differ");
  const Element rv = reduce(v);
  const Element rw = reduce(w);
  if (!(rv.domain == rw.domain) || !(rv.range == rw.range)) return false;
  if (!equal(rv.braid, rw.braid)) return false;
  for (int i = 0; i < rv.strands(); ++i)
    if (!label_equal(rv.labels[i], rw.labels[i], *v.spec)) return false;
  return true;
}

Element random_element(SpecPtr spec, int roots, int max_depth, uint64_t seed) {
  std::mt19937_64 rng(seed);
  const int n = spec->arity;
  auto rnd = [&](int lo, int hi) {
    return static_cast<int>(lo + rng() % static_cast<uint64_t>(hi - lo + 1));
  };

  const int d = rnd(0, max_depth);
  Forest domain(n, roots), range(n, roots);
  for (int k = 0; k < d; ++k) domain = domain.expand_at(rnd(1, domain.leaf_count()));
  for (int k = 0; k < d; ++k) range = range.expand_at(rnd(1, range.leaf_count()));

  const int l = domain.leaf_count();
  std::vector<int> letters;
  if (l >= 2) {
    const int len = rnd(0, 2 * l);
    for (int k = 0; k < len; ++k) {
      int i = rnd(1, l - 1);
      letters.push_back(rng() % 2 ? i : -i);
    }
  }
  std::vector<LabelWord> labels(l);
  if (spec->generator_count() > 0) {
    for (LabelWord& w : labels) {
      const int len = rnd(0, 2);
      for (int k = 0; k < len; ++k)
        w.letters.push_back({rnd(0, spec->generator_count() - 1), rng() % 2 ? 1 : -1});
    }
  }
  return make_element(std::move(spec), std::move(domain), BraidWord(l, std::move(letters)),
                      std::move(labels), std::move(range));
}

}  // namespace bvn
