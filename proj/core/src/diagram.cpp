#include "bvn/diagram.hpp"
#include <tuple>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "bvn/garside.hpp"

namespace bvn {

namespace {

// ---------------------------------------------------------------------------
// Abstract wire-level view. Ops are index-aligned with the slice list; wires
// are ids: sources get 0..s-1, every split/merge output allocates fresh ids.

struct AbsOp {
  SliceKind kind;
  std::vector<int> in;   // consumed/used wires, in positional order
  std::vector<int> out;  // produced wires (Cross: the two inputs swapped)
  int sign = 1;
  LabelWord label;
};

struct AbsView {
  std::vector<AbsOp> ops;
  std::vector<std::vector<int>> arr_before;  // arrangement before each op
  std::vector<int> arr_final;
  int next_wire = 0;
};

AbsView to_abstract(const Diagram& d) {
  AbsView v;
  std::vector<int> arr(d.sources);
  std::iota(arr.begin(), arr.end(), 0);
  v.next_wire = d.sources;
  const int n = d.arity;
  for (const Slice& s : d.slices) {
    v.arr_before.push_back(arr);
    AbsOp op;
    op.kind = s.kind;
    const int p = s.pos - 1;
    switch (s.kind) {
      case SliceKind::Split: {
        op.in = {arr[p]};
        for (int k = 0; k < n; ++k) op.out.push_back(v.next_wire++);
        arr.erase(arr.begin() + p);
        arr.insert(arr.begin() + p, op.out.begin(), op.out.end());
        break;
      }
      case SliceKind::Merge: {
        op.in.assign(arr.begin() + p, arr.begin() + p + n);
        op.out = {v.next_wire++};
        arr.erase(arr.begin() + p, arr.begin() + p + n);
        arr.insert(arr.begin() + p, op.out[0]);
        break;
      }
      case SliceKind::White: {
        op.in = {arr[p]};
        op.out = op.in;
        op.label = s.label;
        break;
      }
      case SliceKind::Cross: {
        op.in = {arr[p], arr[p + 1]};
        op.out = {arr[p + 1], arr[p]};
        op.sign = s.sign;
        std::swap(arr[p], arr[p + 1]);
        break;
      }
    }
    v.ops.push_back(std::move(op));
  }
  v.arr_final = arr;
  return v;
}

// Rebuilds a positional diagram from abstract ops; throws InternalError if
// the op list is not geometrically coherent.
Diagram from_abstract(const Diagram& proto, const std::vector<AbsOp>& ops) {
  std::vector<int> arr(proto.sources);
  std::iota(arr.begin(), arr.end(), 0);
  std::vector<Slice> slices;
  const int n = proto.arity;
  auto find_pos = [&](int wire) {
    auto it = std::find(arr.begin(), arr.end(), wire);
    if (it == arr.end()) throw InternalError("from_abstract: wire not alive");
    return static_cast<int>(it - arr.begin());
  };
  for (const AbsOp& op : ops) {
    switch (op.kind) {
      case SliceKind::Split: {
        const int p = find_pos(op.in[0]);
        slices.push_back({SliceKind::Split, p + 1, 1, {}});
        arr.erase(arr.begin() + p);
        arr.insert(arr.begin() + p, op.out.begin(), op.out.end());
        break;
      }
      case SliceKind::Merge: {
        const int p = find_pos(op.in[0]);
        for (int k = 0; k < n; ++k)
          if (arr[p + k] != op.in[k]) throw InternalError("from_abstract: merge inputs not aligned");
        slices.push_back({SliceKind::Merge, p + 1, 1, {}});
        arr.erase(arr.begin() + p, arr.begin() + p + n);
        arr.insert(arr.begin() + p, op.out[0]);
        break;
      }
      case SliceKind::White: {
        const int p = find_pos(op.in[0]);
        slices.push_back({SliceKind::White, p + 1, 1, op.label});
        break;
      }
      case SliceKind::Cross: {
        const int p = find_pos(op.in[0]);
        if (p + 1 >= static_cast<int>(arr.size()) || arr[p + 1] != op.in[1])
          throw InternalError("from_abstract: cross wires not adjacent");
        slices.push_back({SliceKind::Cross, p + 1, op.sign, {}});
        std::swap(arr[p], arr[p + 1]);
        break;
      }
    }
  }
  return make_diagram(proto.spec, proto.arity, proto.sources, std::move(slices));
}

// First op index > t whose input set uses `wire`; -1 if none.
int next_touch(const std::vector<AbsOp>& ops, int t, int wire) {
  for (int u = t + 1; u < static_cast<int>(ops.size()); ++u)
    for (int w : ops[u].in)
      if (w == wire) return u;
  return -1;
}

bool touches(const AbsOp& op, int wire) {
  for (int w : op.in)
    if (w == wire) return true;
  for (int w : op.out)
    if (w == wire) return true;
  return false;
}

bool share_wires(const AbsOp& a, const AbsOp& b) {
  for (int w : a.in)
    if (touches(b, w)) return true;
  for (int w : a.out)
    if (touches(b, w)) return true;
  return false;
}

// Dependency reachability from op `from` to op `to` (from < to) through
// shared-wire edges, restricted to indices in [from, to].
bool dep_reachable(const std::vector<AbsOp>& ops, int from, int to) {
  std::vector<char> reach(to - from + 1, 0);
  reach[0] = 1;
  for (int u = from + 1; u <= to; ++u)
    for (int w = from; w < u; ++w)
      if (reach[w - from] && share_wires(ops[w], ops[u])) {
        reach[u - from] = 1;
        break;
      }
  return reach[to - from] != 0;
}

std::vector<int> expanded_braid_letters(const LabelWord& l, const SubgroupSpec& spec) {
  return free_reduce(expand(l, spec).letters);
}

}  // namespace

// ---------------------------------------------------------------------------

int Diagram::sinks() const { return wire_profile(*this).back(); }

std::vector<int> wire_profile(const Diagram& d) {
  std::vector<int> prof;
  prof.reserve(d.slices.size() + 1);
  int w = d.sources;
  prof.push_back(w);
  for (const Slice& s : d.slices) {
    switch (s.kind) {
      case SliceKind::Split: w += d.arity - 1; break;
      case SliceKind::Merge: w -= d.arity - 1; break;
      default: break;
    }
    prof.push_back(w);
  }
  return prof;
}

Diagram make_diagram(SpecPtr spec, int arity, int sources, std::vector<Slice> slices) {
  if (!spec) throw ValidationError("diagram: missing subgroup spec");
  if (spec->arity != arity) throw ValidationError("diagram: arity differs from spec arity");
  if (arity < 2) throw ArityError("diagram arity must be >= 2");
  if (sources < 1) throw ValidationError("diagram needs at least one source");
  int w = sources;
  for (const Slice& s : slices) {
    switch (s.kind) {
      case SliceKind::Split:
        if (s.pos < 1 || s.pos > w) throw ValidationError("split position out of range");
        w += arity - 1;
        break;
      case SliceKind::Merge:
        if (s.pos < 1 || s.pos + arity - 1 > w) throw ValidationError("merge position out of range");
        w -= arity - 1;
        break;
      case SliceKind::White:
        if (s.pos < 1 || s.pos > w) throw ValidationError("white position out of range");
        for (auto& [idx, sign] : s.label.letters)
          if (idx < 0 || idx >= spec->generator_count())
            throw ValidationError("white label outside the subgroup generating set");
        break;
      case SliceKind::Cross:
        if (s.pos < 1 || s.pos + 1 > w) throw ValidationError("cross position out of range");
        if (s.sign != 1 && s.sign != -1) throw ValidationError("cross sign must be +-1");
        break;
    }
  }
  Diagram d;
  d.spec = std::move(spec);
  d.arity = arity;
  d.sources = sources;
  d.slices = std::move(slices);
  return d;
}

namespace {

void emit_tree_splits(const Tree& t, int pos, std::vector<Slice>& out) {
  if (t.is_leaf()) return;
  out.push_back({SliceKind::Split, pos, 1, {}});
  // Children in order; each child's root wire position is pos plus the leaf
  // counts of the fully expanded earlier siblings.
  const auto& shape = t.shape();
  // Recurse over subtrees of the flat form.
  int child_pos = pos;
  size_t i = 1;
  for (int k = 0; k < t.arity(); ++k) {
    // carve child k's shape
    long need = 1;
    size_t j = i;
    while (need > 0) {
      --need;
      if (shape[j]) need += t.arity();
      ++j;
    }
    Tree child(t.arity(), std::vector<uint8_t>(shape.begin() + i, shape.begin() + j));
    emit_tree_splits(child, child_pos, out);
    child_pos += child.leaf_count();
    i = j;
  }
}

}  // namespace

Diagram from_element(const Element& v) {
  std::vector<Slice> slices;
  int pos = 1;
  for (const Tree& t : v.domain.trees()) {
    emit_tree_splits(t, pos, slices);
    pos += t.leaf_count();
  }
  for (int x : v.braid.letters)
    slices.push_back({SliceKind::Cross, std::abs(x), x > 0 ? 1 : -1, {}});
  for (int i = 1; i <= v.strands(); ++i)
    if (!v.labels[i - 1].empty())
      slices.push_back({SliceKind::White, i, 1, v.labels[i - 1]});
  std::vector<Slice> merges;
  pos = 1;
  for (const Tree& t : v.range.trees()) {
    emit_tree_splits(t, pos, merges);
    pos += t.leaf_count();
  }
  std::reverse(merges.begin(), merges.end());
  for (Slice& s : merges) slices.push_back({SliceKind::Merge, s.pos, 1, {}});
  return make_diagram(v.spec, v.arity(), v.roots(), std::move(slices));
}

// ---------------------------------------------------------------------------
// Moves.

std::string MoveInstance::describe() const {
  std::ostringstream os;
  os << kind << "-move at (" << a << "," << b << ")";
  if (variant) os << " variant " << variant;
  return os.str();
}

namespace {

// Move-1 match data, computed once and reused by apply.
struct TubeMatch {
  std::vector<int> population;      // all wires in the crossing closure + padding
  std::vector<int> float_splits;    // op indices, stay in place
  std::vector<int> float_merges;    // op indices, re-emitted after the insert
  std::vector<int> p_cross;         // op indices of population crossings
  std::vector<int> tube_whites;     // op indices of whites on tube wires
  std::vector<int> o_whites;        // op indices of whites on non-tube population wires
  std::vector<int> vp_start;        // population wires in virtual start order
  BraidWord u;                      // window braid on the population
  int tube_index = 0;               // 1-based index of the tube block in vp_start
};

bool in_set(const std::vector<int>& v, int x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

// Attempts to match a 1-move between split `a` and merge `b`.
std::optional<TubeMatch> match_tube(const Diagram& d, const AbsView& av, int a, int b) {
  const int n = d.arity;
  const auto& ops = av.ops;
  if (ops[a].kind != SliceKind::Split || ops[b].kind != SliceKind::Merge) return std::nullopt;
  const std::vector<int>& tube = ops[a].out;
  {
    std::set<int> t1(tube.begin(), tube.end()), t2(ops[b].in.begin(), ops[b].in.end());
    if (t1 != t2) return std::nullopt;
  }

  TubeMatch m;
  std::set<int> pop(tube.begin(), tube.end());
  std::set<int> floated_split_set;

  // Closure: population crossings pull wires in; splits whose outputs land in
  // the population must float above `a`, contributing all their children.
  bool grew = true;
  while (grew) {
    grew = false;
    for (int t = a + 1; t < b; ++t) {
      const AbsOp& op = ops[t];
      if (op.kind == SliceKind::Cross) {
        const bool l = pop.count(op.in[0]), r = pop.count(op.in[1]);
        if ((l || r) && !(l && r)) {
          pop.insert(op.in[0]);
          pop.insert(op.in[1]);
          grew = true;
        }
      } else if (op.kind == SliceKind::Split && !floated_split_set.count(t)) {
        bool hits = pop.count(op.in[0]) > 0;
        for (int w : op.out) hits = hits || pop.count(w) > 0;
        if (hits) {
          if (pop.count(op.in[0])) return std::nullopt;  // tube path through a split
          if (dep_reachable(ops, a, t)) return std::nullopt;
          floated_split_set.insert(t);
          for (int w : op.out)
            if (!pop.count(w)) { pop.insert(w); grew = true; }
        }
      }
    }
  }

  // Classify the window.
  for (int t = a + 1; t < b; ++t) {
    const AbsOp& op = ops[t];
    const bool hits_pop = [&] {
      for (int w : op.in)
        if (pop.count(w)) return true;
      for (int w : op.out)
        if (pop.count(w)) return true;
      return false;
    }();
    switch (op.kind) {
      case SliceKind::Cross:
        if (hits_pop) m.p_cross.push_back(t);
        break;
      case SliceKind::White:
        if (pop.count(op.in[0])) {
          if (in_set(tube, op.in[0])) m.tube_whites.push_back(t);
          else m.o_whites.push_back(t);
        }
        break;
      case SliceKind::Split:
        if (floated_split_set.count(t)) m.float_splits.push_back(t);
        else if (hits_pop) return std::nullopt;
        break;
      case SliceKind::Merge: {
        if (!hits_pop) break;
        bool consumes_pop = false;
        for (int w : op.in) consumes_pop = consumes_pop || pop.count(w) > 0;
        if (pop.count(op.out[0])) return std::nullopt;  // output re-enters the tube business
        if (!consumes_pop) return std::nullopt;
        // Must be free to sink below the rewrite point.
        for (int z = t + 1; z < b; ++z)
          if (touches(ops[z], op.out[0])) return std::nullopt;
        if (touches(ops[b], op.out[0])) return std::nullopt;
        m.float_merges.push_back(t);
        break;
      }
    }
  }

  // Virtual start order: the arrangement after `a`, with floated splits
  // expanded recursively, restricted to the population.
  std::map<int, const AbsOp*> split_of_wire;
  for (int t : m.float_splits) split_of_wire[ops[t].in[0]] = &ops[t];
  std::vector<int> vp;
  {
    std::vector<int> arr = av.arr_before[a];
    // apply split `a` itself
    {
      auto it = std::find(arr.begin(), arr.end(), ops[a].in[0]);
      const int p = static_cast<int>(it - arr.begin());
      arr.erase(it);
      arr.insert(arr.begin() + p, tube.begin(), tube.end());
    }
    std::function<void(int)> emit = [&](int w) {
      auto it = split_of_wire.find(w);
      if (it == split_of_wire.end()) {
        if (pop.count(w)) vp.push_back(w);
        return;
      }
      for (int c : it->second->out) emit(c);
    };
    for (int w : arr) emit(w);
  }
  m.vp_start = vp;
  m.population.assign(pop.begin(), pop.end());

  // Population must be positionally contiguous and the tube block must sit in
  // sibling order at the start.
  {
    auto it = std::find(vp.begin(), vp.end(), tube[0]);
    if (it == vp.end()) return std::nullopt;
    const int idx = static_cast<int>(it - vp.begin());
    for (int k = 0; k < n; ++k)
      if (idx + k >= static_cast<int>(vp.size()) || vp[idx + k] != tube[k]) return std::nullopt;
    m.tube_index = idx + 1;
  }

  // Window braid on the population strands.
  {
    std::vector<int> cur = vp;
    std::vector<int> letters;
    for (int t : m.p_cross) {
      const AbsOp& op = ops[t];
      auto it = std::find(cur.begin(), cur.end(), op.in[0]);
      if (it == cur.end()) return std::nullopt;
      const int i = static_cast<int>(it - cur.begin());
      if (i + 1 >= static_cast<int>(cur.size()) || cur[i + 1] != op.in[1]) return std::nullopt;
      letters.push_back(op.sign > 0 ? i + 1 : -(i + 1));
      std::swap(cur[i], cur[i + 1]);
    }
    // End order must agree with the merge's input order on the tube.
    std::vector<int> tube_end;
    for (int w : cur)
      if (in_set(tube, w)) tube_end.push_back(w);
    if (tube_end != ops[b].in) return std::nullopt;
    m.u = BraidWord(static_cast<int>(vp.size()), std::move(letters));
  }
  return m;
}

// Checks the white composites against the extracted inner braid.
bool tube_whites_match(const Diagram& d, const AbsView& av, const TubeMatch& m,
                       const std::vector<int>& tube, const BraidWord& inner) {
  for (int k = 0; k < static_cast<int>(tube.size()); ++k) {
    LabelWord comp;
    for (int t : m.tube_whites)
      if (av.ops[t].in[0] == tube[k]) comp = concat(comp, av.ops[t].label);
    if (!equal(expand(comp, *d.spec), inner)) return false;
  }
  return true;
}

}  // namespace

std::vector<MoveInstance> enabled_moves(const Diagram& d) {
  AbsView av = to_abstract(d);
  const auto& ops = av.ops;
  const int L = static_cast<int>(ops.size());
  std::vector<MoveInstance> out;

  for (int a = 0; a < L; ++a) {
    const AbsOp& op = ops[a];
    if (op.kind == SliceKind::White) {
      const int b = next_touch(ops, a, op.in[0]);
      if (b >= 0) {
        switch (ops[b].kind) {
          case SliceKind::Cross:
            out.push_back({3, a, b, ops[b].in[0] == op.in[0] ? 0 : 1});
            break;
          case SliceKind::White:
            out.push_back({4, a, b, 0});
            break;
          case SliceKind::Split:
            out.push_back({6, a, b, 1});
            break;
          default:
            break;
        }
      }
    } else if (op.kind == SliceKind::Merge) {
      const int w = op.out[0];
      int b = next_touch(ops, a, w);
      if (b >= 0) {
        if (ops[b].kind == SliceKind::White) out.push_back({6, a, b, 0});
        if (ops[b].kind == SliceKind::Cross)
          out.push_back({5, a, b, 2 + (ops[b].in[0] == w ? 0 : 1)});
        if (ops[b].kind == SliceKind::Split) out.push_back({2, a, b, 0});
        // walk past whites for the general 2-move pattern
        int t = b;
        while (t >= 0 && ops[t].kind == SliceKind::White) {
          t = next_touch(ops, t, w);
          if (t >= 0 && ops[t].kind == SliceKind::Split) {
            out.push_back({2, a, t, 0});
            break;
          }
        }
      }
    } else if (op.kind == SliceKind::Cross) {
      for (int side = 0; side < 2; ++side) {
        const int w = op.in[side];
        const int b = next_touch(ops, a, w);
        if (b >= 0 && ops[b].kind == SliceKind::Split)
          out.push_back({5, a, b, side});
      }
    } else if (op.kind == SliceKind::Split) {
      for (int b = a + 1; b < L; ++b) {
        if (ops[b].kind != SliceKind::Merge) continue;
        auto m = match_tube(d, av, a, b);
        if (!m) continue;
        auto parts = extract_cable(m->u, m->tube_index, d.arity);
        if (!parts) continue;
        if (!tube_whites_match(d, av, *m, ops[a].out, parts->inner)) continue;
        out.push_back({1, a, b, 0});
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const MoveInstance& x, const MoveInstance& y) {
    return std::tie(x.kind, x.a, x.b, x.variant) < std::tie(y.kind, y.a, y.b, y.variant);
  });
  return out;
}

namespace {

std::vector<AbsOp> build_cross_ops(std::vector<int>& cur, const std::vector<int>& letters) {
  std::vector<AbsOp> out;
  for (int x : letters) {
    const int i = std::abs(x) - 1;
    AbsOp c;
    c.kind = SliceKind::Cross;
    c.in = {cur[i], cur[i + 1]};
    c.out = {cur[i + 1], cur[i]};
    c.sign = x > 0 ? 1 : -1;
    out.push_back(c);
    std::swap(cur[i], cur[i + 1]);
  }
  return out;
}

void substitute_wire(std::vector<AbsOp>& ops, size_t from, int old_wire, int new_wire) {
  for (size_t t = from; t < ops.size(); ++t) {
    for (int& w : ops[t].in)
      if (w == old_wire) w = new_wire;
    for (int& w : ops[t].out)
      if (w == old_wire) w = new_wire;
  }
}

}  // namespace

Diagram apply_move(const Diagram& d, const MoveInstance& m) {
  AbsView av = to_abstract(d);
  std::vector<AbsOp> ops = av.ops;
  const int n = d.arity;
  const SubgroupSpec& spec = *d.spec;
  auto bad = [&](const char* why) { return MoveError(std::string("move does not apply: ") + why); };
  if (m.a < 0 || m.a >= static_cast<int>(ops.size())) throw bad("index");

  switch (m.kind) {
    case 3: {
      if (ops[m.a].kind != SliceKind::White || ops[m.b].kind != SliceKind::Cross)
        throw bad("3-move pattern");
      if (next_touch(ops, m.a, ops[m.a].in[0]) != m.b) throw bad("3-move wire");
      AbsOp white = ops[m.a];
      ops.insert(ops.begin() + m.b + 1, white);
      ops.erase(ops.begin() + m.a);
      break;
    }
    case 4: {
      if (ops[m.a].kind != SliceKind::White || ops[m.b].kind != SliceKind::White)
        throw bad("4-move pattern");
      if (next_touch(ops, m.a, ops[m.a].in[0]) != m.b) throw bad("4-move wire");
      LabelWord combined = concat(ops[m.a].label, ops[m.b].label);
      if (label_trivial(combined, spec)) {
        ops.erase(ops.begin() + m.b);
        ops.erase(ops.begin() + m.a);
      } else {
        ops[m.b].label = combined;
        ops.erase(ops.begin() + m.a);
      }
      break;
    }
    case 2: {
      if (ops[m.a].kind != SliceKind::Merge || ops[m.b].kind != SliceKind::Split)
        throw bad("2-move pattern");
      const int w = ops[m.a].out[0];
      std::vector<int> white_idx;
      int t = m.a;
      for (;;) {
        t = next_touch(ops, t, w);
        if (t == m.b) break;
        if (t < 0 || ops[t].kind != SliceKind::White) throw bad("2-move strand");
        white_idx.push_back(t);
      }
      LabelWord lab;
      for (int i : white_idx) lab = concat(lab, ops[i].label);
      std::vector<int> cur = ops[m.a].in;
      const std::vector<int> souts = ops[m.b].out;
      std::vector<AbsOp> ins;
      if (!label_trivial(lab, spec)) {
        ins = build_cross_ops(cur, expanded_braid_letters(lab, spec));
        for (int wire : cur) {
          AbsOp wh;
          wh.kind = SliceKind::White;
          wh.in = wh.out = {wire};
          wh.label = lab;
          ins.push_back(wh);
        }
      }
      // Remove b, the whites, a (descending), insert at b's slot, rewire.
      std::vector<int> dead = white_idx;
      dead.push_back(m.a);
      dead.push_back(m.b);
      std::sort(dead.rbegin(), dead.rend());
      int insert_at = m.b;
      for (int i : dead)
        if (i < insert_at) --insert_at;
      for (int i : dead) ops.erase(ops.begin() + i);
      ops.insert(ops.begin() + insert_at, ins.begin(), ins.end());
      for (int k = 0; k < n; ++k)
        substitute_wire(ops, insert_at + ins.size(), souts[k], cur[k]);
      break;
    }
    case 6: {
      const bool merge_side = m.variant == 0;
      if (merge_side) {
        if (ops[m.a].kind != SliceKind::Merge || ops[m.b].kind != SliceKind::White)
          throw bad("6-move pattern");
        if (next_touch(ops, m.a, ops[m.a].out[0]) != m.b) throw bad("6-move wire");
        AbsOp merge = ops[m.a];
        const LabelWord lab = ops[m.b].label;
        std::vector<int> cur = merge.in;
        std::vector<AbsOp> ins;
        if (!label_trivial(lab, spec)) {
          ins = build_cross_ops(cur, expanded_braid_letters(lab, spec));
          for (int wire : cur) {
            AbsOp wh;
            wh.kind = SliceKind::White;
            wh.in = wh.out = {wire};
            wh.label = lab;
            ins.push_back(wh);
          }
        }
        AbsOp new_merge = merge;
        new_merge.in = cur;
        ins.push_back(new_merge);
        ops.erase(ops.begin() + m.b);
        ops.erase(ops.begin() + m.a);
        ops.insert(ops.begin() + (m.b - 1), ins.begin(), ins.end());
      } else {
        if (ops[m.a].kind != SliceKind::White || ops[m.b].kind != SliceKind::Split)
          throw bad("6-move pattern");
        if (next_touch(ops, m.a, ops[m.a].in[0]) != m.b) throw bad("6-move wire");
        const LabelWord lab = ops[m.a].label;
        AbsOp split = ops[m.b];
        std::vector<AbsOp> ins{split};
        std::vector<int> cur = split.out;
        if (!label_trivial(lab, spec)) {
          auto crosses = build_cross_ops(cur, expanded_braid_letters(lab, spec));
          ins.insert(ins.end(), crosses.begin(), crosses.end());
          for (size_t k = 0; k < cur.size(); ++k) {
            AbsOp wh;
            wh.kind = SliceKind::White;
            wh.in = wh.out = {cur[k]};
            wh.label = lab;
            ins.push_back(wh);
          }
        }
        const std::vector<int> souts = split.out;
        ops.erase(ops.begin() + m.b);
        ops.erase(ops.begin() + m.a);
        const int insert_at = m.b - 1;
        ops.insert(ops.begin() + insert_at, ins.begin(), ins.end());
        // Downstream uses the k-th output positionally; souts and cur are
        // permutations of one id set, so go through temporaries.
        const int kTemp = 1 << 28;
        for (int k = 0; k < n; ++k)
          substitute_wire(ops, insert_at + ins.size(), souts[k], kTemp + k);
        for (int k = 0; k < n; ++k)
          substitute_wire(ops, insert_at + ins.size(), kTemp + k, cur[k]);
      }
      break;
    }
    case 5: {
      if (m.variant < 2) {
        // cross then split
        if (ops[m.a].kind != SliceKind::Cross || ops[m.b].kind != SliceKind::Split)
          throw bad("5-move pattern");
        const int w = ops[m.a].in[m.variant];
        if (next_touch(ops, m.a, w) != m.b) throw bad("5-move wire");
        const int z = ops[m.a].in[1 - m.variant];
        const int e = ops[m.a].sign;
        AbsOp split = ops[m.b];
        std::vector<AbsOp> ins{split};
        const auto& c = split.out;
        if (m.variant == 0) {
          // left wire splits; z crosses leftwards over the block
          for (int k = n - 1; k >= 0; --k) {
            AbsOp cr;
            cr.kind = SliceKind::Cross;
            cr.in = {c[k], z};
            cr.out = {z, c[k]};
            cr.sign = e;
            ins.push_back(cr);
          }
        } else {
          for (int k = 0; k < n; ++k) {
            AbsOp cr;
            cr.kind = SliceKind::Cross;
            cr.in = {z, c[k]};
            cr.out = {c[k], z};
            cr.sign = e;
            ins.push_back(cr);
          }
        }
        ops.erase(ops.begin() + m.b);
        ops.erase(ops.begin() + m.a);
        ops.insert(ops.begin() + m.a, ins.begin(), ins.end());
      } else {
        // merge then cross
        if (ops[m.a].kind != SliceKind::Merge || ops[m.b].kind != SliceKind::Cross)
          throw bad("5-move pattern");
        const int w = ops[m.a].out[0];
        if (next_touch(ops, m.a, w) != m.b) throw bad("5-move wire");
        const bool w_left = m.variant == 2;
        if ((w_left && ops[m.b].in[0] != w) || (!w_left && ops[m.b].in[1] != w))
          throw bad("5-move side");
        const int z = w_left ? ops[m.b].in[1] : ops[m.b].in[0];
        const int e = ops[m.b].sign;
        AbsOp merge = ops[m.a];
        std::vector<AbsOp> ins;
        const auto& mm = merge.in;
        if (w_left) {
          // z moves left across the block
          for (int k = n - 1; k >= 0; --k) {
            AbsOp cr;
            cr.kind = SliceKind::Cross;
            cr.in = {mm[k], z};
            cr.out = {z, mm[k]};
            cr.sign = e;
            ins.push_back(cr);
          }
        } else {
          for (int k = 0; k < n; ++k) {
            AbsOp cr;
            cr.kind = SliceKind::Cross;
            cr.in = {z, mm[k]};
            cr.out = {mm[k], z};
            cr.sign = e;
            ins.push_back(cr);
          }
        }
        ins.push_back(merge);
        ops.erase(ops.begin() + m.b);
        ops.erase(ops.begin() + m.a);
        ops.insert(ops.begin() + (m.b - 1), ins.begin(), ins.end());
      }
      break;
    }
    case 1: {
      auto tm = match_tube(d, av, m.a, m.b);
      if (!tm) throw bad("1-move tube");
      auto parts = extract_cable(tm->u, tm->tube_index, n);
      if (!parts) throw bad("1-move cable");
      const std::vector<int> tube = ops[m.a].out;
      if (!tube_whites_match(d, av, *tm, tube, parts->inner)) throw bad("1-move labels");
      const int iota = ops[m.a].in[0];
      const int o = ops[m.b].out[0];
      // Tube label: the first tube strand's white composite.
      LabelWord tube_label;
      for (int t : tm->tube_whites)
        if (av.ops[t].in[0] == tube[0]) tube_label = concat(tube_label, av.ops[t].label);

      // Outer braid as wire ops, on the population with the tube fused to iota.
      std::vector<int> cur;
      for (int k = 0; k < static_cast<int>(tm->vp_start.size()); ++k) {
        if (k == tm->tube_index - 1) cur.push_back(iota);
        if (k < tm->tube_index - 1 || k >= tm->tube_index - 1 + n)
          cur.push_back(tm->vp_start[k]);
      }
      std::vector<AbsOp> ins = build_cross_ops(cur, free_reduce(parts->outer.letters));
      if (!label_trivial(tube_label, spec)) {
        AbsOp wh;
        wh.kind = SliceKind::White;
        wh.in = wh.out = {iota};
        wh.label = tube_label;
        ins.push_back(wh);
      }
      for (int t : tm->o_whites) ins.push_back(av.ops[t]);
      for (int t : tm->float_merges) ins.push_back(av.ops[t]);

      std::vector<int> dead = tm->p_cross;
      dead.insert(dead.end(), tm->tube_whites.begin(), tm->tube_whites.end());
      dead.insert(dead.end(), tm->o_whites.begin(), tm->o_whites.end());
      dead.insert(dead.end(), tm->float_merges.begin(), tm->float_merges.end());
      dead.push_back(m.a);
      dead.push_back(m.b);
      std::sort(dead.rbegin(), dead.rend());
      int insert_at = m.b;
      for (int i : dead)
        if (i < insert_at) --insert_at;
      for (int i : dead) ops.erase(ops.begin() + i);
      ops.insert(ops.begin() + insert_at, ins.begin(), ins.end());
      substitute_wire(ops, insert_at + ins.size(), o, iota);
      break;
    }
    default:
      throw bad("unknown move kind");
  }
  return from_abstract(d, ops);
}

// ---------------------------------------------------------------------------

namespace {

int structural_weight(const Diagram& d) {
  int c = 0;
  for (const Slice& s : d.slices)
    if (s.kind == SliceKind::Split || s.kind == SliceKind::Merge) ++c;
  return c;
}

// Drops whites whose labels are braid-trivial (a white with label Id is the
// paper's "no white").
Diagram drop_trivial_whites(const Diagram& d) {
  std::vector<Slice> out;
  for (const Slice& s : d.slices) {
    if (s.kind == SliceKind::White && label_trivial(s.label, *d.spec)) continue;
    out.push_back(s);
  }
  return make_diagram(d.spec, d.arity, d.sources, std::move(out));
}

}  // namespace

Diagram normal_form(const Diagram& d) {
  Diagram cur = drop_trivial_whites(d);
  long guard = 0;
  for (;;) {
    auto moves = enabled_moves(cur);
    if (moves.empty()) return cur;
    const int before = structural_weight(cur);
    Diagram next = drop_trivial_whites(apply_move(cur, moves.front()));
    const int after = structural_weight(next);
    const int k = moves.front().kind;
    if (k <= 2 ? after >= before : after > before)
      throw InternalError("termination measure violated by a " + std::to_string(k) + "-move");
    cur = std::move(next);
    if (++guard > 200000) throw InternalError("normal_form did not terminate");
  }
}

// ---------------------------------------------------------------------------
// Canonical linearization and equality.

namespace {

int kind_rank(SliceKind k) {
  switch (k) {
    case SliceKind::Split: return 0;
    case SliceKind::Cross: return 1;
    case SliceKind::White: return 2;
    case SliceKind::Merge: return 3;
  }
  return 4;
}

// Greedy linearization of the slice partial order, ranking splits before
// crossings before whites before merges, then by position. On a move
// fixpoint this lays the phases out exactly; on any diagram it is a
// deterministic representative of the far-commutation class.
Diagram linearize(const Diagram& d, bool rank_first) {
  AbsView av = to_abstract(d);
  const auto& ops = av.ops;
  const int L = static_cast<int>(ops.size());
  std::vector<std::vector<int>> deps(L);
  for (int v = 0; v < L; ++v)
    for (int u = 0; u < v; ++u)
      if (share_wires(ops[u], ops[v])) deps[v].push_back(u);

  std::vector<char> emitted(L, 0);
  std::vector<int> arr(d.sources);
  std::iota(arr.begin(), arr.end(), 0);
  std::vector<AbsOp> order;
  for (int step = 0; step < L; ++step) {
    int best = -1;
    std::pair<int, int> best_key{1 << 30, 1 << 30};
    for (int v = 0; v < L; ++v) {
      if (emitted[v]) continue;
      bool ready = true;
      for (int u : deps[v]) ready = ready && emitted[u];
      if (!ready) continue;
      auto it = std::find(arr.begin(), arr.end(), ops[v].in[0]);
      if (it == arr.end()) throw InternalError("linearize: wire not alive");
      const int pos = static_cast<int>(it - arr.begin());
      const int rank = kind_rank(ops[v].kind);
      const std::pair<int, int> key =
          rank_first ? std::pair{rank, pos} : std::pair{pos, rank};
      if (key < best_key) {
        best = v;
        best_key = key;
      }
    }
    if (best < 0) throw InternalError("linearize: no ready op");
    emitted[best] = 1;
    const AbsOp& op = ops[best];
    auto it = std::find(arr.begin(), arr.end(), op.in[0]);
    const int p = static_cast<int>(it - arr.begin());
    switch (op.kind) {
      case SliceKind::Split:
        arr.erase(arr.begin() + p);
        arr.insert(arr.begin() + p, op.out.begin(), op.out.end());
        break;
      case SliceKind::Merge:
        arr.erase(arr.begin() + p, arr.begin() + p + d.arity);
        arr.insert(arr.begin() + p, op.out[0]);
        break;
      case SliceKind::Cross:
        std::swap(arr[p], arr[p + 1]);
        break;
      case SliceKind::White:
        break;
    }
    order.push_back(op);
  }
  return from_abstract(d, order);
}

}  // namespace

Diagram canonicalize(const Diagram& d) { return linearize(d, true); }

bool diagram_equal(const Diagram& d1, const Diagram& d2) {
  if (d1.arity != d2.arity || d1.sources != d2.sources) return false;
  if (!(*d1.spec == *d2.spec)) return false;
  Diagram c1 = canonicalize(d1);
  Diagram c2 = canonicalize(d2);
  auto prof1 = wire_profile(c1), prof2 = wire_profile(c2);

  size_t i = 0, j = 0;
  for (;;) {
    // Collect maximal crossing runs.
    std::vector<int> run1, run2;
    int w1 = prof1[i];
    while (i < c1.slices.size() && c1.slices[i].kind == SliceKind::Cross) {
      run1.push_back(c1.slices[i].sign * c1.slices[i].pos);
      ++i;
    }
    int w2 = prof2[j];
    while (j < c2.slices.size() && c2.slices[j].kind == SliceKind::Cross) {
      run2.push_back(c2.slices[j].sign * c2.slices[j].pos);
      ++j;
    }
    if (w1 != w2) return false;
    if (!run1.empty() || !run2.empty())
      if (!equal(BraidWord(w1, run1), BraidWord(w1, run2))) return false;
    const bool end1 = i >= c1.slices.size(), end2 = j >= c2.slices.size();
    if (end1 || end2) return end1 && end2;
    const Slice& s1 = c1.slices[i];
    const Slice& s2 = c2.slices[j];
    if (s1.kind != s2.kind || s1.pos != s2.pos) return false;
    if (s1.kind == SliceKind::White && !label_equal(s1.label, s2.label, *d1.spec)) return false;
    ++i;
    ++j;
  }
}

// ---------------------------------------------------------------------------

Element to_element(const Diagram& d) {
  Diagram nf = linearize(normal_form(d), true);
  const int r = nf.sources;
  if (nf.sinks() != r)
    throw NotAnElementError("diagram has " + std::to_string(nf.sources) + " sources but " +
                            std::to_string(nf.sinks()) + " sinks");
  // Phases: splits, crossings, whites, merges.
  size_t i = 0;
  Forest domain(nf.arity, r);
  while (i < nf.slices.size() && nf.slices[i].kind == SliceKind::Split) {
    domain = domain.expand_at(nf.slices[i].pos);
    ++i;
  }
  std::vector<int> letters;
  while (i < nf.slices.size() && nf.slices[i].kind == SliceKind::Cross) {
    letters.push_back(nf.slices[i].sign * nf.slices[i].pos);
    ++i;
  }
  const int l = domain.leaf_count();
  std::vector<LabelWord> labels(l);
  while (i < nf.slices.size() && nf.slices[i].kind == SliceKind::White) {
    const int p = nf.slices[i].pos;
    if (p < 1 || p > l) throw NotAnElementError("white outside the strand range");
    if (!labels[p - 1].empty()) throw NotAnElementError("two whites on one strand survived");
    labels[p - 1] = nf.slices[i].label;
    ++i;
  }
  std::vector<Slice> merges(nf.slices.begin() + i, nf.slices.end());
  for (const Slice& s : merges)
    if (s.kind != SliceKind::Merge)
      throw NotAnElementError("reduced diagram is not split/cross/white/merge layered");
  Forest range(nf.arity, r);
  for (auto it = merges.rbegin(); it != merges.rend(); ++it) range = range.expand_at(it->pos);
  if (range.leaf_count() != l) throw NotAnElementError("merge phase does not close the braid");
  return make_element(nf.spec, std::move(domain), BraidWord(l, std::move(letters)),
                      std::move(labels), std::move(range));
}

bool reduced_shape_ok(const Diagram& d, std::string* why) {
  auto fail = [&](const std::string& msg) {
    if (why) *why = msg;
    return false;
  };
  if (!enabled_moves(d).empty()) return fail("a move is still enabled");
  AbsView av = to_abstract(d);
  const auto& ops = av.ops;
  const int L = static_cast<int>(ops.size());
  // Vertex DAG over splits/merges/whites: edge u -> v when an output wire of
  // u is next touched (as a vertex) by v.
  auto is_vertex = [&](int t) { return ops[t].kind != SliceKind::Cross; };
  std::vector<std::vector<int>> succ(L);
  for (int u = 0; u < L; ++u) {
    if (!is_vertex(u)) continue;
    for (int w : ops[u].out) {
      int t = u;
      for (;;) {
        t = next_touch(ops, t, w);
        if (t < 0) break;
        if (is_vertex(t)) {
          succ[u].push_back(t);
          break;
        }
      }
    }
  }
  // No merge can reach a split; whites on any path at most one.
  std::vector<int> white_in(L, 0);
  std::vector<char> merge_reach(L, 0);
  for (int u = 0; u < L; ++u) {
    if (!is_vertex(u)) continue;
    const int wself = ops[u].kind == SliceKind::White ? 1 : 0;
    white_in[u] += wself;
    if (white_in[u] > 1) return fail("two whites on one oriented path");
    const bool mreach = merge_reach[u] || ops[u].kind == SliceKind::Merge;
    if (mreach && ops[u].kind == SliceKind::Split) return fail("merge before split on a path");
    for (int v : succ[u]) {
      white_in[v] = std::max(white_in[v], white_in[u]);
      merge_reach[v] = merge_reach[v] || mreach;
    }
  }
  return true;
}

std::string dump(const Diagram& d) {
  std::ostringstream os;
  os << "arity " << d.arity << " sources " << d.sources << "\n";
  for (const Slice& s : d.slices) {
    switch (s.kind) {
      case SliceKind::Split: os << "split " << s.pos; break;
      case SliceKind::Merge: os << "merge " << s.pos; break;
      case SliceKind::Cross: os << "cross " << s.pos << (s.sign > 0 ? " +" : " -"); break;
      case SliceKind::White: {
        os << "white " << s.pos;
        for (auto& [idx, sign] : s.label.letters)
          os << ' ' << d.spec->gen_names[idx] << (sign > 0 ? "" : "^-1");
        break;
      }
    }
    os << "\n";
  }
  return os.str();
}

Diagram random_diagram(SpecPtr spec, int max_slices, uint64_t seed, bool element_shaped) {
  std::mt19937_64 rng(seed);
  if (element_shaped) {
    Element v = random_element(spec, 1 + static_cast<int>(rng() % 2), 2, rng());
    return from_element(v);
  }
  const int n = spec->arity;
  const int sources = 1 + static_cast<int>(rng() % 3);
  int wires = sources;
  std::vector<Slice> slices;
  const int target = 1 + static_cast<int>(rng() % max_slices);
  for (int k = 0; k < target; ++k) {
    std::vector<Slice> options;
    Slice s;
    s.kind = SliceKind::Split;
    s.pos = 1 + static_cast<int>(rng() % wires);
    if (wires < 8) options.push_back(s);
    if (wires >= n) {
      s = Slice{SliceKind::Merge, 1 + static_cast<int>(rng() % (wires - n + 1)), 1, {}};
      options.push_back(s);
      options.push_back(s);  // bias toward merges to keep wires bounded
    }
    if (wires >= 2) {
      s = Slice{SliceKind::Cross, 1 + static_cast<int>(rng() % (wires - 1)),
                rng() % 2 ? 1 : -1, {}};
      options.push_back(s);
      options.push_back(s);
    }
    if (spec->generator_count() > 0) {
      LabelWord lab;
      const int len = 1 + static_cast<int>(rng() % 2);
      for (int q = 0; q < len; ++q)
        lab.letters.push_back({static_cast<int>(rng() % spec->generator_count()),
                               rng() % 2 ? 1 : -1});
      s = Slice{SliceKind::White, 1 + static_cast<int>(rng() % wires), 1, lab};
      options.push_back(s);
    }
    const Slice pick = options[rng() % options.size()];
    slices.push_back(pick);
    if (pick.kind == SliceKind::Split) wires += n - 1;
    if (pick.kind == SliceKind::Merge) wires -= n - 1;
  }
  return make_diagram(std::move(spec), n, sources, std::move(slices));
}

ConfluenceReport check_local_confluence(const SpecPtr& spec, const ConfluenceOptions& opts) {
  ConfluenceReport rep;
  std::mt19937_64 rng(opts.seed);
  for (int c = 0; c < opts.count; ++c) {
    Diagram d = random_diagram(spec, opts.max_slices, rng(), c % 3 == 0);
    ++rep.diagrams;
    auto moves = enabled_moves(d);
    for (size_t i = 0; i < moves.size(); ++i) {
      for (size_t j = i + 1; j < moves.size(); ++j) {
        ++rep.peaks;
        Diagram d1 = apply_move(d, moves[i]);
        Diagram d2 = apply_move(d, moves[j]);
        if (opts.tamper) {
          d1 = opts.tamper(d1, 0);
          d2 = opts.tamper(d2, 1);
        }
        if (!diagram_equal(normal_form(d1), normal_form(d2))) {
          std::ostringstream os;
          os << "peak " << moves[i].describe() << " vs " << moves[j].describe()
             << " on diagram #" << c << ":\n" << dump(d);
          rep.counterexamples.push_back(os.str());
        }
      }
    }
  }
  return rep;
}

}  // namespace bvn
