#include "bvn/braid.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

#include "bvn/garside.hpp"

namespace bvn {

BraidWord::BraidWord(int l, std::vector<int> w) : strands(l), letters(std::move(w)) {
  if (l < 1) throw StrandError("braid needs at least one strand");
  for (int x : letters) {
    int i = std::abs(x);
    if (x == 0 || i > l - 1)
      throw RangeError("letter index " + std::to_string(x) + " out of range for " +
                       std::to_string(l) + " strands");
  }
}

Permutation Permutation::identity(int l) {
  Permutation p;
  p.image.resize(l);
  std::iota(p.image.begin(), p.image.end(), 1);
  return p;
}

int Permutation::preimage(int i) const {
  for (int k = 1; k <= size(); ++k)
    if (of(k) == i) return k;
  throw RangeError("preimage out of range");
}

bool Permutation::is_identity() const {
  for (int k = 1; k <= size(); ++k)
    if (of(k) != k) return false;
  return true;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.image.resize(size());
  for (int k = 1; k <= size(); ++k) p.image[of(k) - 1] = k;
  return p;
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  Permutation p;
  p.image.resize(a.size());
  for (int k = 1; k <= a.size(); ++k) p.image[k - 1] = a.of(b.of(k));
  return p;
}

BraidWord compose(const BraidWord& u, const BraidWord& v) {
  if (u.strands != v.strands) throw StrandError("compose: strand count mismatch");
  std::vector<int> w(u.letters);
  w.insert(w.end(), v.letters.begin(), v.letters.end());
  return BraidWord(u.strands, std::move(w));
}

BraidWord inverse(const BraidWord& u) {
  std::vector<int> w(u.letters.rbegin(), u.letters.rend());
  for (int& x : w) x = -x;
  return BraidWord(u.strands, std::move(w));
}

Permutation permutation(const BraidWord& u) {
  // state[p-1] = strand currently at position p.
  std::vector<int> state(u.strands);
  std::iota(state.begin(), state.end(), 1);
  for (int x : u.letters) {
    int i = std::abs(x);
    std::swap(state[i - 1], state[i]);
  }
  Permutation pi;
  pi.image.resize(u.strands);
  for (int p = 1; p <= u.strands; ++p) pi.image[state[p - 1] - 1] = p;
  return pi;
}

int writhe(const BraidWord& u) {
  int s = 0;
  for (int x : u.letters) s += (x > 0 ? 1 : -1);
  return s;
}

std::vector<int> free_reduce(std::vector<int> w) {
  std::vector<int> out;
  out.reserve(w.size());
  for (int x : w) {
    if (!out.empty() && out.back() == -x)
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

namespace {

// Finds the handle with the leftmost closing letter: positions s < t with
// |w[s]| == |w[t]| == i, opposite signs, and only letters of index > i
// strictly between. Returns true and reduces in place, or returns false.
bool reduce_first_handle(std::vector<int>& w) {
  const int L = static_cast<int>(w.size());
  for (int t = 0; t < L; ++t) {
    const int i = std::abs(w[t]);
    for (int s = t - 1; s >= 0; --s) {
      const int j = std::abs(w[s]);
      if (j < i) break;
      if (j == i) {
        if (w[s] != -w[t]) break;
        // Reduce the handle w[s..t].
        const int e = w[s] > 0 ? 1 : -1;
        std::vector<int> out;
        out.reserve(w.size() + 2 * (t - s));
        out.insert(out.end(), w.begin(), w.begin() + s);
        for (int u = s + 1; u < t; ++u) {
          const int k = std::abs(w[u]);
          const int d = w[u] > 0 ? 1 : -1;
          if (k == i + 1) {
            out.push_back(-e * (i + 1));
            out.push_back(d * i);
            out.push_back(e * (i + 1));
          } else {
            out.push_back(w[u]);
          }
        }
        out.insert(out.end(), w.begin() + t + 1, w.end());
        w = free_reduce(std::move(out));
        return true;
      }
      // j > i: interior letter, keep scanning.
    }
  }
  return false;
}

}  // namespace

std::vector<int> handle_reduce(std::vector<int> w) {
  w = free_reduce(std::move(w));
  long guard = 0;
  while (reduce_first_handle(w)) {
    if (++guard > 20'000'000)
      throw InternalError("handle reduction exceeded the step budget");
  }
  return w;
}

bool is_trivial(const BraidWord& u) {
  std::vector<int> w = free_reduce(u.letters);
  if (w.empty()) return true;
  if (writhe(u) != 0) return false;
  if (!permutation(u).is_identity()) return false;
  return handle_reduce(std::move(w)).empty();
}

bool equal(const BraidWord& u, const BraidWord& v) {
  if (u.strands != v.strands) throw StrandError("equal: strand count mismatch");
  return is_trivial(compose(u, inverse(v)));
}

BraidWord delete_strands(const BraidWord& u, const std::vector<int>& keep) {
  if (keep.empty()) throw RangeError("delete_strands: keep set is empty");
  std::vector<char> kept(u.strands + 1, 0);
  for (int s : keep) {
    if (s < 1 || s > u.strands) throw RangeError("delete_strands: strand out of range");
    kept[s] = 1;
  }
  std::vector<int> state(u.strands);
  std::iota(state.begin(), state.end(), 1);
  std::vector<int> out;
  for (int x : u.letters) {
    int i = std::abs(x);
    int a = state[i - 1], b = state[i];
    if (kept[a] && kept[b]) {
      int idx = 1;
      for (int p = 0; p < i - 1; ++p)
        if (kept[state[p]]) ++idx;
      out.push_back(x > 0 ? idx : -idx);
    }
    std::swap(state[i - 1], state[i]);
  }
  int l2 = 0;
  for (int s = 1; s <= u.strands; ++s) l2 += kept[s];
  return BraidWord(l2, std::move(out));
}

namespace {

// Appends the wire word for a block crossing: the block of p wires starting
// at wire position W crosses the block of q wires to its right, sign e.
void block_cross(std::vector<int>& out, int W, int p, int q, int e) {
  for (int j = 1; j <= q; ++j)
    for (int m = W + p + j - 2; m >= W + j - 1; --m) out.push_back(e * m);
}

}  // namespace

BraidWord cable_strand(const BraidWord& u, int k, int n, const BraidWord& inner) {
  if (k < 1 || k > u.strands) throw RangeError("cable_strand: strand out of range");
  if (n < 1) throw RangeError("cable_strand: cable width must be >= 1");
  if (inner.strands != n) throw StrandError("cable_strand: inner braid must have n strands");
  std::vector<int> state(u.strands);
  std::iota(state.begin(), state.end(), 1);
  auto width = [&](int s) { return s == k ? n : 1; };
  auto wire_pos = [&](int slot) {
    int W = 1;
    for (int p = 0; p < slot - 1; ++p) W += width(state[p]);
    return W;
  };
  std::vector<int> out;
  for (int x : u.letters) {
    int i = std::abs(x);
    int e = x > 0 ? 1 : -1;
    int a = state[i - 1], b = state[i];
    block_cross(out, wire_pos(i), width(a), width(b), e);
    std::swap(state[i - 1], state[i]);
  }
  int slot = 1;
  while (state[slot - 1] != k) ++slot;
  const int W = wire_pos(slot);
  for (int x : inner.letters) out.push_back(x > 0 ? (x + W - 1) : (x - W + 1));
  return BraidWord(u.strands + n - 1, std::move(out));
}

std::optional<CableParts> extract_cable(const BraidWord& u, int p, int n) {
  if (n < 1 || p < 1 || p + n - 1 > u.strands) throw RangeError("extract_cable: block out of range");
  Permutation pi = permutation(u);
  int qmin = u.strands + 1, qmax = 0;
  for (int s = p; s < p + n; ++s) {
    qmin = std::min(qmin, pi.of(s));
    qmax = std::max(qmax, pi.of(s));
  }
  if (qmax - qmin + 1 != n) return std::nullopt;  // image not consecutive

  std::vector<int> block(n), rest;
  std::iota(block.begin(), block.end(), p);
  for (int s = 1; s <= u.strands; ++s)
    if (s <= p || s >= p + n) rest.push_back(s);

  BraidWord inner = delete_strands(u, block);
  BraidWord outer = delete_strands(u, rest);
  // The tube test: u must actually be the cable of `outer` with `inner`.
  if (!equal(u, cable_strand(outer, p, n, inner))) return std::nullopt;
  return CableParts{std::move(inner), std::move(outer)};
}

bool is_simple(const BraidWord& u) {
  std::vector<int> state(u.strands);
  std::iota(state.begin(), state.end(), 1);
  std::vector<std::vector<int>> crossings(u.strands + 1, std::vector<int>(u.strands + 1, 0));
  for (int x : u.letters) {
    if (x < 0) return false;
    int i = x;
    int a = state[i - 1], b = state[i];
    if (++crossings[std::min(a, b)][std::max(a, b)] > 1) return false;
    std::swap(state[i - 1], state[i]);
  }
  return true;
}

BraidWord ribbon_word(int l, int p, int q, int n) {
  if (p < 1 || q < 1 || p + n - 1 > l || q + n - 1 > l)
    throw RangeError("ribbon_word: block out of range");
  std::vector<int> out;
  if (q > p) {
    // Block steps right: the strand just right of the block crosses it.
    for (int t = 0; t < q - p; ++t)
      for (int m = p + t + n - 1; m >= p + t; --m) out.push_back(m);
  } else if (q < p) {
    for (int t = 0; t < p - q; ++t)
      for (int m = p - t - 1; m <= p - t + n - 2; ++m) out.push_back(m);
  }
  return BraidWord(l, std::move(out));
}

}  // namespace bvn
