#include "bvn/garside.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>

namespace bvn {

namespace {

Permutation transposition(int l, int i) {
  Permutation p = Permutation::identity(l);
  std::swap(p.image[i - 1], p.image[i]);
  return p;
}

Permutation half_twist(int l) {
  Permutation p;
  p.image.resize(l);
  for (int i = 1; i <= l; ++i) p.image[i - 1] = l + 1 - i;
  return p;
}

// tau(s) = Delta^-1 s Delta; on permutations, conjugation by the reversal.
Permutation tau(const Permutation& p) {
  const int l = p.size();
  Permutation w0 = half_twist(l);
  return w0 * p * w0;
}

bool has_descent(const Permutation& p, int i) { return p.of(i) > p.of(i + 1); }

// Greatest common left-divisor of two permutation braids: greedily peel
// common initial letters.
Permutation meet(Permutation a, Permutation b) {
  const int l = a.size();
  std::vector<int> word;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 1; i < l; ++i) {
      if (has_descent(a, i) && has_descent(b, i)) {
        word.push_back(i);
        std::swap(a.image[i - 1], a.image[i]);  // a <- a o s_i
        std::swap(b.image[i - 1], b.image[i]);
        progress = true;
        break;
      }
    }
  }
  // Rebuild the permutation of the peeled word (letters applied in order).
  Permutation m = Permutation::identity(l);
  std::vector<int> state(l);
  std::iota(state.begin(), state.end(), 1);
  for (int i : word) std::swap(state[i - 1], state[i]);
  for (int p = 1; p <= l; ++p) m.image[state[p - 1] - 1] = p;
  return m;
}

}  // namespace

std::vector<int> simple_word(const Permutation& p) {
  Permutation q = p;
  const int l = q.size();
  std::vector<int> out;
  bool progress = true;
  while (progress) {
    progress = false;
    for (int i = 1; i < l; ++i) {
      if (has_descent(q, i)) {
        out.push_back(i);
        std::swap(q.image[i - 1], q.image[i]);
        progress = true;
        break;
      }
    }
  }
  return out;
}

GarsideNF garside_nf(const BraidWord& u) {
  const int l = u.strands;
  const Permutation id = Permutation::identity(l);
  const Permutation w0 = half_twist(l);

  GarsideNF nf;
  nf.strands = l;

  // Convert letters to Delta^k * (simple factors).
  for (int x : u.letters) {
    const int i = std::abs(x);
    if (x > 0) {
      nf.simples.push_back(transposition(l, i));
    } else {
      // sigma_i^-1 = Delta^-1 * (s_i o w0); shift the Delta to the front.
      nf.delta -= 1;
      for (Permutation& s : nf.simples) s = tau(s);
      nf.simples.push_back(transposition(l, i) * w0);
    }
  }

  // Normalize: local sliding until every adjacent pair is left-weighted.
  long guard = 0;
  bool changed = true;
  while (changed) {
    changed = false;
    // Drop identities, absorb full twists.
    for (size_t j = 0; j < nf.simples.size();) {
      if (nf.simples[j] == id) {
        nf.simples.erase(nf.simples.begin() + j);
        changed = true;
      } else if (nf.simples[j] == w0) {
        nf.simples.erase(nf.simples.begin() + j);
        for (size_t k = 0; k < j; ++k) nf.simples[k] = tau(nf.simples[k]);
        nf.delta += 1;
        changed = true;
      } else {
        ++j;
      }
    }
    for (size_t j = 0; j + 1 < nf.simples.size(); ++j) {
      Permutation& a = nf.simples[j];
      Permutation& b = nf.simples[j + 1];
      // u = meet(a^-1 Delta, b); left-weighted iff u is trivial.
      Permutation comp = w0 * a.inverse();
      Permutation slide = meet(comp, b);
      if (!slide.is_identity()) {
        a = slide * a;                 // a' = a then slide
        b = b * slide.inverse();       // b' = slide^-1 then b
        changed = true;
      }
    }
    if (++guard > 1'000'000) throw InternalError("garside normalization did not stabilize");
  }
  return nf;
}

BraidWord garside_word(const GarsideNF& nf) {
  const int l = nf.strands;
  std::vector<int> out;
  std::vector<int> dw = simple_word(half_twist(l));
  if (nf.delta >= 0) {
    for (int k = 0; k < nf.delta; ++k) out.insert(out.end(), dw.begin(), dw.end());
  } else {
    std::vector<int> dinv(dw.rbegin(), dw.rend());
    for (int& x : dinv) x = -x;
    for (int k = 0; k < -nf.delta; ++k) out.insert(out.end(), dinv.begin(), dinv.end());
  }
  for (const Permutation& s : nf.simples) {
    std::vector<int> sw = simple_word(s);
    out.insert(out.end(), sw.begin(), sw.end());
  }
  return BraidWord(l, std::move(out));
}

bool equal_garside(const BraidWord& u, const BraidWord& v) {
  if (u.strands != v.strands) throw StrandError("equal_garside: strand count mismatch");
  return garside_nf(u) == garside_nf(v);
}

}  // namespace bvn
