#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bvn/element.hpp"

namespace bvn {

enum class SliceKind { Split, Merge, White, Cross };

// One layer of a layered wiring diagram. `pos` is the 1-based wire position
// the slice acts on; Cross acts on (pos, pos+1) with sign +1 drawn as the
// left wire passing over.
struct Slice {
  SliceKind kind;
  int pos = 1;
  int sign = 1;        // Cross only
  LabelWord label;     // White only

  friend bool operator==(const Slice&, const Slice&) = default;
};

// A braided strand diagram in layered form. Wire bookkeeping runs from
// `sources` wires at the top to sinks() at the bottom; validity is checked
// on construction.
struct Diagram {
  SpecPtr spec;
  int arity = 2;
  int sources = 1;
  std::vector<Slice> slices;

  int sinks() const;
};

Diagram make_diagram(SpecPtr spec, int arity, int sources, std::vector<Slice> slices);

// Wire counts before every slice (size slices+1; back() = sinks).
std::vector<int> wire_profile(const Diagram& d);

Diagram from_element(const Element& v);

// Carves normal_form(d) into an element; NotAnElementError when the reduced
// shape is not source->splits->crossings->whites->merges with equal source
// and sink counts.
Element to_element(const Diagram& d);

// A located instance of one of the six moves.
struct MoveInstance {
  int kind = 0;   // 1..6
  int a = -1;     // primary slice index
  int b = -1;     // secondary slice index (pattern end), -1 if unused
  int variant = 0;  // disambiguates symmetric cases (5: which wire splits / merge side; 6: merge=0 split=1)
  std::string describe() const;
};

std::vector<MoveInstance> enabled_moves(const Diagram& d);

Diagram apply_move(const Diagram& d, const MoveInstance& m);

// Move fixpoint. Every step asserts the termination measure: splits+merges
// strictly decrease under moves 1-2 and never increase otherwise.
Diagram normal_form(const Diagram& d);

// Equality of layered diagrams: far-commutation of disjoint-support slices
// is identified via a canonical linearization; white labels and maximal
// crossing runs are compared up to braid equality.
bool diagram_equal(const Diagram& d1, const Diagram& d2);

// Canonical linearization (exposed for golden tests).
Diagram canonicalize(const Diagram& d);

// Reduced-shape predicates of the bijection proof: at most one white per
// source-to-sink path, no merge before a split, crossings after all splits
// and before all whites/merges.
bool reduced_shape_ok(const Diagram& d, std::string* why = nullptr);

std::string dump(const Diagram& d);

// Deterministic random diagrams: element-shaped (r sources and sinks) or
// arbitrary fuzz shapes.
Diagram random_diagram(SpecPtr spec, int max_slices, uint64_t seed, bool element_shaped);

struct ConfluenceOptions {
  int count = 100;
  int max_slices = 12;
  uint64_t seed = 1;
  // Test hook: tampers with one branch of each peak when set.
  std::function<Diagram(const Diagram&, int)> tamper;
};

struct ConfluenceReport {
  int diagrams = 0;
  int peaks = 0;
  std::vector<std::string> counterexamples;
  bool ok() const { return counterexamples.empty(); }
};

ConfluenceReport check_local_confluence(const SpecPtr& spec, const ConfluenceOptions& opts);

}  // namespace bvn
