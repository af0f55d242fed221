#pragma once

#include <string>

#include "bvn/element.hpp"

namespace bvn {

// Canonical text forms. The grammar is the single owned surface; library
// types never parse themselves.
//
//   tree    := "." | "(" tree{n} ")"          (whitespace optional)
//   forest  := tree (" " tree)*
//   braid   := ("s<k>" | "S<k>")*             (S<k> = s<k>^-1)
//   label   := "-" | token+                    token := name | name^-1
//   element := bv{n=<n>, r=<r>, H=<name>; domain: <forest>;
//               braid: <word>; labels: [<label>, ...]; range: <forest>}

std::string format_tree(const Tree& t, bool spaced = true);
std::string format_forest(const Forest& f);
std::string format_braid(const BraidWord& w);
std::string format_label(const LabelWord& w, const SubgroupSpec& spec);
std::string format_element(const Element& v);

Tree parse_tree(const std::string& text, int arity);
Forest parse_forest(const std::string& text, int arity);
BraidWord parse_braid(const std::string& text, int strands);
LabelWord parse_label(const std::string& text, const SubgroupSpec& spec);

// Parses an element. If `spec` is null, H must be "Id" or "B<n>"; otherwise
// the named spec is used (its name must match the H field).
Element parse_element(const std::string& text, SpecPtr spec = nullptr);

// Subgroup spec file: one generator per line, "name = <braid word in B_n>".
SubgroupSpec parse_subgroup_file(const std::string& content, int arity, const std::string& name);

std::string format_element_json(const Element& v);

}  // namespace bvn
