#include "bvn/text.hpp"

#include <cctype>
#include <sstream>

#include <json.hpp>

namespace bvn {

namespace {

struct Cursor {
  const std::string& s;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool eof() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    if (i >= s.size()) throw ParseError("unexpected end of input");
    return s[i];
  }
  char take() {
    char c = peek();
    ++i;
    return c;
  }
  void expect(char c) {
    char got = take();
    if (got != c)
      throw ParseError(std::string("expected '") + c + "' but found '" + got + "' at offset " +
                       std::to_string(i - 1));
  }
  bool try_take(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }
  std::string word() {
    skip_ws();
    size_t start = i;
    while (i < s.size() && (std::isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_' ||
                            s[i] == '^' || s[i] == '-' || s[i] == '(' || s[i] == ')' || s[i] == '.'))
      ++i;
    if (i == start) throw ParseError("expected a token at offset " + std::to_string(start));
    return s.substr(start, i - start);
  }
  long integer() {
    skip_ws();
    size_t start = i;
    if (i < s.size() && s[i] == '-') ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw ParseError("expected an integer at offset " + std::to_string(start));
    return std::stol(s.substr(start, i - start));
  }
};

void format_tree_rec(const Tree& t, size_t& i, std::ostringstream& os, bool spaced) {
  const auto& shape = t.shape();
  if (!shape[i]) {
    os << '.';
    ++i;
    return;
  }
  os << '(';
  ++i;
  for (int k = 0; k < t.arity(); ++k) {
    if (spaced && k > 0) os << ' ';
    format_tree_rec(t, i, os, spaced);
  }
  os << ')';
}

void parse_tree_rec(Cursor& c, int arity, std::vector<uint8_t>& shape) {
  if (c.try_take('.')) {
    shape.push_back(0);
    return;
  }
  c.expect('(');
  shape.push_back(1);
  for (int k = 0; k < arity; ++k) parse_tree_rec(c, arity, shape);
  c.expect(')');
}

}  // namespace

std::string format_tree(const Tree& t, bool spaced) {
  std::ostringstream os;
  size_t i = 0;
  format_tree_rec(t, i, os, spaced);
  return os.str();
}

std::string format_forest(const Forest& f) {
  std::ostringstream os;
  for (int r = 0; r < f.roots(); ++r) {
    if (r) os << ' ';
    os << format_tree(f.trees()[r]);
  }
  return os.str();
}

Tree parse_tree(const std::string& text, int arity) {
  Cursor c{text};
  std::vector<uint8_t> shape;
  parse_tree_rec(c, arity, shape);
  if (!c.eof()) throw ParseError("trailing input after tree");
  return Tree(arity, std::move(shape));
}

Forest parse_forest(const std::string& text, int arity) {
  Cursor c{text};
  std::vector<Tree> trees;
  while (!c.eof()) {
    std::vector<uint8_t> shape;
    parse_tree_rec(c, arity, shape);
    trees.push_back(Tree(arity, std::move(shape)));
  }
  if (trees.empty()) throw ParseError("empty forest");
  return Forest(arity, std::move(trees));
}

std::string format_braid(const BraidWord& w) {
  std::ostringstream os;
  for (size_t k = 0; k < w.letters.size(); ++k) {
    if (k) os << ' ';
    int x = w.letters[k];
    os << (x > 0 ? 's' : 'S') << std::abs(x);
  }
  return os.str();
}

BraidWord parse_braid(const std::string& text, int strands) {
  Cursor c{text};
  std::vector<int> letters;
  while (!c.eof()) {
    char h = c.take();
    if (h != 's' && h != 'S') throw ParseError("braid letters are s<k> or S<k>");
    long k = c.integer();
    if (k < 1 || k > strands - 1)
      throw ParseError("braid letter index " + std::to_string(k) + " out of range");
    letters.push_back(h == 's' ? static_cast<int>(k) : -static_cast<int>(k));
  }
  return BraidWord(strands, std::move(letters));
}

std::string format_label(const LabelWord& w, const SubgroupSpec& spec) {
  if (w.empty()) return "-";
  std::ostringstream os;
  for (size_t k = 0; k < w.letters.size(); ++k) {
    if (k) os << ' ';
    auto [idx, sign] = w.letters[k];
    // B_n generator names sX have the S-for-inverse shorthand.
    const std::string& name = spec.gen_names[idx];
    if (sign < 0 && name.size() >= 2 && name[0] == 's' &&
        std::isdigit(static_cast<unsigned char>(name[1])))
      os << 'S' << name.substr(1);
    else
      os << name << (sign > 0 ? "" : "^-1");
  }
  return os.str();
}

LabelWord parse_label(const std::string& text, const SubgroupSpec& spec) {
  LabelWord out;
  Cursor c{text};
  if (c.try_take('-')) {
    if (!c.eof()) throw ParseError("'-' must stand alone as the empty label");
    return out;
  }
  while (!c.eof()) {
    std::string tok = c.word();
    int sign = 1;
    if (tok.size() > 3 && tok.substr(tok.size() - 3) == "^-1") {
      sign = -1;
      tok = tok.substr(0, tok.size() - 3);
    } else if (tok.size() >= 2 && tok[0] == 'S' &&
               std::isdigit(static_cast<unsigned char>(tok[1]))) {
      sign = -1;
      tok = "s" + tok.substr(1);
    }
    int idx = spec.index_of(tok);
    if (idx < 0) throw ParseError("unknown subgroup generator '" + tok + "'");
    out.letters.push_back({idx, sign});
  }
  return out;
}

std::string format_element(const Element& v) {
  std::ostringstream os;
  os << "bv{n=" << v.arity() << ", r=" << v.roots() << ", H=" << v.spec->name << "; domain: "
     << format_forest(v.domain) << "; braid: " << format_braid(v.braid) << "; labels: [";
  for (int i = 0; i < v.strands(); ++i) {
    if (i) os << ", ";
    os << format_label(v.labels[i], *v.spec);
  }
  os << "]; range: " << format_forest(v.range) << "}";
  return os.str();
}

namespace {

std::string slice_until(Cursor& c, char stop) {
  c.skip_ws();
  size_t start = c.i;
  while (c.i < c.s.size() && c.s[c.i] != stop) ++c.i;
  if (c.i >= c.s.size()) throw ParseError(std::string("missing '") + stop + "'");
  return c.s.substr(start, c.i - start);
}

}  // namespace

Element parse_element(const std::string& text, SpecPtr spec) {
  Cursor c{text};
  for (char ch : std::string("bv{")) c.expect(ch);
  c.expect('n');
  c.expect('=');
  int n = static_cast<int>(c.integer());
  c.expect(',');
  c.expect('r');
  c.expect('=');
  int r = static_cast<int>(c.integer());
  c.expect(',');
  c.expect('H');
  c.expect('=');
  std::string hname = slice_until(c, ';');
  while (!hname.empty() && std::isspace(static_cast<unsigned char>(hname.back()))) hname.pop_back();
  c.expect(';');

  if (spec) {
    if (spec->name != hname)
      throw ParseError("element names H=" + hname + " but the provided spec is " + spec->name);
    if (spec->arity != n) throw ParseError("element arity differs from the provided spec");
  } else if (hname == "Id") {
    spec = std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n));
  } else if (hname == "B" + std::to_string(n)) {
    spec = std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n));
  } else {
    throw ParseError("subgroup '" + hname + "' requires an explicit spec (--H file)");
  }

  auto field = [&](const char* key) {
    for (const char* p = key; *p; ++p) c.expect(*p);
    c.expect(':');
  };
  field("domain");
  Forest domain = parse_forest(slice_until(c, ';'), n);
  c.expect(';');
  field("braid");
  std::string braid_text = slice_until(c, ';');
  c.expect(';');
  field("labels");
  c.expect('[');
  std::vector<LabelWord> labels;
  if (!c.try_take(']')) {
    for (;;) {
      c.skip_ws();
      size_t start = c.i;
      while (c.i < c.s.size() && c.s[c.i] != ',' && c.s[c.i] != ']') ++c.i;
      if (c.i >= c.s.size()) throw ParseError("unterminated label list");
      labels.push_back(parse_label(c.s.substr(start, c.i - start), *spec));
      if (c.try_take(']')) break;
      c.expect(',');
    }
  }
  c.expect(';');
  field("range");
  Forest range = parse_forest(slice_until(c, '}'), n);
  c.expect('}');
  if (!c.eof()) throw ParseError("trailing input after element");
  if (domain.roots() != r || range.roots() != r)
    throw ParseError("forest root count differs from the r field");

  BraidWord braid = parse_braid(braid_text, domain.leaf_count());
  return make_element(std::move(spec), std::move(domain), std::move(braid), std::move(labels),
                      std::move(range));
}

SubgroupSpec parse_subgroup_file(const std::string& content, int arity, const std::string& name) {
  SubgroupSpec spec;
  spec.arity = arity;
  spec.name = name;
  std::istringstream in(content);
  std::string line;
  while (std::getline(in, line)) {
    size_t h = line.find('#');
    if (h != std::string::npos) line = line.substr(0, h);
    bool blank = true;
    for (char ch : line) blank = blank && std::isspace(static_cast<unsigned char>(ch));
    if (blank) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("subgroup line needs 'name = word': " + line);
    std::string gname = line.substr(0, eq);
    while (!gname.empty() && std::isspace(static_cast<unsigned char>(gname.back()))) gname.pop_back();
    size_t s = 0;
    while (s < gname.size() && std::isspace(static_cast<unsigned char>(gname[s]))) ++s;
    gname = gname.substr(s);
    spec.add_generator(gname, parse_braid(line.substr(eq + 1), arity));
  }
  return spec;
}

std::string format_element_json(const Element& v) {
  nlohmann::json j;
  j["n"] = v.arity();
  j["r"] = v.roots();
  j["H"] = v.spec->name;
  j["domain"] = nlohmann::json::array();
  for (const Tree& t : v.domain.trees()) j["domain"].push_back(format_tree(t));
  j["braid"] = format_braid(v.braid);
  j["labels"] = nlohmann::json::array();
  for (const LabelWord& w : v.labels) j["labels"].push_back(format_label(w, *v.spec));
  j["range"] = nlohmann::json::array();
  for (const Tree& t : v.range.trees()) j["range"].push_back(format_tree(t));
  return j.dump(2);
}

}  // namespace bvn
