#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "bvn/diagram.hpp"
#include "bvn/generators.hpp"
#include "bvn/selftest.hpp"
#include "bvn/svg.hpp"
#include "bvn/text.hpp"

namespace bvn::cli {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read file: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// An element argument is a file path or inline bv{...} text.
std::string element_text(const std::string& arg) {
  if (arg.rfind("bv{", 0) == 0) return arg;
  return slurp(arg);
}

SpecPtr resolve_spec(const std::string& h, int n) {
  if (h.empty() || h == "Id") return std::make_shared<SubgroupSpec>(SubgroupSpec::trivial(n));
  if (h == "B" + std::to_string(n))
    return std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n));
  if (std::filesystem::exists(h)) {
    std::string name = std::filesystem::path(h).stem().string();
    return std::make_shared<SubgroupSpec>(parse_subgroup_file(slurp(h), n, name));
  }
  throw ParseError("unknown subgroup '" + h + "' (expected Id, B" + std::to_string(n) +
                   " or a spec file)");
}

Element load_element(const std::string& arg, const std::string& h) {
  const std::string text = element_text(arg);
  if (h.empty()) return parse_element(text);
  // Peek the arity from the text to build the named spec.
  size_t at = text.find("n=");
  if (at == std::string::npos) throw ParseError("element text has no arity field");
  int n = std::stoi(text.substr(at + 2));
  return parse_element(text, resolve_spec(h, n));
}

void emit(const Element& v, bool json, const std::string& out_path, std::ostream& out) {
  const std::string text = json ? format_element_json(v) : format_element(v);
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    f << text << "\n";
  } else {
    out << text << "\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"bvn - the infinitely braided Thompson groups BV_{n,r}(H)"};
  app.require_subcommand(1);

  std::string h_flag, out_path, a_arg, b_arg, word_arg;
  bool json = false, verify = false;
  int n = 2, r = 1, max_depth = 4, count = 500, max_slices = 12;
  uint64_t seed = 1;

  auto add_common = [&](CLI::App* c, bool two_elements) {
    c->add_option("a", a_arg, two_elements ? "first element (file or bv{...})"
                                           : "element (file or bv{...})")
        ->required();
    if (two_elements) c->add_option("b", b_arg, "second element (file or bv{...})")->required();
    c->add_option("--H", h_flag, "subgroup: Id, B<n>, or a spec file");
    c->add_flag("--json", json, "machine-readable output");
    c->add_option("--out", out_path, "write the result to a file");
  };

  CLI::App* c_compose = app.add_subcommand("compose", "compose two elements (left first)");
  add_common(c_compose, true);
  CLI::App* c_inverse = app.add_subcommand("inverse", "invert an element");
  add_common(c_inverse, false);
  CLI::App* c_reduce = app.add_subcommand("reduce", "reduce to the minimal representative");
  add_common(c_reduce, false);
  CLI::App* c_equal = app.add_subcommand("equal", "decide equality (exit 0 yes, 1 no)");
  add_common(c_equal, true);
  CLI::App* c_dec = app.add_subcommand("decompose", "decompose into the 2n generating set");
  add_common(c_dec, false);
  c_dec->add_flag("--verify", verify, "re-evaluate the word and check equality");
  CLI::App* c_eval = app.add_subcommand("evaluate", "evaluate a generator word");
  c_eval->add_option("word", word_arg, "generator word, e.g. \"x0 h1^-1 g_s1\"")->required();
  c_eval->add_option("--n", n, "arity")->required();
  c_eval->add_option("--H", h_flag, "subgroup: Id, B<n>, or a spec file");
  c_eval->add_flag("--json", json);
  c_eval->add_option("--out", out_path);
  CLI::App* c_render = app.add_subcommand("render", "render an element's diagram as SVG");
  add_common(c_render, false);
  CLI::App* c_self = app.add_subcommand("selftest", "run the acceptance criteria");
  c_self->add_option("--seed", seed, "random seed");
  CLI::App* c_conf = app.add_subcommand("confluence", "randomized local-confluence check");
  c_conf->add_option("--count", count, "number of random diagrams");
  c_conf->add_option("--max-slices", max_slices, "diagram size bound");
  c_conf->add_option("--seed", seed, "random seed");
  c_conf->add_option("--n", n, "arity");
  CLI::App* c_rand = app.add_subcommand("random", "deterministic random element");
  c_rand->add_option("--n", n, "arity");
  c_rand->add_option("--r", r, "number of roots");
  c_rand->add_option("--H", h_flag, "subgroup: Id, B<n>, or a spec file");
  c_rand->add_option("--seed", seed, "random seed")->required();
  c_rand->add_option("--max-depth", max_depth, "depth bound");
  c_rand->add_flag("--json", json);
  c_rand->add_option("--out", out_path);

  std::vector<std::string> argv_rev(args.rbegin(), args.rend());
  try {
    app.parse(argv_rev);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      // --help
      out << app.help();
      return 0;
    }
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (app.got_subcommand(c_compose)) {
      Element a = load_element(a_arg, h_flag);
      Element b = load_element(b_arg, h_flag);
      emit(reduce(compose(a, b)), json, out_path, out);
      return 0;
    }
    if (app.got_subcommand(c_inverse)) {
      emit(reduce(inverse(load_element(a_arg, h_flag))), json, out_path, out);
      return 0;
    }
    if (app.got_subcommand(c_reduce)) {
      emit(reduce(load_element(a_arg, h_flag)), json, out_path, out);
      return 0;
    }
    if (app.got_subcommand(c_equal)) {
      Element a = load_element(a_arg, h_flag);
      Element b = load_element(b_arg, h_flag);
      const bool eq = equal(a, b);
      out << (eq ? "true" : "false") << "\n";
      return eq ? 0 : 1;
    }
    if (app.got_subcommand(c_dec)) {
      Element a = load_element(a_arg, h_flag);
      GeneratorTable table(a.arity(), a.spec);
      GeneratorWord w = decompose_to_basis(a, table);
      out << format_word(w) << "\n";
      if (verify) {
        if (!equal(evaluate(w, table), a)) {
          err << "verification failed: the word does not evaluate back to the input\n";
          return 3;
        }
        err << "verified: evaluate(word) equals the input\n";
      }
      return 0;
    }
    if (app.got_subcommand(c_eval)) {
      SpecPtr sp = resolve_spec(h_flag, n);
      GeneratorTable table(n, sp);
      emit(evaluate(parse_word(word_arg), table), json, out_path, out);
      return 0;
    }
    if (app.got_subcommand(c_render)) {
      Element a = load_element(a_arg, h_flag);
      const std::string svg = render_svg(a);
      if (out_path.empty()) {
        out << svg;
      } else {
        std::ofstream f(out_path);
        f << svg;
      }
      return 0;
    }
    if (app.got_subcommand(c_self)) {
      auto results = run_acceptance(seed, &out);
      return all_pass(results) ? 0 : 1;
    }
    if (app.got_subcommand(c_conf)) {
      ConfluenceOptions opts;
      opts.count = count;
      opts.max_slices = max_slices;
      opts.seed = seed;
      auto sp = std::make_shared<SubgroupSpec>(SubgroupSpec::full_braid(n));
      auto rep = check_local_confluence(sp, opts);
      out << rep.counterexamples.size() << " counterexamples (" << rep.diagrams << " diagrams, "
          << rep.peaks << " peaks)\n";
      for (auto& cex : rep.counterexamples) err << cex << "\n";
      return rep.ok() ? 0 : 1;
    }
    if (app.got_subcommand(c_rand)) {
      SpecPtr sp = resolve_spec(h_flag, n);
      emit(random_element(sp, r, max_depth, seed), json, out_path, out);
      return 0;
    }
  } catch (const InternalError& e) {
    err << "internal invariant failure: " << e.what() << "\n";
    return 3;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  err << "usage error: no subcommand\n";
  return 2;
}

}  // namespace bvn::cli
