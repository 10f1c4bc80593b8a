#include "isotype/cli.h"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "isotype/normalizer.h"
#include "isotype/preorder.h"
#include "isotype/search_index.h"
#include "isotype/similarity.h"
#include "isotype/synthesis.h"
#include "isotype/typing.h"

namespace isotype {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Inline text, or the contents of FILE for `@FILE`.
std::string input(const std::string& arg) {
  if (arg.size() > 1 && arg[0] == '@') {
    std::string s = read_file(arg.substr(1));
    while (!s.empty() && (s.back() == '\n' || s.back() == '\r' || s.back() == ' ')) s.pop_back();
    return s;
  }
  return arg;
}

Type type_arg(const std::string& arg) { return parse_type(input(arg)); }
Term term_arg(const std::string& arg) { return parse_term(input(arg)); }

const char* provenance_name(Provenance p) {
  switch (p) {
    case Provenance::Stock:
      return "stock";
    case Provenance::LeqWitness:
      return "leq-witness";
    case Provenance::NormCertificate:
      return "normalization";
    case Provenance::Similarity:
      return "similarity";
    case Provenance::Composite:
      return "composite";
  }
  return "?";
}

void print_derivation(std::ostream& out, const char* label, const TypingDerivation& d) {
  out << "# derivation " << label << "\n" << format_typing(d);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Type isomorphisms with intersection and union types", "isotype"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::string a, b, file, out_path;
  bool trace = false, witness = false, strong = false, derivation = false;
  int code = kPositive;

  auto* parse = app.add_subcommand("parse", "Parse and print a type");
  parse->add_option("TYPE", a)->required();
  parse->callback([&] {
    Type t = type_arg(a);
    out << print_type(t) << "\n";
  });

  auto* nfc = app.add_subcommand("nf", "Normal form of a type");
  nfc->add_option("TYPE", a)->required();
  nfc->add_flag("--trace", trace, "Print the rewrite certificate");
  nfc->callback([&] {
    Normalized n = normalize(type_arg(a));
    out << print_type(n.normal) << "\n";
    if (trace) {
      std::istringstream lines(format_certificate(n.certificate));
      for (std::string l; std::getline(lines, l);) out << "# " << l << "\n";
      out << "# fwd " << print_term(n.certificate.witness_fwd) << "\n";
      out << "# bwd " << print_term(n.certificate.witness_bwd) << "\n";
    }
  });

  auto* leqc = app.add_subcommand("leq", "Decide the normalization preorder");
  leqc->add_option("A", a)->required();
  leqc->add_option("B", b)->required();
  leqc->add_flag("--witness", witness, "Print the coercion term");
  leqc->callback([&] {
    Type s = type_arg(a), t = type_arg(b);
    auto w = leq_witness(s, t);
    out << (w ? "leq" : "not leq") << "\n";
    if (w && witness) out << print_term(*w) << "\n";
    code = w ? kPositive : kNegative;
  });

  auto* eq = app.add_subcommand("equiv", "Decide semantic equivalence");
  eq->add_option("A", a)->required();
  eq->add_option("B", b)->required();
  eq->callback([&] {
    bool r = sem_equiv(type_arg(a), type_arg(b));
    out << (r ? "equivalent" : "not equivalent") << "\n";
    code = r ? kPositive : kNegative;
  });

  auto* sim = app.add_subcommand("similar", "Similarity of normal forms");
  sim->add_option("A", a)->required();
  sim->add_option("B", b)->required();
  sim->add_flag("--strong", strong, "Identity permutations only");
  sim->add_flag("--derivation", derivation, "Print the similarity derivation");
  sim->callback([&] {
    CanonicalType h = nf(type_arg(a)), k = nf(type_arg(b));
    auto d = similar(h, k, strong);
    out << (d ? "similar" : "not similar") << "\n";
    if (d && derivation) out << format_derivation(*d);
    code = d ? kPositive : kNegative;
  });

  auto* iso = app.add_subcommand("iso", "Synthesize an isomorphism witness");
  iso->add_option("A", a)->required();
  iso->add_option("B", b)->required();
  iso->add_flag("--strong", strong, "Require a strong witness");
  iso->add_flag("--emit-derivation", derivation, "Print typing derivations of both terms");
  iso->callback([&] {
    Type s = type_arg(a), t = type_arg(b);
    auto w = synthesize_iso(s, t, strong);
    if (!w) {
      out << "no witness found (similarity-incomplete)\n";
      code = kNegative;
      return;
    }
    out << print_term(w->fwd) << "\n" << print_term(w->bwd) << "\n";
    out << "# strong " << (w->strong ? "yes" : "no") << "\n";
    out << "# provenance " << provenance_name(w->provenance) << "\n";
    if (derivation) {
      std::string why;
      auto ds = emit_witness_derivations(*w, &why);
      if (!ds) {
        out << "# derivation unavailable: " << why << "\n";
      } else {
        print_derivation(out, "fwd", ds->fwd);
        print_derivation(out, "bwd", ds->bwd);
      }
    }
  });

  auto* ver = app.add_subcommand("verify", "Check that two terms are inverse FHPs");
  ver->add_option("P", a)->required();
  ver->add_option("Q", b)->required();
  ver->callback([&] {
    bool r = verify_inverse_pair(term_arg(a), term_arg(b));
    out << (r ? "verified" : "not an inverse pair") << "\n";
    code = r ? kPositive : kNegative;
  });

  auto* tc = app.add_subcommand("typecheck", "Check a serialized typing derivation");
  tc->add_option("FILE", file)->required();
  tc->callback([&] {
    TypingDerivation d = parse_typing(read_file(file));
    CheckResult r = check_derivation(d);
    out << (r ? "ok" : "rejected: " + r.diagnostic) << "\n";
    code = r ? kPositive : kNegative;
  });

  auto* ib = app.add_subcommand("index-build", "Build a signature index");
  ib->add_option("CORPUS", file)->required();
  ib->add_option("-o,--output", out_path, "Index file")->required();
  ib->callback([&] {
    std::ifstream in(file, std::ios::binary);
    if (!in) throw UsageError("cannot read '" + file + "'");
    std::vector<CorpusDiagnostic> diags;
    Index ix = build_index(in, &diags);
    for (const auto& d : diags) err << file << ":" << d.line << ": " << d.message << "\n";
    save_index(ix, out_path);
    out << "indexed " << ix.entries().size() << " entries\n";
  });

  auto* iq = app.add_subcommand("index-query", "Find corpus entries isomorphic to a type");
  iq->add_option("IDX", file)->required();
  iq->add_option("TYPE", a)->required();
  iq->add_flag("--strong", strong, "Strong isomorphisms only");
  iq->callback([&] {
    Index ix = load_index(file);
    auto hits = query(ix, type_arg(a), strong);
    for (const auto& h : hits) {
      out << h.name << " : " << print_type(h.declared) << "\n";
      out << "  to   " << print_term(h.witness.fwd) << "\n";
      out << "  from " << print_term(h.witness.bwd) << "\n";
    }
    if (hits.empty()) out << "no hits\n";
    code = hits.empty() ? kNegative : kPositive;
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IndexFormatError& e) {
    err << "index error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotNormal& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const BudgetExceeded& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternal;
  }
  return code;
}

}  // namespace isotype
