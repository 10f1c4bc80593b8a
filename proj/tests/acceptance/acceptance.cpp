// Acceptance suite: one PASS/FAIL line per criterion.

#include <bitset>
#include <chrono>
#include <deque>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "isotype/cli.h"
#include "isotype/normalizer.h"
#include "isotype/preorder.h"
#include "isotype/search_index.h"
#include "isotype/similarity.h"
#include "isotype/synthesis.h"
#include "isotype/typing.h"
#include "support/universe.h"

using namespace isotype;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

Type T(const std::string& s) { return parse_type(s); }
Term M(const std::string& s) { return parse_term(s); }

struct Cli {
  int code;
  std::vector<std::string> lines;
};

Cli cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  Cli r{code, {}};
  std::istringstream in(out.str());
  for (std::string l; std::getline(in, l);) r.lines.push_back(l);
  return r;
}

std::vector<CanonicalType> distinct_normal_forms(const std::vector<Type>& types) {
  std::map<std::string, CanonicalType> forms;
  for (const auto& t : types) {
    CanonicalType n = nf(t);
    forms.emplace(n.key(), n);
  }
  std::vector<CanonicalType> out;
  for (auto& [k, n] : forms) out.push_back(n);
  return out;
}

Outcome swap_equation() {
  Cli iso = cli({"iso", "p1 -> p2 -> p3", "p2 -> p1 -> p3"});
  if (iso.code != 0 || iso.lines.size() < 2) return {false, "iso did not produce a pair"};
  Term fwd = M(iso.lines[0]);
  if (beta_normalize(fwd) != M("\\x y1 y2. x y2 y1")) return {false, "fwd is " + iso.lines[0]};
  Cli ver = cli({"verify", iso.lines[0], iso.lines[1]});
  if (ver.code != 0) return {false, "verify rejected the pair"};
  return {true, "fwd = " + iso.lines[0]};
}

Outcome normalization_examples() {
  CanonicalType a = nf(T("((p1 -> p2) & p2) | p3"));
  CanonicalType b = nf(T("((p1 -> p2) | p2) & p3"));
  bool ok = a == canonicalize(T("p2 | p3")) && b == canonicalize(T("(p1 -> p2) & p3"));
  return {ok, print_type(a) + " ; " + print_type(b)};
}

Outcome grand_example() {
  Type s = T("p5 -> p6 -> p7 -> (p1 -> p3) | (omega -> p2 -> p4)");
  Type t = T("p7 -> p5 -> p6 -> (omega -> p1 -> p3) | (p2 -> p4)");
  Term first = M("\\x y1 y2 y3 y4 y5. x y3 y1 y2 y5 y4");
  Term second = M("\\x y1 y2 y3 y4 y5. x y2 y3 y1 y5 y4");
  if (!similar(nf(s), nf(t), false)) return {false, "normal forms not found similar"};
  // The displayed pair proves t -> s first; the other orientation swaps it.
  auto back = synthesize_iso(t, s, false);
  auto forth = synthesize_iso(s, t, false);
  if (!back || !forth) return {false, "no witness"};
  bool ok = betaeta_equal(back->fwd, first) && betaeta_equal(back->bwd, second) &&
            betaeta_equal(forth->fwd, second) && betaeta_equal(forth->bwd, first) &&
            verify_inverse_pair(back->fwd, back->bwd) && verify_inverse_pair(forth->fwd, forth->bwd);
  return {ok, "t->s fwd = " + print_term(back->fwd)};
}

Outcome strong_split() {
  auto w = synthesize_iso(T("omega -> p -> p"), T("p -> p"), false);
  if (!w) return {false, "general witness missing"};
  if (!betaeta_equal(w->fwd, M("\\x y z. x z y"))) return {false, "fwd is " + print_term(w->fwd)};
  if (synthesize_iso(T("omega -> p -> p"), T("p -> p"), true)) return {false, "strong witness returned"};
  Cli c = cli({"iso", "--strong", "omega -> p -> p", "p -> p"});
  if (c.code != 1) return {false, "cli --strong exit code " + std::to_string(c.code)};
  return {true, "general fwd = " + print_term(w->fwd) + ", strong: none"};
}

Outcome stock_isos() {
  Type p = T("p"), q = T("q"), r = T("r");
  std::size_t ok = 0;
  std::string bad;
  for (StockIso s : all_stock_isos()) {
    std::vector<Type> args;
    switch (s) {
      case StockIso::IdemAnd:
      case StockIso::IdemOr:
        args = {p};
        break;
      case StockIso::CommAnd:
      case StockIso::CommOr:
        args = {p, q};
        break;
      case StockIso::EraseAnd:
      case StockIso::EraseOr:
        args = {T("p & q"), p};
        break;
      default:
        args = {p, q, r};
    }
    IsoWitness w = stock_witness(s, args);
    bool arrow = s == StockIso::DistArrowAnd || s == StockIso::DistArrowOr;
    Term expected = arrow ? M("\\x y. x y") : identity_term();
    if (verify_inverse_pair(w.fwd, w.bwd) && w.fwd == expected && w.bwd == expected && w.strong) {
      ++ok;
    } else {
      bad += std::string(" ") + stock_name(s);
    }
  }
  return {ok == 12, std::to_string(ok) + "/12 verified" + bad};
}

// Plausible trees for |- \x.x : p -> s -> p, all of which must fail.
std::vector<TypingDerivation> identity_candidates() {
  std::vector<TypingDerivation> out;
  const Type p = T("p"), s = T("s"), w = Type::omega();
  const Type goal = T("p -> s -> p");
  const Type sp = T("s -> p");
  TypeEnv xp{{"x", p}};
  Term x = var("x");
  auto node = [](TypingRule r, std::string v, TypeEnv e, Term m, Type t, std::vector<TypingDerivation> ps = {}) {
    return TypingDerivation{r, std::move(v), std::move(e), std::move(m), std::move(t), std::move(ps)};
  };
  TypingDerivation ax = node(TypingRule::Ax, "", xp, x, p);
  TypingDerivation wide = node(TypingRule::Equiv, "", xp, x, T("omega -> p"), {ax});

  // Inner judgements x : p |- x : s -> p.
  std::vector<TypingDerivation> inner = {
      node(TypingRule::Ax, "", xp, x, sp),
      node(TypingRule::Equiv, "", xp, x, sp, {ax}),
      node(TypingRule::Equiv, "", xp, x, sp, {wide}),
      node(TypingRule::Adm_Omega, "", xp, x, sp),
      node(TypingRule::AndE_l, "", xp, x, sp, {node(TypingRule::Ax, "", xp, x, T("(s -> p) & p"))}),
      node(TypingRule::AndE_r, "", xp, x, sp, {node(TypingRule::Ax, "", xp, x, T("p & (s -> p)"))}),
      node(TypingRule::OrI_l, "", xp, x, sp, {ax}),
      node(TypingRule::Adm_L, "x", xp, x, sp, {wide, node(TypingRule::Ax, "", {{"x", T("omega -> p")}}, x, sp)}),
      node(TypingRule::Adm_L, "x", xp, x, sp,
           {wide, node(TypingRule::Equiv, "", {{"x", T("omega -> p")}}, x, sp,
                       {node(TypingRule::Ax, "", {{"x", T("omega -> p")}}, x, T("omega -> p"))})}),
      node(TypingRule::AndI, "", xp, x, sp, {ax, wide}),
      node(TypingRule::Adm_OrI, "x", xp, x, sp, {node(TypingRule::Ax, "", xp, x, sp), node(TypingRule::Ax, "", xp, x, sp)}),
      node(TypingRule::ArrowI, "y", xp, x, sp, {node(TypingRule::Ax, "", {{"x", p}, {"y", s}}, x, p)}),
      node(TypingRule::ArrowE, "", xp, x, sp, {ax, node(TypingRule::Adm_Omega, "", {}, x, w)}),
      node(TypingRule::Adm_C, "z", xp, x, sp, {node(TypingRule::Ax, "", {{"z", sp}}, var("z"), sp), node(TypingRule::Equiv, "", xp, x, sp, {ax})}),
  };
  for (auto& i : inner) out.push_back(node(TypingRule::ArrowI, "x", {}, identity_term(), goal, {i}));

  // Wrong binder types and root-level rules.
  out.push_back(node(TypingRule::ArrowI, "x", {}, identity_term(), goal,
                     {node(TypingRule::Ax, "", {{"x", sp}}, x, sp)}));
  out.push_back(node(TypingRule::ArrowI, "x", {}, identity_term(), goal,
                     {node(TypingRule::Ax, "", {{"x", T("omega -> p")}}, x, T("omega -> p"))}));
  TypingDerivation id_pp = *derive({}, identity_term(), T("p -> p"));
  out.push_back(node(TypingRule::Equiv, "", {}, identity_term(), goal, {id_pp}));
  out.push_back(node(TypingRule::Equiv, "", {}, identity_term(), goal,
                     {*derive({}, identity_term(), T("(omega -> p) -> omega -> p"))}));
  out.push_back(node(TypingRule::Adm_Omega, "", {}, identity_term(), goal));
  out.push_back(node(TypingRule::AndE_l, "", {}, identity_term(), goal,
                     {node(TypingRule::AndI, "", {}, identity_term(), T("(p -> s -> p) & (p -> p)"), {id_pp, id_pp})}));
  out.push_back(node(TypingRule::OrI_l, "", {}, identity_term(), goal, {id_pp}));
  TypingDerivation relabeled = id_pp;
  relabeled.type = goal;
  out.push_back(relabeled);

  // The accepted derivation for the eta-expanded term, with subjects contracted.
  TypingDerivation eta = *derive({}, M("\\x y. x y"), goal);
  TypingDerivation contracted = eta;
  contracted.term = identity_term();
  out.push_back(contracted);
  TypingDerivation contracted2 = contracted;
  contracted2.premises[0].term = x;
  contracted2.premises[0].rule = TypingRule::Equiv;
  out.push_back(contracted2);
  std::function<void(TypingDerivation&)> strip = [&](TypingDerivation& d) {
    if (d.term == M("\\y. x y")) d.term = x;
    for (auto& c : d.premises) strip(c);
  };
  TypingDerivation contracted3 = contracted;
  strip(contracted3);
  out.push_back(contracted3);
  return out;
}

Outcome typing_examples() {
  auto d = derive({}, M("\\x y. x y"), T("p -> s -> p"));
  if (!d || !check_derivation(*d).ok) return {false, "no checked derivation for \\x y. x y"};
  auto cands = identity_candidates();
  std::size_t rejected = 0;
  for (const auto& c : cands) rejected += !check_derivation(c).ok;
  bool none = !derive({}, identity_term(), T("p -> s -> p")).has_value();
  bool ok = rejected == cands.size() && cands.size() >= 20 && none;
  return {ok, "eta-expanded derivation checks (" + std::to_string(d->size()) + " nodes); " +
                  std::to_string(rejected) + "/" + std::to_string(cands.size()) + " identity trees rejected"};
}

// Every reachable normal form from t, exploring all redex choices.
std::set<std::string> all_normal_forms(const Type& t, std::size_t& states) {
  std::set<std::string> results, seen;
  std::deque<Type> todo{t};
  seen.insert(print_type(t));
  while (!todo.empty()) {
    Type cur = todo.front();
    todo.pop_front();
    auto steps = find_redexes(cur);
    if (steps.empty()) results.insert(canonicalize(cur).key());
    for (const auto& s : steps) {
      Type next = plug(cur, s.position, s.after);
      if (seen.insert(print_type(next)).second) todo.push_back(next);
    }
  }
  states = seen.size();
  return results;
}

Outcome rewrite_properties() {
  const auto& u = testing::universe();
  std::ostringstream detail;
  bool ok = true;

  // (a) termination with a strictly decreasing measure.
  NormalizeOptions checked;
  checked.check_measure = true;
  std::size_t steps = 0;
  for (const auto& t : u) {
    try {
      steps += normalize(t, checked).certificate.steps.size();
    } catch (const std::exception& e) {
      ok = false;
      detail << "(a) " << print_type(t) << ": " << e.what() << "; ";
      break;
    }
  }
  detail << "(a) " << u.size() << " types, " << steps << " steps; ";

  // (b) random strategies.
  std::mt19937_64 sample_rng(2024);
  std::uniform_int_distribution<std::size_t> pick(0, u.size() - 1);
  std::vector<Type> sample;
  for (int i = 0; i < 500; ++i) sample.push_back(u[pick(sample_rng)]);
  std::size_t disagreements = 0;
  for (int k = 0; k < 10; ++k) {
    std::mt19937_64 rng(100 + k);
    NormalizeOptions opts;
    opts.choose = [&rng](const std::vector<RewriteStep>& s) {
      return std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng);
    };
    for (const auto& t : sample) disagreements += normalize(t, opts).normal != nf(t);
  }
  ok = ok && disagreements == 0;
  detail << "(b) " << disagreements << " disagreements; ";

  // (c) critical pairs with sigma = p & q <= tau = p.
  const char* pairs[] = {
      "(p | q | r) -> s",
      "p -> q & r & s",
      "((p & q) & p) | r",
      "r -> ((p & q) & p) | s",
      "((p & q) | p) & r -> s",
      "r -> ((p & q) | p) & s",
      "r | ((p & q) & p) -> s",
      "(omega -> p) & (q -> p)",
      "(q -> omega) | omega",
  };
  std::size_t converged = 0;
  for (const char* c : pairs) {
    std::size_t states = 0;
    auto forms = all_normal_forms(T(c), states);
    if (forms.size() == 1 && *forms.begin() == nf(T(c)).key()) ++converged;
  }
  ok = ok && converged == std::size(pairs);
  detail << "(c) " << converged << "/" << std::size(pairs) << " critical pairs converge; ";

  // (d) idempotence.
  std::size_t not_idem = 0;
  for (const auto& t : u) {
    CanonicalType n = nf(t);
    Normalized again = normalize(to_type(n));
    not_idem += again.normal != n || !again.certificate.steps.empty();
  }
  ok = ok && not_idem == 0;
  detail << "(d) " << not_idem << " non-idempotent";
  return {ok, detail.str()};
}

Outcome leq_oracle() {
  auto u = testing::enumerate_types({"p", "q"}, true, 5);
  auto closed = subterm_closure(u);
  if (closed.size() != u.size()) return {false, "universe not subterm-closed"};
  LeqClosure oracle(closed);
  std::size_t n = closed.size();
  constexpr std::size_t kMax = 1024;
  if (n > kMax) return {false, "universe too large"};
  std::vector<std::bitset<kMax>> rel(n);
  std::size_t mismatches = 0, holds = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      bool a = leq(closed[i], closed[j]);
      rel[i][j] = a;
      holds += a;
      mismatches += a != oracle.holds(i, j);
    }
  }
  std::size_t transitivity = 0, reflexivity = 0;
  for (std::size_t i = 0; i < n; ++i) {
    reflexivity += !rel[i][i];
    for (std::size_t j = 0; j < n; ++j) {
      if (rel[i][j] && (rel[j] & ~rel[i]).any()) ++transitivity;
    }
  }
  bool ok = mismatches == 0 && transitivity == 0 && reflexivity == 0;
  return {ok, std::to_string(n) + " types, " + std::to_string(n * n) + " pairs, " + std::to_string(holds) +
                  " related, " + std::to_string(mismatches) + " oracle mismatches, " + std::to_string(transitivity) +
                  " transitivity failures"};
}

Outcome equivalence_preserves_nf() {
  std::mt19937_64 rng(6);
  std::size_t failures = 0, generator_errors = 0, steps = 0;
  for (int i = 0; i < 1000; ++i) {
    Type t = testing::random_type(rng, {"p", "q", "r"}, 3);
    Type s = t;
    int k = std::uniform_int_distribution<int>(1, 6)(rng);
    for (int j = 0; j < k; ++j) s = testing::random_equiv_step(rng, s);
    steps += k;
    generator_errors += !sem_equiv(t, s);
    failures += !nf_equal(t, s);
  }
  return {failures == 0 && generator_errors == 0,
          "1000 pairs, " + std::to_string(steps) + " rewrites, " + std::to_string(failures) + " failures"};
}

Outcome normal_form_witnesses() {
  const auto& u = testing::universe();
  std::size_t unverified = 0, none = 0, rejected = 0;
  for (const auto& t : u) {
    IsoWitness w = normalization_witness(t);
    unverified += !verify_inverse_pair(w.fwd, w.bwd);
    auto ds = emit_witness_derivations(w);
    if (!ds) {
      ++none;
      continue;
    }
    rejected += !check_derivation(ds->fwd).ok || !check_derivation(ds->bwd).ok;
  }
  std::ostringstream d;
  d << u.size() << " types, " << unverified << " unverified, " << rejected << " rejected derivations, emission None rate "
    << none << "/" << u.size();
  return {unverified == 0 && none == 0 && rejected == 0, d.str()};
}

Outcome fhp_algebra() {
  std::mt19937_64 rng(11);
  std::size_t failures = 0;
  for (int i = 0; i < 500; ++i) {
    PermTree p = testing::random_perm_tree(rng, 3, 4);
    PermTree q = fhp_invert(p);
    bool ok = verify_inverse_pair(to_term(p), to_term(q));
    ok = ok && recognize_fhp(to_term(p)) == p;
    ok = ok && fhp_invert(q) == p;
    failures += !ok;
  }
  return {failures == 0, "500 trees, " + std::to_string(failures) + " failures"};
}

Outcome search() {
  std::mt19937_64 rng(50);
  std::ostringstream corpus;
  corpus << "# generated corpus\n";
  for (int i = 0; i < 49; ++i) {
    if (i == 20) corpus << "conjoined : sigma & tau -> rho\n";
    Type t = testing::random_type(rng, {"sigma", "tau", "rho", "a"}, 3);
    corpus << "fn" << i << " : " << print_type(t) << "\n";
  }
  Index ix = build_index_from_string(corpus.str());
  if (ix.entries().size() != 50) return {false, "corpus has " + std::to_string(ix.entries().size()) + " entries"};
  auto hits = query(ix, T("tau & sigma -> rho"), false);
  bool found = false;
  for (const auto& h : hits) {
    if (h.name == "conjoined" && verify_inverse_pair(h.witness.fwd, h.witness.bwd)) found = true;
  }
  auto forms = distinct_normal_forms(testing::universe());
  std::size_t misses = 0, similar_pairs = 0;
  for (const auto& a : forms) {
    for (const auto& b : forms) {
      if (!similar(a, b, false)) continue;
      ++similar_pairs;
      misses += coarse_key(a) != coarse_key(b);
    }
  }
  std::ostringstream d;
  d << hits.size() << " hit(s), motivating entry " << (found ? "found" : "missing") << "; " << forms.size()
    << " normal forms, " << similar_pairs << " similar pairs, " << misses << " key misses";
  return {found && misses == 0, d.str()};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    Outcome (*run)();
  };
  const Criterion criteria[] = {
      {1, "swap equation", swap_equation},
      {2, "normalization examples", normalization_examples},
      {3, "five-argument example", grand_example},
      {4, "strong versus general", strong_split},
      {5, "stock isomorphisms", stock_isos},
      {6, "typing examples", typing_examples},
      {7, "rewrite system on the universe", rewrite_properties},
      {8, "preorder against the closure oracle", leq_oracle},
      {9, "equivalence preserves normal forms", equivalence_preserves_nf},
      {10, "normal form witnesses", normal_form_witnesses},
      {11, "permutator algebra", fhp_algebra},
      {12, "search", search},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << "criterion " << c.id << " (" << c.name << "): " << (o.pass ? "PASS" : "FAIL") << "  " << o.detail
              << "  [" << std::fixed;
    std::cout.precision(2);
    std::cout << secs << "s]" << std::endl;
    failed += !o.pass;
  }
  std::cout << (12 - failed) << "/12 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
