#include "isotype/typing.h"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "isotype/preorder.h"
#include "isotype/synthesis.h"

namespace isotype {

namespace {

struct RuleEntry {
  TypingRule rule;
  const char* name;
};

constexpr RuleEntry kRules[] = {
    {TypingRule::Ax, "Ax"},
    {TypingRule::Equiv, "Equiv"},
    {TypingRule::ArrowI, "ArrowI"},
    {TypingRule::ArrowE, "ArrowE"},
    {TypingRule::AndI, "AndI"},
    {TypingRule::AndE_l, "AndE_l"},
    {TypingRule::AndE_r, "AndE_r"},
    {TypingRule::OrI_l, "OrI_l"},
    {TypingRule::OrI_r, "OrI_r"},
    {TypingRule::OrE, "OrE"},
    {TypingRule::Adm_L, "Adm_L"},
    {TypingRule::Adm_Omega, "Adm_Omega"},
    {TypingRule::Adm_C, "Adm_C"},
    {TypingRule::Adm_OrI, "Adm_OrI'"},
    {TypingRule::Adm_OrE, "Adm_OrE'"},
};

std::string env_to_string(const TypeEnv& env);

std::string show_type(const Type& t) {
  std::string s = print_type(t);
  if (s.find('|') != std::string::npos) return "(" + s + ")";
  return s;
}

std::string env_to_string(const TypeEnv& env) {
  std::string out = "{";
  bool first = true;
  for (const auto& [x, t] : env) {
    if (!first) out += ", ";
    first = false;
    out += x + " : " + show_type(t);
  }
  return out + "}";
}

std::string judgement(const TypingDerivation& d) {
  return env_to_string(d.env) + " |- " + print_term(d.term) + " : " + print_type(d.type);
}

// ---------------------------------------------------------------- checking

class Checker {
 public:
  std::optional<std::string> run(const TypingDerivation& d, const std::string& at) {
    if (auto err = node(d)) {
      return "node " + at + " (" + typing_rule_name(d.rule) + ", " + judgement(d) + "): " + *err;
    }
    for (std::size_t i = 0; i < d.premises.size(); ++i) {
      if (auto err = run(d.premises[i], at + "." + std::to_string(i))) return err;
    }
    return std::nullopt;
  }

 private:
  using Error = std::optional<std::string>;

  static Error arity(const TypingDerivation& d, std::size_t n) {
    if (d.premises.size() != n) {
      return "expects " + std::to_string(n) + " premises, has " + std::to_string(d.premises.size());
    }
    return std::nullopt;
  }

  static Error same_subject(const TypingDerivation& d, const TypingDerivation& p) {
    if (p.env != d.env) return std::string("premise environment differs from conclusion");
    if (p.term != d.term) return std::string("premise subject differs from conclusion");
    return std::nullopt;
  }

  // Splits `env` into env minus x and the type of x.
  static std::optional<std::pair<TypeEnv, Type>> take(const TypeEnv& env, const std::string& x) {
    auto it = env.find(x);
    if (it == env.end()) return std::nullopt;
    TypeEnv rest = env;
    rest.erase(x);
    return std::make_pair(rest, it->second);
  }

  static std::optional<TypeEnv> disjoint_union(const TypeEnv& a, const TypeEnv& b) {
    TypeEnv out = a;
    for (const auto& [x, t] : b) {
      if (!out.emplace(x, t).second) return std::nullopt;
    }
    return out;
  }

  static Error node(const TypingDerivation& d) {
    if (!is_locally_closed(d.term)) return std::string("subject is not a well-formed term");
    if (!is_linear(d.term)) return std::string("subject is not linear");
    std::set<std::string> dom;
    for (const auto& [x, t] : d.env) dom.insert(x);
    if (dom != free_vars(d.term)) return std::string("environment domain differs from free variables");

    switch (d.rule) {
      case TypingRule::Ax: {
        if (auto e = arity(d, 0)) return e;
        if (!d.term.is_free()) return std::string("subject is not a variable");
        auto it = d.env.find(d.term.name());
        if (it == d.env.end() || d.env.size() != 1) return std::string("environment is not a single binding of the subject");
        if (it->second != d.type) return std::string("assumed type differs from conclusion type");
        return std::nullopt;
      }
      case TypingRule::Equiv: {
        if (auto e = arity(d, 1)) return e;
        const auto& p = d.premises[0];
        if (auto e = same_subject(d, p)) return e;
        if (!sem_equiv(p.type, d.type)) return "premise type " + print_type(p.type) + " is not equivalent to conclusion type";
        return std::nullopt;
      }
      case TypingRule::ArrowI: {
        if (auto e = arity(d, 1)) return e;
        const auto& p = d.premises[0];
        if (!d.type.is_arrow()) return std::string("conclusion type is not an arrow");
        if (!d.term.is_abs()) return std::string("subject is not an abstraction");
        if (d.var.empty() || d.env.count(d.var)) return std::string("bound variable is missing or occurs in the environment");
        TypeEnv expected = d.env;
        expected.emplace(d.var, d.type.left());
        if (p.env != expected) return std::string("premise environment is not the conclusion extended with the bound variable");
        if (p.term != open_abs(d.term, d.var)) return std::string("premise subject is not the abstraction body");
        if (p.type != d.type.right()) return std::string("premise type is not the arrow codomain");
        return std::nullopt;
      }
      case TypingRule::ArrowE: {
        if (auto e = arity(d, 2)) return e;
        const auto& f = d.premises[0];
        const auto& a = d.premises[1];
        if (!d.term.is_app()) return std::string("subject is not an application");
        if (f.term != d.term.fn()) return std::string("first premise subject is not the operator");
        if (a.term != d.term.arg()) return std::string("second premise subject is not the operand");
        if (!f.type.is_arrow()) return std::string("operator type is not an arrow");
        if (f.type.left() != a.type) return std::string("operand type differs from the arrow domain");
        if (f.type.right() != d.type) return std::string("conclusion type is not the arrow codomain");
        auto u = disjoint_union(f.env, a.env);
        if (!u) return std::string("premise environments are not disjoint");
        if (*u != d.env) return std::string("conclusion environment is not the union of premise environments");
        return std::nullopt;
      }
      case TypingRule::AndI: {
        if (auto e = arity(d, 2)) return e;
        if (auto e = same_subject(d, d.premises[0])) return e;
        if (auto e = same_subject(d, d.premises[1])) return e;
        if (!d.type.is_and() || d.type.left() != d.premises[0].type || d.type.right() != d.premises[1].type) {
          return std::string("conclusion type is not the intersection of premise types");
        }
        return std::nullopt;
      }
      case TypingRule::AndE_l:
      case TypingRule::AndE_r: {
        if (auto e = arity(d, 1)) return e;
        const auto& p = d.premises[0];
        if (auto e = same_subject(d, p)) return e;
        if (!p.type.is_and()) return std::string("premise type is not an intersection");
        const Type& part = d.rule == TypingRule::AndE_l ? p.type.left() : p.type.right();
        if (part != d.type) return std::string("conclusion type is not the selected component");
        return std::nullopt;
      }
      case TypingRule::OrI_l:
      case TypingRule::OrI_r: {
        if (auto e = arity(d, 1)) return e;
        const auto& p = d.premises[0];
        if (auto e = same_subject(d, p)) return e;
        if (!d.type.is_or()) return std::string("conclusion type is not a union");
        const Type& part = d.rule == TypingRule::OrI_l ? d.type.left() : d.type.right();
        if (part != p.type) return std::string("premise type is not the selected component");
        return std::nullopt;
      }
      case TypingRule::OrE:
      case TypingRule::Adm_OrE: {
        if (auto e = arity(d, 3)) return e;
        const auto& p1 = d.premises[0];
        const auto& p2 = d.premises[1];
        const auto& p3 = d.premises[2];
        if (d.var.empty()) return std::string("missing substituted variable");
        auto t1 = take(p1.env, d.var);
        auto t2 = take(p2.env, d.var);
        if (!t1 || !t2) return std::string("case premises do not bind the substituted variable");
        if (t1->first != t2->first) return std::string("case premises have different side environments");
        if (p1.term != p2.term) return std::string("case premises have different subjects");
        if (p1.type != d.type || p2.type != d.type) return std::string("case premise types differ from conclusion type");
        Type expected = Type::disj(t1->second, t2->second);
        if (d.rule == TypingRule::OrE) {
          const Type& a = t1->second;
          const Type& b = t2->second;
          if (!a.is_and() || !b.is_and()) return std::string("case assumptions are not intersections");
          if (a.right() != b.right()) return std::string("case assumptions have different shared components");
          expected = Type::conj(Type::disj(a.left(), b.left()), a.right());
        }
        if (p3.type != expected) return "scrutinee type is not " + print_type(expected);
        auto u = disjoint_union(t1->first, p3.env);
        if (!u) return std::string("premise environments are not disjoint");
        if (*u != d.env) return std::string("conclusion environment is not the union of premise environments");
        if (d.term != subst_free(p1.term, d.var, p3.term)) return std::string("subject is not the substitution instance");
        return std::nullopt;
      }
      case TypingRule::Adm_L: {
        if (auto e = arity(d, 2)) return e;
        const auto& sub = d.premises[0];
        const auto& body = d.premises[1];
        if (d.var.empty()) return std::string("missing rewritten variable");
        auto it = sub.env.find(d.var);
        if (sub.env.size() != 1 || it == sub.env.end() || sub.term != var(d.var)) {
          return std::string("first premise is not a judgement about the variable alone");
        }
        auto bt = take(body.env, d.var);
        if (!bt) return std::string("second premise does not bind the variable");
        if (bt->second != sub.type) return std::string("second premise assumption differs from first premise type");
        TypeEnv expected = bt->first;
        expected.emplace(d.var, it->second);
        if (expected != d.env) return std::string("conclusion environment is not the rewritten environment");
        if (body.term != d.term || body.type != d.type) return std::string("second premise subject or type differs from conclusion");
        return std::nullopt;
      }
      case TypingRule::Adm_Omega: {
        if (auto e = arity(d, 0)) return e;
        if (!d.type.is_omega()) return std::string("conclusion type is not omega");
        return std::nullopt;
      }
      case TypingRule::Adm_C: {
        if (auto e = arity(d, 2)) return e;
        const auto& p1 = d.premises[0];
        const auto& p2 = d.premises[1];
        if (d.var.empty()) return std::string("missing cut variable");
        auto t1 = take(p1.env, d.var);
        if (!t1) return std::string("first premise does not bind the cut variable");
        if (t1->second != p2.type) return std::string("cut formula differs between premises");
        if (p1.type != d.type) return std::string("first premise type differs from conclusion");
        auto u = disjoint_union(t1->first, p2.env);
        if (!u) return std::string("premise environments are not disjoint");
        if (*u != d.env) return std::string("conclusion environment is not the union of premise environments");
        if (d.term != subst_free(p1.term, d.var, p2.term)) return std::string("subject is not the substitution instance");
        return std::nullopt;
      }
      case TypingRule::Adm_OrI: {
        if (auto e = arity(d, 2)) return e;
        const auto& p1 = d.premises[0];
        const auto& p2 = d.premises[1];
        if (d.var.empty()) return std::string("missing split variable");
        auto t1 = take(p1.env, d.var);
        auto t2 = take(p2.env, d.var);
        if (!t1 || !t2) return std::string("premises do not bind the split variable");
        if (t1->first != t2->first) return std::string("premises have different side environments");
        TypeEnv expected = t1->first;
        expected.emplace(d.var, Type::disj(t1->second, t2->second));
        if (expected != d.env) return std::string("conclusion assumption is not the union of premise assumptions");
        if (p1.term != d.term || p2.term != d.term) return std::string("premise subjects differ from conclusion");
        if (p1.type != d.type || p2.type != d.type) return std::string("premise types differ from conclusion");
        return std::nullopt;
      }
    }
    return std::string("unknown rule");
  }
};

// ---------------------------------------------------------------- search

TypingDerivation make(TypingRule r, std::string v, TypeEnv env, Term m, Type t,
                      std::vector<TypingDerivation> premises = {}) {
  return TypingDerivation{r, std::move(v), std::move(env), std::move(m), std::move(t), std::move(premises)};
}

// Leaves of an intersection tree, with the left/right path to each.
void and_leaves(const Type& t, std::vector<bool>& path, std::vector<std::pair<std::vector<bool>, Type>>& out) {
  if (t.is_and()) {
    path.push_back(false);
    and_leaves(t.left(), path, out);
    path.back() = true;
    and_leaves(t.right(), path, out);
    path.pop_back();
  } else {
    out.emplace_back(path, t);
  }
}

std::vector<std::pair<std::vector<bool>, Type>> and_leaves(const Type& t) {
  std::vector<std::pair<std::vector<bool>, Type>> out;
  std::vector<bool> path;
  and_leaves(t, path, out);
  return out;
}

// x : t |- x : leaf by projections.
TypingDerivation project(const std::string& x, const Type& t, const std::vector<bool>& path) {
  TypeEnv env{{x, t}};
  TypingDerivation d = make(TypingRule::Ax, "", env, var(x), t);
  Type cur = t;
  for (bool right : path) {
    Type next = right ? cur.right() : cur.left();
    d = make(right ? TypingRule::AndE_r : TypingRule::AndE_l, "", env, var(x), next, {std::move(d)});
    cur = next;
  }
  return d;
}

// Rebuilds an intersection tree from leaves other than `skip`.
std::optional<Type> and_without(const std::vector<std::pair<std::vector<bool>, Type>>& leaves, std::size_t skip) {
  std::optional<Type> out;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    if (i == skip) continue;
    out = out ? Type::conj(*out, leaves[i].second) : leaves[i].second;
  }
  return out;
}

struct Spine {
  std::vector<std::string> hints;  // leading abstractions
  Term head;
  std::vector<Term> args;
};

Spine spine(const Term& m) {
  Spine s{{}, m, {}};
  Term cur = m;
  while (cur.is_abs()) {
    s.hints.push_back(cur.name());
    cur = cur.body();
  }
  while (cur.is_app()) {
    s.args.push_back(cur.arg());
    cur = cur.fn();
  }
  std::reverse(s.args.begin(), s.args.end());
  s.head = cur;
  return s;
}

Term rebuild(const Spine& s, const Term& head, std::size_t drop) {
  Term body = head;
  for (std::size_t i = drop; i < s.args.size(); ++i) body = Term::app(body, s.args[i]);
  for (std::size_t i = s.hints.size(); i-- > 0;) body = Term::abs(s.hints[i], body);
  return body;
}

class Deriver {
 public:
  explicit Deriver(std::size_t budget) : budget_(budget) {}

  std::optional<TypingDerivation> derive(const TypeEnv& env, const Term& m, const Type& t) {
    std::string key = "D" + env_to_string(env) + print_term(m) + "\x1f" + print_type(t);
    if (failed_.count(key) || !spend()) return std::nullopt;
    auto r = derive_uncached(env, m, t);
    if (!r) failed_.insert(key);
    return r;
  }

  // x : s |- x : t
  std::optional<TypingDerivation> var_sub(const std::string& x, const Type& s, const Type& t) {
    std::string key = "V" + x + "\x1f" + print_type(s) + "\x1f" + print_type(t);
    if (failed_.count(key) || !spend()) return std::nullopt;
    auto r = var_sub_uncached(x, s, t);
    if (!r) failed_.insert(key);
    return r;
  }

  bool exhausted() const { return steps_ > budget_; }

 private:
  bool spend() { return ++steps_ <= budget_; }

  std::string fresh(const std::string& hint, const TypeEnv& env, const Term& m) {
    std::set<std::string> avoid = free_vars(m);
    for (const auto& [x, _] : env) avoid.insert(x);
    std::string stem = hint.empty() ? "v" : hint;
    if (!avoid.count(stem) && !used_.count(stem)) {
      used_.insert(stem);
      return stem;
    }
    for (std::size_t k = 1;; ++k) {
      std::string c = stem + "_" + std::to_string(k);
      if (!avoid.count(c) && !used_.count(c)) {
        used_.insert(c);
        return c;
      }
    }
  }

  std::optional<TypingDerivation> var_sub_uncached(const std::string& x, const Type& s, const Type& t) {
    TypeEnv env{{x, s}};
    Term m = var(x);
    if (t.is_omega()) return make(TypingRule::Adm_Omega, "", env, m, t);
    if (s == t) return make(TypingRule::Ax, "", env, m, t);
    if (sem_equiv(s, t)) return make(TypingRule::Equiv, "", env, m, t, {make(TypingRule::Ax, "", env, m, s)});
    if (t.is_and()) {
      auto l = var_sub(x, s, t.left());
      if (!l) return std::nullopt;
      auto r = var_sub(x, s, t.right());
      if (!r) return std::nullopt;
      return make(TypingRule::AndI, "", env, m, t, {std::move(*l), std::move(*r)});
    }
    if (s.is_or()) {
      auto l = var_sub(x, s.left(), t);
      if (!l) return std::nullopt;
      auto r = var_sub(x, s.right(), t);
      if (!r) return std::nullopt;
      return make(TypingRule::Adm_OrI, x, env, m, t, {std::move(*l), std::move(*r)});
    }
    auto leaves = and_leaves(s);
    if (leaves.size() > 1) {
      for (const auto& [path, leaf] : leaves) {
        if (leaf == t) return project(x, s, path);
        if (sem_equiv(leaf, t)) return make(TypingRule::Equiv, "", env, m, t, {project(x, s, path)});
      }
      if (auto d = distribute(env, m, x, t)) return d;
      for (const auto& [path, leaf] : leaves) {
        if (auto rest = var_sub(x, leaf, t)) {
          return make(TypingRule::Adm_L, x, env, m, t, {project(x, s, path), std::move(*rest)});
        }
      }
    }
    if (t.is_or()) {
      if (auto l = var_sub(x, s, t.left())) return make(TypingRule::OrI_l, "", env, m, t, {std::move(*l)});
      if (auto r = var_sub(x, s, t.right())) return make(TypingRule::OrI_r, "", env, m, t, {std::move(*r)});
    }
    // An arrow target from a non-arrow assumption needs an eta-expanded subject.
    return std::nullopt;
  }

  // For x : A1 & .. & (B|C) & .. & An, cases on x' : B & Z and x' : C & Z.
  std::optional<TypingDerivation> distribute(const TypeEnv& env, const Term& m, const std::string& x, const Type& t) {
    const Type& s = env.at(x);
    auto leaves = and_leaves(s);
    if (leaves.size() < 2) return std::nullopt;
    for (std::size_t k = 0; k < leaves.size(); ++k) {
      const Type& u = leaves[k].second;
      if (!u.is_or()) continue;
      Type shared = *and_without(leaves, k);
      std::string x2 = fresh(x, env, m);
      Term m2 = subst_free(m, x, var(x2));
      TypeEnv side = env;
      side.erase(x);
      TypeEnv e1 = side, e2 = side;
      e1.emplace(x2, Type::conj(u.left(), shared));
      e2.emplace(x2, Type::conj(u.right(), shared));
      auto p1 = derive(e1, m2, t);
      if (!p1) return std::nullopt;
      auto p2 = derive(e2, m2, t);
      if (!p2) return std::nullopt;
      auto p3 = var_sub(x, s, Type::conj(u, shared));
      if (!p3) return std::nullopt;
      return make(TypingRule::OrE, x2, env, m, t, {std::move(*p1), std::move(*p2), std::move(*p3)});
    }
    return std::nullopt;
  }

  std::optional<TypingDerivation> derive_uncached(const TypeEnv& env, const Term& m, const Type& t) {
    if (t.is_omega()) return make(TypingRule::Adm_Omega, "", env, m, t);
    if (m.is_free()) {
      auto it = env.find(m.name());
      if (it == env.end() || env.size() != 1) return std::nullopt;
      return var_sub(m.name(), it->second, t);
    }

    // Unions among the assumptions are eliminated first.
    for (const auto& [x, s] : env) {
      if (s.is_or()) {
        TypeEnv e1 = env, e2 = env;
        e1.insert_or_assign(x, s.left());
        e2.insert_or_assign(x, s.right());
        auto l = derive(e1, m, t);
        if (!l) return std::nullopt;
        auto r = derive(e2, m, t);
        if (!r) return std::nullopt;
        return make(TypingRule::Adm_OrI, x, env, m, t, {std::move(*l), std::move(*r)});
      }
      bool nested = false;
      if (s.is_and()) {
        for (const auto& [_, leaf] : and_leaves(s)) nested = nested || leaf.is_or();
      }
      if (nested) return distribute(env, m, x, t);
    }

    if (t.is_and()) {
      auto l = derive(env, m, t.left());
      if (!l) return std::nullopt;
      auto r = derive(env, m, t.right());
      if (!r) return std::nullopt;
      return make(TypingRule::AndI, "", env, m, t, {std::move(*l), std::move(*r)});
    }

    Spine sp = spine(m);
    if (sp.head.is_free() && !sp.args.empty() && is_locally_closed(sp.args[0])) {
      if (auto d = cut_head(env, m, t, sp)) return d;
    }

    if (t.is_or()) {
      if (auto l = derive(env, m, t.left())) return make(TypingRule::OrI_l, "", env, m, t, {std::move(*l)});
      if (auto r = derive(env, m, t.right())) return make(TypingRule::OrI_r, "", env, m, t, {std::move(*r)});
      return std::nullopt;
    }
    if (m.is_abs()) {
      if (t.is_atom()) {
        Type wide = Type::arrow(Type::omega(), t);
        auto p = derive(env, m, wide);
        if (!p) return std::nullopt;
        return make(TypingRule::Equiv, "", env, m, t, {std::move(*p)});
      }
      if (t.is_arrow()) {
        std::string x = fresh(m.name(), env, m);
        TypeEnv e = env;
        e.emplace(x, t.left());
        auto p = derive(e, open_abs(m, x), t.right());
        if (!p) return std::nullopt;
        return make(TypingRule::ArrowI, x, env, m, t, {std::move(*p)});
      }
    }
    return std::nullopt;
  }

  // Types the head application h A1 against some leaf of h's type, then
  // cuts it into the rest of the subject.
  std::optional<TypingDerivation> cut_head(const TypeEnv& env, const Term& m, const Type& t, const Spine& sp) {
    const std::string& h = sp.head.name();
    auto hit = env.find(h);
    if (hit == env.end()) return std::nullopt;
    const Term& a1 = sp.args[0];
    std::set<std::string> fa = free_vars(a1);
    TypeEnv env_a, rest;
    for (const auto& [x, s] : env) {
      if (x == h) continue;
      (fa.count(x) ? env_a : rest).emplace(x, s);
    }
    if (env_a.size() != fa.size()) return std::nullopt;
    Term app = Term::app(sp.head, a1);
    TypeEnv env_app = env_a;
    env_app.emplace(h, hit->second);

    for (const auto& [path, leaf] : and_leaves(hit->second)) {
      Type dom = Type::omega(), cod = leaf;
      if (leaf.is_arrow()) {
        dom = leaf.left();
        cod = leaf.right();
      } else if (!leaf.is_atom() && !leaf.is_omega()) {
        continue;
      }
      Type fn_type = Type::arrow(dom, cod);
      TypingDerivation fd = project(h, hit->second, path);
      if (!leaf.is_arrow()) {
        TypeEnv fenv = fd.env;
        fd = make(TypingRule::Equiv, "", fenv, sp.head, fn_type, {std::move(fd)});
      }
      auto ad = derive(env_a, a1, dom);
      if (!ad) continue;
      TypingDerivation ed = make(TypingRule::ArrowE, "", env_app, app, cod, {std::move(fd), std::move(*ad)});

      if (sp.hints.empty() && sp.args.size() == 1) {
        if (cod == t) return ed;
      }
      TypeEnv scope = env;
      std::string z = fresh("z", scope, m);
      Term rest_term = rebuild(sp, var(z), 1);
      TypeEnv env_rest = rest;
      env_rest.emplace(z, cod);
      auto rd = derive(env_rest, rest_term, t);
      if (!rd) continue;
      return make(TypingRule::Adm_C, z, env, m, t, {std::move(*rd), std::move(ed)});
    }
    return std::nullopt;
  }

  std::size_t budget_;
  std::size_t steps_ = 0;
  std::unordered_set<std::string> failed_;
  std::set<std::string> used_;
};

constexpr std::size_t kSearchBudget = 200000;

// ---------------------------------------------------------------- text format

std::vector<std::string> split_fields(std::string_view line) {
  std::vector<std::string> out;
  int depth = 0;
  std::string cur;
  for (char c : line) {
    if (c == '(' || c == '{') ++depth;
    if (c == ')' || c == '}') --depth;
    if (c == '|' && depth == 0) {
      out.push_back(cur);
      cur.clear();
      continue;
    }
    cur += c;
  }
  out.push_back(cur);
  return out;
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

TypeEnv parse_env(const std::string& text, std::size_t pos) {
  std::string s = trim(text);
  if (s.size() < 2 || s.front() != '{' || s.back() != '}') throw ParseError("environment must be braced", pos);
  s = s.substr(1, s.size() - 2);
  TypeEnv env;
  int depth = 0;
  std::string cur;
  auto flush = [&] {
    std::string b = trim(cur);
    cur.clear();
    if (b.empty()) return;
    auto colon = b.find(':');
    if (colon == std::string::npos) throw ParseError("binding without ':'", pos);
    std::string x = trim(b.substr(0, colon));
    if (!is_identifier(x)) throw ParseError("bad variable name '" + x + "'", pos);
    if (!env.emplace(x, parse_type(b.substr(colon + 1))).second) {
      throw ParseError("variable '" + x + "' bound twice", pos);
    }
  };
  for (char c : s) {
    if (c == '(') ++depth;
    if (c == ')') --depth;
    if (c == ',' && depth == 0) {
      flush();
      continue;
    }
    cur += c;
  }
  flush();
  return env;
}

void format_rec(const TypingDerivation& d, std::size_t depth, std::ostringstream& out) {
  out << std::string(2 * depth, ' ') << typing_rule_name(d.rule);
  if (!d.var.empty()) out << '[' << d.var << ']';
  out << " | " << env_to_string(d.env) << " | " << print_term(d.term) << " | " << show_type(d.type) << '\n';
  for (const auto& p : d.premises) format_rec(p, depth + 1, out);
}

}  // namespace

const char* typing_rule_name(TypingRule r) {
  for (const auto& e : kRules) {
    if (e.rule == r) return e.name;
  }
  return "?";
}

std::optional<TypingRule> typing_rule_from_name(std::string_view name) {
  for (const auto& e : kRules) {
    if (name == e.name) return e.rule;
  }
  return std::nullopt;
}

std::size_t TypingDerivation::size() const {
  std::size_t n = 1;
  for (const auto& p : premises) n += p.size();
  return n;
}

CheckResult check_derivation(const TypingDerivation& d) {
  Checker c;
  if (auto err = c.run(d, "root")) return {false, *err};
  return {};
}

std::optional<TypingDerivation> derive(const TypeEnv& env, const Term& term, const Type& type) {
  if (!is_locally_closed(term) || !is_linear(term)) return std::nullopt;
  std::set<std::string> dom;
  for (const auto& [x, _] : env) dom.insert(x);
  if (dom != free_vars(term)) return std::nullopt;
  Deriver d(kSearchBudget);
  auto r = d.derive(env, term, type);
  if (r && !check_derivation(*r)) return std::nullopt;
  return r;
}

std::optional<TypingDerivation> emit_leq_derivation(const Type& s, const Type& t) {
  auto w = leq_witness(s, t);
  if (!w) return std::nullopt;
  return derive({}, *w, Type::arrow(s, t));
}

std::optional<WitnessDerivations> emit_witness_derivations(const IsoWitness& w, std::string* why) {
  auto f = derive({}, w.fwd, Type::arrow(w.source, w.target));
  if (!f) {
    if (why) *why = "no derivation found for the forward witness";
    return std::nullopt;
  }
  auto b = derive({}, w.bwd, Type::arrow(w.target, w.source));
  if (!b) {
    if (why) *why = "no derivation found for the backward witness";
    return std::nullopt;
  }
  return WitnessDerivations{std::move(*f), std::move(*b)};
}

std::string format_typing(const TypingDerivation& d) {
  std::ostringstream out;
  format_rec(d, 0, out);
  return out.str();
}

TypingDerivation parse_typing(std::string_view text) {
  struct Pending {
    std::size_t depth;
    TypingDerivation node;
  };
  std::vector<Pending> stack;
  std::optional<TypingDerivation> root;
  std::size_t offset = 0;

  auto attach = [&](TypingDerivation done) {
    if (stack.empty()) {
      root = std::move(done);
    } else {
      stack.back().node.premises.push_back(std::move(done));
    }
  };

  while (offset <= text.size()) {
    std::size_t nl = text.find('\n', offset);
    std::string_view line = text.substr(offset, nl == std::string_view::npos ? std::string_view::npos : nl - offset);
    std::size_t pos = offset;
    offset = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    if (trim(line).empty() || trim(line)[0] == '#') continue;

    std::size_t indent = line.find_first_not_of(' ');
    if (indent % 2 != 0) throw ParseError("indentation must be a multiple of two spaces", pos);
    std::size_t depth = indent / 2;
    auto fields = split_fields(line.substr(indent));
    if (fields.size() != 4) throw ParseError("expected 'rule | env | term | type'", pos);

    std::string head = trim(fields[0]);
    std::string v;
    if (auto lb = head.find('['); lb != std::string::npos) {
      if (head.back() != ']') throw ParseError("unterminated variable annotation", pos);
      v = trim(head.substr(lb + 1, head.size() - lb - 2));
      head = trim(head.substr(0, lb));
      if (!is_identifier(v)) throw ParseError("bad variable annotation '" + v + "'", pos);
    }
    auto rule = typing_rule_from_name(head);
    if (!rule) throw ParseError("unknown rule '" + head + "'", pos);
    TypeEnv env = parse_env(fields[1], pos);
    Term term = parse_term(trim(fields[2]));
    Type type = parse_type(trim(fields[3]));

    if (root) throw ParseError("more than one root node", pos);
    while (!stack.empty() && stack.back().depth >= depth) {
      Pending done = std::move(stack.back());
      stack.pop_back();
      attach(std::move(done.node));
      if (root) throw ParseError("more than one root node", pos);
    }
    std::size_t expected = stack.empty() ? 0 : stack.back().depth + 1;
    if (depth != expected) throw ParseError("indentation skips a level", pos);
    stack.push_back({depth, make(*rule, v, std::move(env), std::move(term), std::move(type))});
  }
  while (!stack.empty()) {
    Pending done = std::move(stack.back());
    stack.pop_back();
    attach(std::move(done.node));
  }
  if (!root) throw ParseError("empty derivation", 0);
  return std::move(*root);
}

}  // namespace isotype
