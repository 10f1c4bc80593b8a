#include "isotype/normalizer.h"

#include <algorithm>

#include "isotype/preorder.h"

namespace isotype {

const char* rule_name(RewriteRule r) {
  switch (r) {
    case RewriteRule::PhiRule: return "PhiRule";
    case RewriteRule::OmegaRule: return "OmegaRule";
    case RewriteRule::AndArrowRule: return "AndArrowRule";
    case RewriteRule::ArrowAndRule: return "ArrowAndRule";
    case RewriteRule::OrArrowRule: return "OrArrowRule";
    case RewriteRule::ArrowOrRule: return "ArrowOrRule";
    case RewriteRule::LeqAndRule: return "LeqAndRule";
    case RewriteRule::LeqOrRule: return "LeqOrRule";
    case RewriteRule::TopDistRule: return "TopDistRule";
  }
  return "?";
}

namespace {

// Where a node sits relative to the nearest enclosing arrow.
enum class Zone { Top, LeftAnd, RightOr, None };

Zone step_zone(Zone z, Step s) {
  switch (s) {
    case Step::ArrowLeft: return Zone::LeftAnd;
    case Step::ArrowRight: return Zone::RightOr;
    case Step::AndLeft:
    case Step::AndRight:
      return (z == Zone::Top || z == Zone::LeftAnd) ? z : Zone::None;
    case Step::OrLeft:
    case Step::OrRight:
      return (z == Zone::Top || z == Zone::RightOr) ? z : Zone::None;
  }
  return Zone::None;
}

Step left_step(const Type& t) {
  return t.is_arrow() ? Step::ArrowLeft : t.is_and() ? Step::AndLeft : Step::OrLeft;
}

Step right_step(const Type& t) {
  return t.is_arrow() ? Step::ArrowRight : t.is_and() ? Step::AndRight : Step::OrRight;
}

struct Leaf {
  Type type;
  std::vector<Step> path;
};

void flatten(const Type& t, TypeKind k, std::vector<Step>& path, std::vector<Leaf>& out) {
  if (t.kind() != k) {
    out.push_back({t, path});
    return;
  }
  path.push_back(left_step(t));
  flatten(t.left(), k, path, out);
  path.back() = right_step(t);
  flatten(t.right(), k, path, out);
  path.pop_back();
}

Type remove_leaf(const Type& t, const std::vector<Step>& leaf_path) {
  TypeContext parent{std::vector<Step>(leaf_path.begin(), leaf_path.end() - 1)};
  const Type& p = subterm_at(t, parent);
  Step last = leaf_path.back();
  bool was_left = last == Step::AndLeft || last == Step::OrLeft;
  return plug(t, parent, was_left ? p.right() : p.left());
}

Term lift(const std::vector<Step>& path, PermTree f, PermTree b, bool want_fwd) {
  for (auto it = path.rbegin(); it != path.rend(); ++it) {
    if (*it == Step::ArrowLeft) {
      PermTree nf = arrow_lift(b, PermTree::identity());
      PermTree nb = arrow_lift(f, PermTree::identity());
      f = std::move(nf);
      b = std::move(nb);
    } else if (*it == Step::ArrowRight) {
      f = arrow_lift(PermTree::identity(), f);
      b = arrow_lift(PermTree::identity(), b);
    }
  }
  return to_term(want_fwd ? f : b);
}

class RedexFinder {
 public:
  explicit RedexFinder(bool first_only) : first_only_(first_only) {}

  std::vector<RewriteStep> run(const Type& t) {
    std::vector<Step> path;
    visit(t, path, Zone::Top, std::nullopt);
    return std::move(out_);
  }

 private:
  bool done() const { return first_only_ && !out_.empty(); }

  void emit(RewriteRule r, const std::vector<Step>& path, const Type& before, const Type& after, PermTree f,
            PermTree b) {
    Term fw = lift(path, f, b, true);
    Term bw = lift(path, f, b, false);
    out_.push_back(RewriteStep{r, TypeContext{path}, before, after, fw, bw});
  }

  void visit(const Type& t, std::vector<Step>& path, Zone zone, std::optional<TypeKind> parent) {
    if (t.is_arrow() || t.is_and() || t.is_or()) {
      path.push_back(left_step(t));
      visit(t.left(), path, step_zone(zone, path.back()), t.kind());
      path.pop_back();
      if (done()) return;
      path.push_back(right_step(t));
      visit(t.right(), path, step_zone(zone, path.back()), t.kind());
      path.pop_back();
      if (done()) return;
    }
    at_node(t, path, zone, parent);
  }

  void distribute(RewriteRule r, const Type& t, const std::vector<Step>& path) {
    // t is a binary node of one connective with a child of the other.
    bool make_and = t.is_or();
    auto inner = [&](const Type& a, const Type& b) { return make_and ? Type::disj(a, b) : Type::conj(a, b); };
    auto outer = [&](const Type& a, const Type& b) { return make_and ? Type::conj(a, b) : Type::disj(a, b); };
    TypeKind other = make_and ? TypeKind::And : TypeKind::Or;
    if (t.left().kind() == other) {
      const Type& l = t.left();
      emit(r, path, t, outer(inner(l.left(), t.right()), inner(l.right(), t.right())), {}, {});
      if (done()) return;
    }
    if (t.right().kind() == other) {
      const Type& rt = t.right();
      emit(r, path, t, outer(inner(t.left(), rt.left()), inner(t.left(), rt.right())), {}, {});
    }
  }

  void at_node(const Type& t, const std::vector<Step>& path, Zone zone, std::optional<TypeKind> parent) {
    if (t.is_arrow() && t.left().is_omega() && t.right().is_atom()) {
      emit(RewriteRule::PhiRule, path, t, t.right(), {}, {});
      if (done()) return;
    }
    if (!t.is_omega() && pre_.leq(Type::omega(), t)) {
      emit(RewriteRule::OmegaRule, path, t, Type::omega(), {}, *pre_.witness_tree(Type::omega(), t));
      if (done()) return;
    }
    if (t.is_arrow() && t.right().is_and()) {
      const Type& r = t.right();
      emit(RewriteRule::AndArrowRule, path, t,
           Type::conj(Type::arrow(t.left(), r.left()), Type::arrow(t.left(), r.right())), PermTree::eta(1),
           PermTree::eta(1));
      if (done()) return;
    }
    if (t.is_arrow() && t.left().is_or()) {
      const Type& l = t.left();
      emit(RewriteRule::OrArrowRule, path, t,
           Type::conj(Type::arrow(l.left(), t.right()), Type::arrow(l.right(), t.right())), PermTree::eta(1),
           PermTree::eta(1));
      if (done()) return;
    }
    if (zone == Zone::LeftAnd && t.is_and()) {
      distribute(RewriteRule::ArrowAndRule, t, path);
      if (done()) return;
    }
    if (zone == Zone::RightOr && t.is_or()) {
      distribute(RewriteRule::ArrowOrRule, t, path);
      if (done()) return;
    }
    if (zone == Zone::Top && t.is_or()) {
      distribute(RewriteRule::TopDistRule, t, path);
      if (done()) return;
    }
    if ((t.is_and() || t.is_or()) && parent != t.kind()) {
      std::vector<Leaf> leaves;
      std::vector<Step> rel;
      flatten(t, t.kind(), rel, leaves);
      for (std::size_t i = 0; i < leaves.size(); ++i) {
        for (std::size_t j = 0; j < leaves.size(); ++j) {
          if (i == j || !pre_.leq(leaves[i].type, leaves[j].type)) continue;
          PermTree w = *pre_.witness_tree(leaves[i].type, leaves[j].type);
          if (t.is_and()) {
            emit(RewriteRule::LeqAndRule, path, t, remove_leaf(t, leaves[j].path), {}, w);
          } else {
            emit(RewriteRule::LeqOrRule, path, t, remove_leaf(t, leaves[i].path), w, {});
          }
          if (done()) return;
        }
      }
    }
  }

  bool first_only_;
  Preorder pre_;
  std::vector<RewriteStep> out_;
};

enum class Sym { Atom, Omega, OrL, AndL, AndR, OrR, Arrow };

struct Labelled {
  Sym sym;
  std::string name;
  std::vector<Labelled> kids;

  bool operator==(const Labelled&) const = default;
};

Labelled label(const Type& t, bool left_side) {
  switch (t.kind()) {
    case TypeKind::Atom: return {Sym::Atom, t.name(), {}};
    case TypeKind::Omega: return {Sym::Omega, "", {}};
    case TypeKind::Arrow: return {Sym::Arrow, "", {label(t.left(), true), label(t.right(), false)}};
    case TypeKind::And:
      return {left_side ? Sym::AndL : Sym::AndR, "", {label(t.left(), left_side), label(t.right(), left_side)}};
    case TypeKind::Or:
      return {left_side ? Sym::OrL : Sym::OrR, "", {label(t.left(), left_side), label(t.right(), left_side)}};
  }
  throw std::logic_error("unreachable");
}

bool prec_greater(Sym a, Sym b) {
  auto connective = [](Sym s) { return s != Sym::Atom && s != Sym::Omega; };
  if (a == Sym::Arrow) return b != Sym::Arrow;
  if (!connective(a)) return false;
  if (!connective(b)) return true;
  return (a == Sym::OrR && b == Sym::AndR) || (a == Sym::AndL && b == Sym::OrL);
}

bool rpo_greater(const Labelled& s, const Labelled& t);

bool multiset_greater(std::vector<Labelled> m, std::vector<Labelled> n) {
  for (auto it = m.begin(); it != m.end();) {
    auto hit = std::find(n.begin(), n.end(), *it);
    if (hit != n.end()) {
      n.erase(hit);
      it = m.erase(it);
    } else {
      ++it;
    }
  }
  if (m.empty()) return false;
  return std::all_of(n.begin(), n.end(), [&](const Labelled& y) {
    return std::any_of(m.begin(), m.end(), [&](const Labelled& x) { return rpo_greater(x, y); });
  });
}

bool rpo_greater(const Labelled& s, const Labelled& t) {
  for (const auto& k : s.kids) {
    if (k == t || rpo_greater(k, t)) return true;
  }
  if (prec_greater(s.sym, t.sym)) {
    return std::all_of(t.kids.begin(), t.kids.end(), [&](const Labelled& k) { return rpo_greater(s, k); });
  }
  if (s.sym == t.sym && s.name == t.name) return multiset_greater(s.kids, t.kids);
  return false;
}

}  // namespace

std::vector<RewriteStep> find_redexes(const Type& t) { return RedexFinder(false).run(t); }

bool measure_greater(const Type& s, const Type& t) { return rpo_greater(label(s, false), label(t, false)); }

Normalized normalize(const Type& t, const NormalizeOptions& opts) {
  NormCertificate cert{t, t, {}, identity_term(), identity_term()};
  std::size_t budget = t.size() >= 20 ? (std::size_t{1} << 20) : (std::size_t{1} << t.size());
  Type cur = t;
  while (true) {
    std::vector<RewriteStep> redexes = RedexFinder(!opts.choose).run(cur);
    if (redexes.empty()) break;
    std::size_t pick = opts.choose ? opts.choose(redexes) : 0;
    RewriteStep step = std::move(redexes.at(pick));
    if (cert.steps.size() >= budget) throw NormalizationError("normalization step budget exceeded");
    Type next = plug(cur, step.position, step.after);
    if (opts.check_measure && !measure_greater(cur, next)) {
      throw NormalizationError(std::string("measure did not decrease at ") + rule_name(step.rule) + " @ " +
                               step.position.to_string() + " : " + print_type(cur) + " => " + print_type(next));
    }
    cert.witness_fwd = fhp_compose(step.fwd, cert.witness_fwd);
    cert.witness_bwd = fhp_compose(cert.witness_bwd, step.bwd);
    cert.steps.push_back(std::move(step));
    cur = next;
  }
  cert.result = cur;
  return Normalized{canonicalize(cur), std::move(cert)};
}

CanonicalType nf(const Type& t) { return normalize(t).normal; }

bool nf_equal(const Type& s, const Type& t) { return nf(s) == nf(t); }

std::pair<Term, Term> iso_to_nf(const Type& t) {
  Normalized n = normalize(t);
  return {n.certificate.witness_fwd, n.certificate.witness_bwd};
}

std::string format_certificate(const NormCertificate& c) {
  std::string out;
  for (const auto& s : c.steps) {
    out += rule_name(s.rule);
    out += " @ " + s.position.to_string() + " : " + print_type(s.before) + " ⟹ " + print_type(s.after) + "\n";
  }
  return out;
}

}  // namespace isotype
