#include "isotype/lambda.h"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>

#include "isotype/type.h"

namespace isotype {

Term Term::free(std::string name) {
  return Term(std::make_shared<const Node>(Node{TermKind::Free, std::move(name), 0, {}, 1}));
}

Term Term::bound(std::size_t index) {
  return Term(std::make_shared<const Node>(Node{TermKind::Bound, "", index, {}, 1}));
}

Term Term::abs(std::string hint, Term body) {
  std::size_t size = body.size() + 1;
  return Term(std::make_shared<const Node>(Node{TermKind::Abs, std::move(hint), 0, {std::move(body)}, size}));
}

Term Term::app(Term fn, Term arg) {
  std::size_t size = fn.size() + arg.size() + 1;
  return Term(std::make_shared<const Node>(Node{TermKind::App, "", 0, {std::move(fn), std::move(arg)}, size}));
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TermKind::Free:
      return a.name() == b.name();
    case TermKind::Bound:
      return a.index() == b.index();
    case TermKind::Abs:
      return a.body() == b.body();
    case TermKind::App:
      return a.fn() == b.fn() && a.arg() == b.arg();
  }
  return false;
}

namespace {

Term shift(const Term& t, long d, std::size_t cutoff) {
  switch (t.kind()) {
    case TermKind::Free:
      return t;
    case TermKind::Bound:
      if (t.index() < cutoff) return t;
      return Term::bound(static_cast<std::size_t>(static_cast<long>(t.index()) + d));
    case TermKind::Abs:
      return Term::abs(t.name(), shift(t.body(), d, cutoff + 1));
    case TermKind::App:
      return Term::app(shift(t.fn(), d, cutoff), shift(t.arg(), d, cutoff));
  }
  return t;
}

// Replaces index j by s (s is relative to the binder depth at which j lives).
Term subst_index(const Term& t, std::size_t j, const Term& s) {
  switch (t.kind()) {
    case TermKind::Free:
      return t;
    case TermKind::Bound:
      return t.index() == j ? s : t;
    case TermKind::Abs:
      return Term::abs(t.name(), subst_index(t.body(), j + 1, shift(s, 1, 0)));
    case TermKind::App:
      return Term::app(subst_index(t.fn(), j, s), subst_index(t.arg(), j, s));
  }
  return t;
}

// Body of an abstraction instantiated with s.
Term instantiate(const Term& body, const Term& s) {
  return shift(subst_index(body, 0, shift(s, 1, 0)), -1, 0);
}

Term close_over(const Term& t, const std::string& name, std::size_t depth) {
  switch (t.kind()) {
    case TermKind::Free:
      return t.name() == name ? Term::bound(depth) : t;
    case TermKind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case TermKind::Abs:
      return Term::abs(t.name(), close_over(t.body(), name, depth + 1));
    case TermKind::App:
      return Term::app(close_over(t.fn(), name, depth), close_over(t.arg(), name, depth));
  }
  return t;
}

bool mentions_index(const Term& t, std::size_t j) {
  switch (t.kind()) {
    case TermKind::Free:
      return false;
    case TermKind::Bound:
      return t.index() == j;
    case TermKind::Abs:
      return mentions_index(t.body(), j + 1);
    case TermKind::App:
      return mentions_index(t.fn(), j) || mentions_index(t.arg(), j);
  }
  return false;
}

std::size_t count_index(const Term& t, std::size_t j) {
  switch (t.kind()) {
    case TermKind::Free:
      return 0;
    case TermKind::Bound:
      return t.index() == j ? 1 : 0;
    case TermKind::Abs:
      return count_index(t.body(), j + 1);
    case TermKind::App:
      return count_index(t.fn(), j) + count_index(t.arg(), j);
  }
  return 0;
}

}  // namespace

Term var(std::string name) { return Term::free(std::move(name)); }

Term lam(const std::string& name, const Term& body) { return Term::abs(name, close_over(body, name, 0)); }

Term lams(const std::vector<std::string>& names, const Term& body) {
  Term t = body;
  for (auto it = names.rbegin(); it != names.rend(); ++it) t = lam(*it, t);
  return t;
}

Term apps(Term head, const std::vector<Term>& args) {
  for (const auto& a : args) head = Term::app(std::move(head), a);
  return head;
}

Term identity_term() {
  static const Term id = lam("x", var("x"));
  return id;
}

namespace {

class TermParser {
 public:
  TermParser(std::string_view text, std::vector<std::string>* unbound) : text_(text), unbound_(unbound) {}

  Term parse() {
    Term t = parse_term();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";
  }

  void eat_lambda() {
    if (text_[pos_] == '\\') {
      while (pos_ < text_.size() && text_[pos_] == '\\') ++pos_;
    } else {
      pos_ += 2;
    }
  }

  bool at_ident() {
    skip_ws();
    if (pos_ >= text_.size()) return false;
    auto c = static_cast<unsigned char>(text_[pos_]);
    return std::isalpha(c) || c == '_';
  }

  std::string ident() {
    skip_ws();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' || text_[pos_] == '\'')) {
      ++pos_;
    }
    if (start == pos_) throw ParseError("expected identifier", start);
    return std::string(text_.substr(start, pos_ - start));
  }

  Term parse_abs() {
    eat_lambda();
    std::vector<std::string> names;
    while (at_ident()) names.push_back(ident());
    if (names.empty()) throw ParseError("expected binder", pos_);
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != '.') throw ParseError("expected '.'", pos_);
    ++pos_;
    for (const auto& n : names) scope_.push_back(n);
    Term body = parse_term();
    scope_.resize(scope_.size() - names.size());
    for (auto it = names.rbegin(); it != names.rend(); ++it) body = Term::abs(*it, body);
    return body;
  }

  Term parse_term() {
    if (at_lambda()) return parse_abs();
    std::optional<Term> acc;
    while (true) {
      skip_ws();
      if (pos_ >= text_.size()) break;
      std::optional<Term> next;
      if (at_lambda()) {
        next = parse_abs();
      } else if (text_[pos_] == '(') {
        ++pos_;
        next = parse_term();
        skip_ws();
        if (pos_ >= text_.size() || text_[pos_] != ')') throw ParseError("expected ')'", pos_);
        ++pos_;
      } else if (at_ident()) {
        next = resolve(ident());
      } else {
        break;
      }
      acc = acc ? Term::app(*acc, *next) : *next;
    }
    if (!acc) throw ParseError("expected a term", pos_);
    return *acc;
  }

  Term resolve(const std::string& name) {
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i] == name) return Term::bound(scope_.size() - 1 - i);
    }
    if (unbound_ && std::find(unbound_->begin(), unbound_->end(), name) == unbound_->end()) {
      unbound_->push_back(name);
    }
    return Term::free(name);
  }

  std::string_view text_;
  std::vector<std::string>* unbound_;
  std::vector<std::string> scope_;
  std::size_t pos_ = 0;
};

void collect_free(const Term& t, std::set<std::string>& out) {
  switch (t.kind()) {
    case TermKind::Free:
      out.insert(t.name());
      return;
    case TermKind::Bound:
      return;
    case TermKind::Abs:
      collect_free(t.body(), out);
      return;
    case TermKind::App:
      collect_free(t.fn(), out);
      collect_free(t.arg(), out);
      return;
  }
}

class TermPrinter {
 public:
  explicit TermPrinter(const Term& t) { collect_free(t, taken_); }

  std::string print(const Term& t) {
    std::string out;
    rec(t, out);
    return out;
  }

 private:
  std::string fresh(const std::string& hint) {
    std::string base = hint.empty() ? "x" : hint;
    auto in_use = [&](const std::string& n) {
      return taken_.count(n) || std::find(scope_.begin(), scope_.end(), n) != scope_.end();
    };
    if (!in_use(base)) return base;
    std::string stem = base;
    while (stem.size() > 1 && std::isdigit(static_cast<unsigned char>(stem.back()))) stem.pop_back();
    for (std::size_t k = 1;; ++k) {
      std::string cand = stem + std::to_string(k);
      if (!in_use(cand)) return cand;
    }
  }

  void rec(const Term& t, std::string& out) {
    switch (t.kind()) {
      case TermKind::Free:
        out += t.name();
        return;
      case TermKind::Bound:
        if (t.index() >= scope_.size()) {
          out += "#" + std::to_string(t.index());
        } else {
          out += scope_[scope_.size() - 1 - t.index()];
        }
        return;
      case TermKind::Abs: {
        out += "\\";
        std::size_t pushed = 0;
        const Term* cur = &t;
        while (cur->is_abs()) {
          std::string n = fresh(cur->name());
          if (pushed) out += ' ';
          out += n;
          scope_.push_back(n);
          ++pushed;
          cur = &cur->body();
        }
        out += ". ";
        rec(*cur, out);
        scope_.resize(scope_.size() - pushed);
        return;
      }
      case TermKind::App: {
        std::vector<const Term*> spine;
        const Term* cur = &t;
        while (cur->is_app()) {
          spine.push_back(&cur->arg());
          cur = &cur->fn();
        }
        if (cur->is_abs()) {
          out += '(';
          rec(*cur, out);
          out += ')';
        } else {
          rec(*cur, out);
        }
        for (auto it = spine.rbegin(); it != spine.rend(); ++it) {
          out += ' ';
          bool wrap = (*it)->is_app() || (*it)->is_abs();
          if (wrap) out += '(';
          rec(**it, out);
          if (wrap) out += ')';
        }
        return;
      }
    }
  }

  std::set<std::string> taken_;
  std::vector<std::string> scope_;
};

}  // namespace

Term parse_term(std::string_view text, std::vector<std::string>* unbound) {
  return TermParser(text, unbound).parse();
}

std::string print_term(const Term& t) { return TermPrinter(t).print(t); }

std::set<std::string> free_vars(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

namespace {

bool linear_rec(const Term& t, std::map<std::string, int>& frees) {
  switch (t.kind()) {
    case TermKind::Free:
      return ++frees[t.name()] == 1;
    case TermKind::Bound:
      return true;
    case TermKind::Abs:
      return count_index(t.body(), 0) == 1 && linear_rec(t.body(), frees);
    case TermKind::App:
      return linear_rec(t.fn(), frees) && linear_rec(t.arg(), frees);
  }
  return false;
}

bool closed_rec(const Term& t, std::size_t depth) {
  switch (t.kind()) {
    case TermKind::Free:
      return true;
    case TermKind::Bound:
      return t.index() < depth;
    case TermKind::Abs:
      return closed_rec(t.body(), depth + 1);
    case TermKind::App:
      return closed_rec(t.fn(), depth) && closed_rec(t.arg(), depth);
  }
  return false;
}

}  // namespace

bool is_linear(const Term& t) {
  std::map<std::string, int> frees;
  return is_locally_closed(t) && linear_rec(t, frees);
}

bool is_locally_closed(const Term& t) { return closed_rec(t, 0); }

Term open_abs(const Term& abstraction, const std::string& name) {
  if (!abstraction.is_abs()) throw std::invalid_argument("open_abs: not an abstraction");
  return instantiate(abstraction.body(), Term::free(name));
}

namespace {

Term subst_free_rec(const Term& m, const std::string& x, const Term& n, std::size_t depth) {
  switch (m.kind()) {
    case TermKind::Free:
      return m.name() == x ? shift(n, static_cast<long>(depth), 0) : m;
    case TermKind::Bound:
      return m;
    case TermKind::Abs:
      return Term::abs(m.name(), subst_free_rec(m.body(), x, n, depth + 1));
    case TermKind::App:
      return Term::app(subst_free_rec(m.fn(), x, n, depth), subst_free_rec(m.arg(), x, n, depth));
  }
  return m;
}

struct BetaRun {
  std::size_t budget;
  std::size_t steps = 0;

  Term nf(const Term& t) {
    switch (t.kind()) {
      case TermKind::Free:
      case TermKind::Bound:
        return t;
      case TermKind::Abs:
        return Term::abs(t.name(), nf(t.body()));
      case TermKind::App: {
        Term f = nf(t.fn());
        if (f.is_abs()) {
          if (++steps > budget) throw BudgetExceeded("beta reduction step budget exceeded");
          return nf(instantiate(f.body(), t.arg()));
        }
        return Term::app(f, nf(t.arg()));
      }
    }
    return t;
  }
};

}  // namespace

Term subst_free(const Term& m, const std::string& x, const Term& n) { return subst_free_rec(m, x, n, 0); }

Term beta_normalize(const Term& t) {
  BetaRun run{t.size() * t.size()};
  return run.nf(t);
}

Term eta_normalize(const Term& t) {
  switch (t.kind()) {
    case TermKind::Free:
    case TermKind::Bound:
      return t;
    case TermKind::Abs: {
      Term b = eta_normalize(t.body());
      if (b.is_app() && b.arg().is_bound() && b.arg().index() == 0 && !mentions_index(b.fn(), 0)) {
        return shift(b.fn(), -1, 0);
      }
      return Term::abs(t.name(), b);
    }
    case TermKind::App:
      return Term::app(eta_normalize(t.fn()), eta_normalize(t.arg()));
  }
  return t;
}

bool betaeta_equal(const Term& s, const Term& t) {
  return eta_normalize(beta_normalize(s)) == eta_normalize(beta_normalize(t));
}

Permutation::Permutation(std::vector<std::size_t> images) : images_(std::move(images)) {
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t v : images_) {
    if (v >= images_.size() || seen[v]) throw std::invalid_argument("not a permutation");
    seen[v] = true;
  }
}

Permutation Permutation::identity(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return Permutation(std::move(v));
}

bool Permutation::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Permutation Permutation::inverse() const {
  std::vector<std::size_t> v(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) v[images_[i]] = i;
  return Permutation(std::move(v));
}

Permutation operator*(const Permutation& a, const Permutation& b) {
  if (a.size() != b.size()) throw std::invalid_argument("permutation size mismatch");
  std::vector<std::size_t> v(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) v[i] = a(b(i));
  return Permutation(std::move(v));
}

std::string Permutation::to_string() const {
  std::string out = "[";
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(images_[i] + 1);
  }
  return out + "]";
}

bool PermTree::is_fhi() const {
  if (!perm.is_identity()) return false;
  return std::all_of(children.begin(), children.end(), [](const PermTree& c) { return c.is_fhi(); });
}

PermTree PermTree::eta(std::size_t n) { return PermTree{Permutation::identity(n), std::vector<PermTree>(n)}; }

namespace {

std::string level_name(std::size_t level, std::size_t i, std::size_t arity) {
  static const char* letters[] = {"y", "z", "u", "v", "w"};
  std::string stem = level < 5 ? letters[level] : "t" + std::to_string(level) + "_";
  if (arity == 1 && level < 5) return stem;
  return stem + std::to_string(i + 1);
}

// The body of p applied to the head term h, with binders named for `level`.
Term apply_tree(const PermTree& p, const Term& h, std::size_t level) {
  if (p.arity() == 0) return h;
  std::vector<std::string> ys;
  for (std::size_t j = 0; j < p.arity(); ++j) ys.push_back(level_name(level, j, p.arity()));
  std::vector<Term> args;
  for (std::size_t j = 0; j < p.arity(); ++j) {
    args.push_back(apply_tree(p.children[j], var(ys[p.perm(j)]), level + 1));
  }
  return lams(ys, apps(h, args));
}

// Recognizes `body` under `depth` enclosing binders as P applied to the binder at `level`.
std::optional<PermTree> recognize_applied(const Term& body, std::size_t level, std::size_t depth) {
  std::size_t k = 0;
  const Term* cur = &body;
  while (cur->is_abs()) {
    ++k;
    cur = &cur->body();
  }
  std::vector<const Term*> args;
  while (cur->is_app()) {
    args.push_back(&cur->arg());
    cur = &cur->fn();
  }
  std::reverse(args.begin(), args.end());
  std::size_t inner = depth + k;
  if (!cur->is_bound() || cur->index() >= inner) return std::nullopt;
  if (inner - 1 - cur->index() != level) return std::nullopt;
  if (args.size() != k) return std::nullopt;
  PermTree out;
  std::vector<std::size_t> images(k);
  std::vector<bool> used(k, false);
  for (std::size_t j = 0; j < k; ++j) {
    const Term* a = args[j];
    std::size_t kk = 0;
    const Term* h = a;
    while (h->is_abs()) {
      ++kk;
      h = &h->body();
    }
    while (h->is_app()) h = &h->fn();
    if (!h->is_bound()) return std::nullopt;
    std::size_t d = inner + kk;
    if (h->index() >= d) return std::nullopt;
    std::size_t lvl = d - 1 - h->index();
    if (lvl < depth || lvl >= inner) return std::nullopt;
    std::size_t slot = lvl - depth;
    if (used[slot]) return std::nullopt;
    used[slot] = true;
    images[j] = slot;
    auto child = recognize_applied(*a, lvl, inner);
    if (!child) return std::nullopt;
    out.children.push_back(std::move(*child));
  }
  out.perm = Permutation(std::move(images));
  return out;
}

}  // namespace

Term to_term(const PermTree& p) { return lam("x", apply_tree(p, var("x"), 0)); }

std::optional<PermTree> recognize_fhp(const Term& t) {
  if (!is_linear(t) || !free_vars(t).empty()) return std::nullopt;
  std::optional<Term> n;
  try {
    n = beta_normalize(t);
  } catch (const BudgetExceeded&) {
    return std::nullopt;
  }
  if (!n->is_abs()) return std::nullopt;
  return recognize_applied(n->body(), 0, 1);
}

bool is_fhi_term(const Term& t) {
  auto p = recognize_fhp(t);
  return p && p->is_fhi();
}

namespace {

PermTree invert_rec(const PermTree& p) {
  PermTree q;
  q.perm = p.perm.inverse();
  for (std::size_t i = 0; i < p.arity(); ++i) q.children.push_back(invert_rec(p.children[q.perm(i)]));
  return q;
}

Term compose_raw(const Term& p, const Term& q) {
  return beta_normalize(lam("x", Term::app(p, Term::app(q, var("x")))));
}

}  // namespace

PermTree fhp_invert(const PermTree& p) {
  PermTree q = invert_rec(p);
  if (!verify_inverse_pair(to_term(p), to_term(q))) throw std::logic_error("constructed inverse does not verify");
  return q;
}

Term fhp_invert(const Term& p) {
  auto tree = recognize_fhp(p);
  if (!tree) throw std::invalid_argument("not a finite hereditary permutator");
  return to_term(fhp_invert(*tree));
}

Term fhp_compose(const Term& p, const Term& q) {
  if (!recognize_fhp(p) || !recognize_fhp(q)) throw std::invalid_argument("fhp_compose: argument is not an FHP");
  return compose_raw(p, q);
}

bool verify_inverse_pair(const Term& p, const Term& q) {
  if (!is_linear(p) || !is_linear(q) || !free_vars(p).empty() || !free_vars(q).empty()) return false;
  try {
    return betaeta_equal(compose_raw(p, q), identity_term()) && betaeta_equal(compose_raw(q, p), identity_term());
  } catch (const BudgetExceeded&) {
    return false;
  }
}

PermTree fhi_join(const PermTree& a, const PermTree& b) {
  if (!a.is_fhi() || !b.is_fhi()) throw std::invalid_argument("fhi_join: argument is not an FHI");
  std::size_t n = std::max(a.arity(), b.arity());
  PermTree out = PermTree::eta(n);
  for (std::size_t i = 0; i < n; ++i) {
    const PermTree& ca = i < a.arity() ? a.children[i] : PermTree{};
    const PermTree& cb = i < b.arity() ? b.children[i] : PermTree{};
    out.children[i] = fhi_join(ca, cb);
  }
  return out;
}

Term fhi_join(const Term& a, const Term& b) {
  auto ta = recognize_fhp(a);
  auto tb = recognize_fhp(b);
  if (!ta || !tb) throw std::invalid_argument("fhi_join: argument is not an FHI");
  return to_term(fhi_join(*ta, *tb));
}

}  // namespace isotype
