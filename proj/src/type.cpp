#include "isotype/type.h"

#include <algorithm>
#include <cctype>

namespace isotype {

Type Type::make(TypeKind k, std::string name, std::vector<Type> children) {
  std::size_t size = 1;
  for (const auto& c : children) size += c.size();
  return Type(std::make_shared<const Node>(Node{k, std::move(name), std::move(children), size}));
}

Type Type::atom(std::string name) {
  if (!is_identifier(name)) throw std::invalid_argument("invalid atom name '" + name + "'");
  return make(TypeKind::Atom, std::move(name), {});
}

Type Type::omega() {
  static const Type w = make(TypeKind::Omega, "", {});
  return w;
}

Type Type::arrow(Type left, Type right) {
  return make(TypeKind::Arrow, "", {std::move(left), std::move(right)});
}

Type Type::conj(Type left, Type right) {
  return make(TypeKind::And, "", {std::move(left), std::move(right)});
}

Type Type::disj(Type left, Type right) {
  return make(TypeKind::Or, "", {std::move(left), std::move(right)});
}

bool operator==(const Type& a, const Type& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.size() != b.size()) return false;
  switch (a.kind()) {
    case TypeKind::Atom:
      return a.name() == b.name();
    case TypeKind::Omega:
      return true;
    default:
      return a.left() == b.left() && a.right() == b.right();
  }
}

bool is_identifier(std::string_view s) {
  if (s.empty() || s == "omega") return false;
  auto head = static_cast<unsigned char>(s[0]);
  if (!std::isalpha(head) && head != '_') return false;
  return std::all_of(s.begin() + 1, s.end(), [](char c) {
    auto u = static_cast<unsigned char>(c);
    return std::isalnum(u) || u == '_';
  });
}

namespace {

class TypeParser {
 public:
  explicit TypeParser(std::string_view text) : text_(text) {}

  Type parse() {
    Type t = parse_type();
    skip_ws();
    if (pos_ != text_.size()) throw ParseError("unexpected '" + std::string(1, text_[pos_]) + "'", pos_);
    return t;
  }

 private:
  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(std::string_view tok) {
    skip_ws();
    if (text_.substr(pos_, tok.size()) == tok) {
      pos_ += tok.size();
      return true;
    }
    return false;
  }

  Type parse_type() {
    Type lhs = parse_conn();
    if (accept("->")) return Type::arrow(lhs, parse_type());
    return lhs;
  }

  Type parse_conn() {
    Type acc = parse_operand();
    skip_ws();
    if (pos_ >= text_.size()) return acc;
    char op = text_[pos_];
    if (op != '&' && op != '|') return acc;
    char other = op == '&' ? '|' : '&';
    while (true) {
      skip_ws();
      if (pos_ < text_.size() && text_[pos_] == other) {
        throw ParseError("ambiguous mix of '&' and '|' without parentheses", pos_);
      }
      if (pos_ >= text_.size() || text_[pos_] != op) break;
      ++pos_;
      Type rhs = parse_operand();
      acc = op == '&' ? Type::conj(acc, rhs) : Type::disj(acc, rhs);
    }
    return acc;
  }

  Type parse_operand() {
    skip_ws();
    if (pos_ >= text_.size()) throw ParseError("unexpected end of input", pos_);
    if (text_[pos_] == '(') {
      ++pos_;
      Type inner = parse_type();
      if (!accept(")")) throw ParseError("expected ')'", pos_);
      return inner;
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      ++pos_;
    }
    std::string_view word = text_.substr(start, pos_ - start);
    if (word.empty()) throw ParseError("expected a type", start);
    if (word == "omega") return Type::omega();
    if (!is_identifier(word)) throw ParseError("invalid identifier '" + std::string(word) + "'", start);
    return Type::atom(std::string(word));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

// Print levels: 0 anywhere, 1 left of an arrow, 2 operand of & or |.
void print_rec(const Type& t, int level, std::string& out);

void print_conn_items(const Type& t, TypeKind k, std::string& out) {
  if (t.kind() == k) {
    print_conn_items(t.left(), k, out);
    out += k == TypeKind::And ? " & " : " | ";
    print_rec(t.right(), 2, out);
  } else {
    print_rec(t, 2, out);
  }
}

void print_rec(const Type& t, int level, std::string& out) {
  switch (t.kind()) {
    case TypeKind::Atom:
      out += t.name();
      return;
    case TypeKind::Omega:
      out += "omega";
      return;
    case TypeKind::Arrow:
      if (level >= 1) out += '(';
      print_rec(t.left(), 1, out);
      out += " -> ";
      print_rec(t.right(), 0, out);
      if (level >= 1) out += ')';
      return;
    case TypeKind::And:
    case TypeKind::Or:
      if (level >= 2) out += '(';
      print_conn_items(t, t.kind(), out);
      if (level >= 2) out += ')';
      return;
  }
}

}  // namespace

Type parse_type(std::string_view text) { return TypeParser(text).parse(); }

std::string print_type(const Type& t) {
  std::string out;
  print_rec(t, 0, out);
  return out;
}

CanonicalType CanonicalType::atom(std::string name) {
  std::string key = name;
  return CanonicalType(std::make_shared<const Node>(Node{TypeKind::Atom, std::move(name), {}, std::move(key)}));
}

CanonicalType CanonicalType::omega() {
  static const CanonicalType w(std::make_shared<const Node>(Node{TypeKind::Omega, "", {}, "omega"}));
  return w;
}

CanonicalType CanonicalType::arrow(CanonicalType left, CanonicalType right) {
  std::string key = "(" + left.key() + " -> " + right.key() + ")";
  return CanonicalType(std::make_shared<const Node>(
      Node{TypeKind::Arrow, "", {std::move(left), std::move(right)}, std::move(key)}));
}

CanonicalType CanonicalType::connective(TypeKind k, std::vector<CanonicalType> members) {
  std::vector<CanonicalType> flat;
  for (auto& m : members) {
    if (m.kind() == k) {
      flat.insert(flat.end(), m.children().begin(), m.children().end());
    } else {
      flat.push_back(std::move(m));
    }
  }
  if (flat.empty()) throw std::invalid_argument("empty connective");
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  if (flat.size() == 1) return flat.front();
  std::string key = "(";
  const char* sep = k == TypeKind::And ? " & " : " | ";
  for (std::size_t i = 0; i < flat.size(); ++i) {
    if (i) key += sep;
    key += flat[i].key();
  }
  key += ")";
  return CanonicalType(std::make_shared<const Node>(Node{k, "", std::move(flat), std::move(key)}));
}

CanonicalType CanonicalType::conj(std::vector<CanonicalType> members) {
  return connective(TypeKind::And, std::move(members));
}

CanonicalType CanonicalType::disj(std::vector<CanonicalType> members) {
  return connective(TypeKind::Or, std::move(members));
}

CanonicalType canonicalize(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Atom:
      return CanonicalType::atom(t.name());
    case TypeKind::Omega:
      return CanonicalType::omega();
    case TypeKind::Arrow:
      return CanonicalType::arrow(canonicalize(t.left()), canonicalize(t.right()));
    case TypeKind::And:
      return CanonicalType::conj({canonicalize(t.left()), canonicalize(t.right())});
    case TypeKind::Or:
      return CanonicalType::disj({canonicalize(t.left()), canonicalize(t.right())});
  }
  throw std::logic_error("unreachable");
}

Type to_type(const CanonicalType& c) {
  switch (c.kind()) {
    case TypeKind::Atom:
      return Type::atom(c.name());
    case TypeKind::Omega:
      return Type::omega();
    case TypeKind::Arrow:
      return Type::arrow(to_type(c.left()), to_type(c.right()));
    case TypeKind::And:
    case TypeKind::Or: {
      Type acc = to_type(c.children().front());
      for (std::size_t i = 1; i < c.children().size(); ++i) {
        Type next = to_type(c.children()[i]);
        acc = c.is_and() ? Type::conj(acc, next) : Type::disj(acc, next);
      }
      return acc;
    }
  }
  throw std::logic_error("unreachable");
}

std::string print_type(const CanonicalType& c) { return print_type(to_type(c)); }

const char* step_name(Step s) {
  switch (s) {
    case Step::ArrowLeft: return "ArrowLeft";
    case Step::ArrowRight: return "ArrowRight";
    case Step::AndLeft: return "AndLeft";
    case Step::AndRight: return "AndRight";
    case Step::OrLeft: return "OrLeft";
    case Step::OrRight: return "OrRight";
  }
  return "?";
}

std::string TypeContext::to_string() const {
  if (path.empty()) return "/";
  std::string out;
  for (Step s : path) {
    out += '/';
    out += step_name(s);
  }
  return out;
}

namespace {

bool step_matches(const Type& t, Step s) {
  switch (s) {
    case Step::ArrowLeft:
    case Step::ArrowRight:
      return t.is_arrow();
    case Step::AndLeft:
    case Step::AndRight:
      return t.is_and();
    case Step::OrLeft:
    case Step::OrRight:
      return t.is_or();
  }
  return false;
}

bool step_is_left(Step s) { return s == Step::ArrowLeft || s == Step::AndLeft || s == Step::OrLeft; }

Type plug_rec(const Type& t, const std::vector<Step>& path, std::size_t i, const Type& replacement) {
  if (i == path.size()) return replacement;
  Step s = path[i];
  if (!step_matches(t, s)) throw std::invalid_argument("context path does not match type");
  Type l = step_is_left(s) ? plug_rec(t.left(), path, i + 1, replacement) : t.left();
  Type r = step_is_left(s) ? t.right() : plug_rec(t.right(), path, i + 1, replacement);
  switch (t.kind()) {
    case TypeKind::Arrow: return Type::arrow(l, r);
    case TypeKind::And: return Type::conj(l, r);
    default: return Type::disj(l, r);
  }
}

}  // namespace

const Type& subterm_at(const Type& t, const TypeContext& ctx) {
  const Type* cur = &t;
  for (Step s : ctx.path) {
    if (!step_matches(*cur, s)) throw std::invalid_argument("context path does not match type");
    cur = step_is_left(s) ? &cur->left() : &cur->right();
  }
  return *cur;
}

Type plug(const Type& t, const TypeContext& ctx, const Type& replacement) {
  return plug_rec(t, ctx.path, 0, replacement);
}

Type sem_canon(const Type& t) {
  switch (t.kind()) {
    case TypeKind::Atom:
    case TypeKind::Omega:
      return t;
    case TypeKind::Arrow: {
      Type l = sem_canon(t.left());
      Type r = sem_canon(t.right());
      if (l.is_omega() && (r.is_atom() || r.is_omega())) return r;
      if (l == t.left() && r == t.right()) return t;
      return Type::arrow(l, r);
    }
    case TypeKind::And: {
      Type l = sem_canon(t.left());
      Type r = sem_canon(t.right());
      if (r.is_omega()) return l;
      if (l.is_omega()) return r;
      if (l == t.left() && r == t.right()) return t;
      return Type::conj(l, r);
    }
    case TypeKind::Or: {
      Type l = sem_canon(t.left());
      Type r = sem_canon(t.right());
      if (l.is_omega() || r.is_omega()) return Type::omega();
      if (l == t.left() && r == t.right()) return t;
      return Type::disj(l, r);
    }
  }
  throw std::logic_error("unreachable");
}

bool sem_equiv(const Type& s, const Type& t) { return sem_canon(s) == sem_canon(t); }

}  // namespace isotype
