#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isotype {

enum class TypeKind { Atom, Omega, Arrow, And, Or };

// Immutable binary type tree: atoms, omega, ->, & and |.
// Copies share structure; equality is structural (raw syntax, not AC).
class Type {
 public:
  static Type atom(std::string name);
  static Type omega();
  static Type arrow(Type left, Type right);
  static Type conj(Type left, Type right);
  static Type disj(Type left, Type right);

  TypeKind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == TypeKind::Atom; }
  bool is_omega() const { return kind() == TypeKind::Omega; }
  bool is_arrow() const { return kind() == TypeKind::Arrow; }
  bool is_and() const { return kind() == TypeKind::And; }
  bool is_or() const { return kind() == TypeKind::Or; }

  // Atom only.
  const std::string& name() const { return node_->name; }
  // Arrow/And/Or only.
  const Type& left() const { return node_->children[0]; }
  const Type& right() const { return node_->children[1]; }

  // Number of nodes.
  std::size_t size() const { return node_->size; }
  const void* identity() const { return node_.get(); }

  friend bool operator==(const Type& a, const Type& b);
  friend bool operator!=(const Type& a, const Type& b) { return !(a == b); }

 private:
  struct Node {
    TypeKind kind;
    std::string name;
    std::vector<Type> children;
    std::size_t size;
  };
  explicit Type(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Type make(TypeKind k, std::string name, std::vector<Type> children);

  std::shared_ptr<const Node> node_;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at offset " + std::to_string(pos)),
        position_(pos) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

bool is_identifier(std::string_view s);

// `->` is right-associative and binds loosest; `&` and `|` are n-ary,
// left-nested, and may not be mixed at one level without parentheses.
Type parse_type(std::string_view text);
std::string print_type(const Type& t);

// AC-canonical type: And/Or are n-ary, flattened, sorted by key and deduplicated.
class CanonicalType {
 public:
  TypeKind kind() const { return node_->kind; }
  bool is_atom() const { return kind() == TypeKind::Atom; }
  bool is_omega() const { return kind() == TypeKind::Omega; }
  bool is_arrow() const { return kind() == TypeKind::Arrow; }
  bool is_and() const { return kind() == TypeKind::And; }
  bool is_or() const { return kind() == TypeKind::Or; }

  const std::string& name() const { return node_->name; }
  const std::vector<CanonicalType>& children() const { return node_->children; }
  const CanonicalType& left() const { return node_->children.front(); }
  const CanonicalType& right() const { return node_->children.back(); }

  // Fully parenthesized print; the total order on children.
  const std::string& key() const { return node_->key; }

  friend bool operator==(const CanonicalType& a, const CanonicalType& b) {
    return a.node_ == b.node_ || a.key() == b.key();
  }
  friend bool operator!=(const CanonicalType& a, const CanonicalType& b) { return !(a == b); }
  friend bool operator<(const CanonicalType& a, const CanonicalType& b) { return a.key() < b.key(); }

  static CanonicalType atom(std::string name);
  static CanonicalType omega();
  static CanonicalType arrow(CanonicalType left, CanonicalType right);
  // Flattens, sorts and deduplicates; collapses to the sole member when one remains.
  static CanonicalType conj(std::vector<CanonicalType> members);
  static CanonicalType disj(std::vector<CanonicalType> members);

 private:
  struct Node {
    TypeKind kind;
    std::string name;
    std::vector<CanonicalType> children;
    std::string key;
  };
  explicit CanonicalType(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static CanonicalType connective(TypeKind k, std::vector<CanonicalType> members);

  std::shared_ptr<const Node> node_;
};

CanonicalType canonicalize(const Type& t);
// Left-nested binary rendering, matching what parse_type builds for `a & b & c`.
Type to_type(const CanonicalType& c);
std::string print_type(const CanonicalType& c);

enum class Step { ArrowLeft, ArrowRight, AndLeft, AndRight, OrLeft, OrRight };

const char* step_name(Step s);

// A hole inside a type, addressed from the root.
struct TypeContext {
  std::vector<Step> path;

  bool operator==(const TypeContext&) const = default;
  std::string to_string() const;
};

// Throws std::invalid_argument when the path does not exist in t.
const Type& subterm_at(const Type& t, const TypeContext& ctx);
Type plug(const Type& t, const TypeContext& ctx, const Type& replacement);

// Normal form under phi = omega->phi, omega = omega->omega and omega
// absorption in & and |, oriented to shrink the type.
Type sem_canon(const Type& t);
bool sem_equiv(const Type& s, const Type& t);

}  // namespace isotype
