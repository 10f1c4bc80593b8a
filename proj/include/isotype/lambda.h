#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace isotype {

enum class TermKind { Free, Bound, Abs, App };

// Untyped lambda term. Bound variables are de Bruijn indices, free variables
// are names; binder names are kept only as printing hints, so == is
// alpha-equivalence.
class Term {
 public:
  static Term free(std::string name);
  static Term bound(std::size_t index);
  static Term abs(std::string hint, Term body);
  static Term app(Term fn, Term arg);

  TermKind kind() const { return node_->kind; }
  bool is_free() const { return kind() == TermKind::Free; }
  bool is_bound() const { return kind() == TermKind::Bound; }
  bool is_abs() const { return kind() == TermKind::Abs; }
  bool is_app() const { return kind() == TermKind::App; }

  // Free: the variable; Abs: the binder hint.
  const std::string& name() const { return node_->name; }
  std::size_t index() const { return node_->index; }
  const Term& body() const { return node_->children[0]; }
  const Term& fn() const { return node_->children[0]; }
  const Term& arg() const { return node_->children[1]; }

  std::size_t size() const { return node_->size; }

  friend bool operator==(const Term& a, const Term& b);
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }

 private:
  struct Node {
    TermKind kind;
    std::string name;
    std::size_t index;
    std::vector<Term> children;
    std::size_t size;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  std::shared_ptr<const Node> node_;
};

// Named construction helpers.
Term var(std::string name);
// Binds every free occurrence of `name` in body.
Term lam(const std::string& name, const Term& body);
Term lams(const std::vector<std::string>& names, const Term& body);
Term apps(Term head, const std::vector<Term>& args);

Term identity_term();

// `\x y. body`, juxtaposition application; `λ` is accepted for `\`.
// Variables not bound in the text become free; their names are appended to
// `unbound` when given.
Term parse_term(std::string_view text, std::vector<std::string>* unbound = nullptr);
std::string print_term(const Term& t);

std::set<std::string> free_vars(const Term& t);
bool is_linear(const Term& t);
// A term whose bound indices all point inside it.
bool is_locally_closed(const Term& t);

// Instantiates the outermost binder of an abstraction with the free variable `name`.
Term open_abs(const Term& abstraction, const std::string& name);
// M[N/x] for a free variable x; N must be locally closed.
Term subst_free(const Term& m, const std::string& x, const Term& n);

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Throws BudgetExceeded after |t|^2 contractions.
Term beta_normalize(const Term& t);
Term eta_normalize(const Term& t);
bool betaeta_equal(const Term& s, const Term& t);

// Bijection on {0..n-1}; images()[j] is where j goes.
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<std::size_t> images);
  static Permutation identity(std::size_t n);

  std::size_t size() const { return images_.size(); }
  std::size_t operator()(std::size_t j) const { return images_[j]; }
  const std::vector<std::size_t>& images() const { return images_; }
  bool is_identity() const;

  Permutation inverse() const;
  // (a * b)(j) = a(b(j))
  friend Permutation operator*(const Permutation& a, const Permutation& b);
  bool operator==(const Permutation&) const = default;

  // 1-based image list, e.g. "[2 1]".
  std::string to_string() const;

 private:
  std::vector<std::size_t> images_;
};

// \x y1..yn. x (P1 y_perm(1)) .. (Pn y_perm(n)); arity 0 is \x.x.
struct PermTree {
  Permutation perm;
  std::vector<PermTree> children;

  std::size_t arity() const { return children.size(); }
  bool is_fhi() const;
  bool operator==(const PermTree&) const = default;

  static PermTree identity() { return {}; }
  // Arity-n node with identity permutation and identity children.
  static PermTree eta(std::size_t n);
};

// Beta-normal term of the tree.
Term to_term(const PermTree& p);
std::optional<PermTree> recognize_fhp(const Term& t);
bool is_fhi_term(const Term& t);

// Throws std::logic_error when the constructed inverse fails verification.
PermTree fhp_invert(const PermTree& p);
Term fhp_invert(const Term& p);

// beta_normalize(\x. p (q x)); throws std::invalid_argument unless both are FHPs.
Term fhp_compose(const Term& p, const Term& q);
bool verify_inverse_pair(const Term& p, const Term& q);

// Least common eta-expansion of two finite hereditary identities.
PermTree fhi_join(const PermTree& a, const PermTree& b);
Term fhi_join(const Term& a, const Term& b);

}  // namespace isotype
