#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isotype/lambda.h"
#include "isotype/type.h"

namespace isotype {

// Syntax-directed decision of the normalisation pre-order.
// Results are cached per instance; an instance is not thread-safe, the free
// functions below build a fresh one per call.
class Preorder {
 public:
  bool leq(const Type& s, const Type& t);
  // Finite hereditary identity typed at s -> t, as a tree.
  std::optional<PermTree> witness_tree(const Type& s, const Type& t);

 private:
  using Key = std::pair<const void*, const void*>;
  bool decide(const Type& s, const Type& t);

  std::map<Key, bool> memo_;
  // Keeps memoized nodes alive so their addresses stay unique.
  std::vector<Type> pinned_;
};

bool leq(const Type& s, const Type& t);
std::optional<Term> leq_witness(const Type& s, const Type& t);

// \x y. tail (x (arg y)) as a tree.
PermTree arrow_lift(const PermTree& arg, const PermTree& tail);

// Least relation over a finite universe closed under the pre-order axioms and
// rules, with every premise and conclusion inside the universe.
class LeqClosure {
 public:
  explicit LeqClosure(std::vector<Type> universe);

  const std::vector<Type>& universe() const { return universe_; }
  std::optional<std::size_t> index_of(const Type& t) const;
  bool holds(std::size_t i, std::size_t j) const { return (rel_[i][j / 64] >> (j % 64)) & 1U; }
  bool holds(const Type& s, const Type& t) const;
  std::size_t pair_count() const;

 private:
  std::vector<Type> universe_;
  std::map<std::string, std::size_t> index_;
  std::size_t words_ = 0;
  std::vector<std::vector<std::uint64_t>> rel_;
};

// All subterms of the given types, deduplicated, smallest first.
std::vector<Type> subterm_closure(const std::vector<Type>& types);

}  // namespace isotype
