#include "isotype/preorder.h"

#include <algorithm>
#include <bit>

namespace isotype {

bool Preorder::leq(const Type& s, const Type& t) {
  Key key{s.identity(), t.identity()};
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  bool r = decide(s, t);
  pinned_.push_back(s);
  pinned_.push_back(t);
  memo_[key] = r;
  return r;
}

bool Preorder::decide(const Type& s, const Type& t) {
  if (t.is_omega()) return true;
  if (t.is_and()) return leq(s, t.left()) && leq(s, t.right());
  if (s.is_or()) return leq(s.left(), t) && leq(s.right(), t);
  if (s.is_and() && (leq(s.left(), t) || leq(s.right(), t))) return true;
  if (t.is_or() && (leq(s, t.left()) || leq(s, t.right()))) return true;
  if (s.is_atom() && t.is_atom()) return s.name() == t.name();
  if ((s.is_atom() || s.is_omega()) && t.is_arrow()) return leq(s, t.right());
  if (s.is_arrow() && t.is_arrow()) {
    if (leq(t.left(), s.left()) && leq(s.right(), t.right())) return true;
    // s <= omega <= t
    return leq(Type::omega(), t.right());
  }
  return false;
}

PermTree arrow_lift(const PermTree& arg, const PermTree& tail) {
  std::vector<std::size_t> images{0};
  PermTree out;
  out.children.push_back(arg);
  for (std::size_t j = 0; j < tail.arity(); ++j) {
    images.push_back(tail.perm(j) + 1);
    out.children.push_back(tail.children[j]);
  }
  out.perm = Permutation(std::move(images));
  return out;
}

std::optional<PermTree> Preorder::witness_tree(const Type& s, const Type& t) {
  if (!leq(s, t)) return std::nullopt;
  if (t.is_omega()) return PermTree::identity();
  if (t.is_and()) return fhi_join(*witness_tree(s, t.left()), *witness_tree(s, t.right()));
  if (s.is_or()) return fhi_join(*witness_tree(s.left(), t), *witness_tree(s.right(), t));
  if (s.is_and()) {
    if (leq(s.left(), t)) return witness_tree(s.left(), t);
    if (leq(s.right(), t)) return witness_tree(s.right(), t);
  }
  if (t.is_or()) {
    if (leq(s, t.left())) return witness_tree(s, t.left());
    if (leq(s, t.right())) return witness_tree(s, t.right());
  }
  if (s.is_atom() && t.is_atom()) return PermTree::identity();
  if (t.is_arrow() && !s.is_arrow()) return arrow_lift(PermTree::identity(), *witness_tree(s, t.right()));
  if (!leq(t.left(), s.left()) || !leq(s.right(), t.right())) {
    return arrow_lift(PermTree::identity(), *witness_tree(Type::omega(), t.right()));
  }
  return arrow_lift(*witness_tree(t.left(), s.left()), *witness_tree(s.right(), t.right()));
}

bool leq(const Type& s, const Type& t) { return Preorder().leq(s, t); }

std::optional<Term> leq_witness(const Type& s, const Type& t) {
  auto tree = Preorder().witness_tree(s, t);
  if (!tree) return std::nullopt;
  return to_term(*tree);
}

namespace {

void collect_subterms(const Type& t, std::map<std::string, Type>& out) {
  out.emplace(print_type(t), t);
  if (t.is_arrow() || t.is_and() || t.is_or()) {
    collect_subterms(t.left(), out);
    collect_subterms(t.right(), out);
  }
}

}  // namespace

std::vector<Type> subterm_closure(const std::vector<Type>& types) {
  std::map<std::string, Type> all;
  for (const auto& t : types) collect_subterms(t, all);
  std::vector<Type> out;
  for (auto& [k, v] : all) out.push_back(v);
  std::stable_sort(out.begin(), out.end(), [](const Type& a, const Type& b) { return a.size() < b.size(); });
  return out;
}

LeqClosure::LeqClosure(std::vector<Type> universe) : universe_(std::move(universe)) {
  const std::size_t n = universe_.size();
  for (std::size_t i = 0; i < n; ++i) index_.emplace(print_type(universe_[i]), i);
  words_ = (n + 63) / 64;
  rel_.assign(n, std::vector<std::uint64_t>(words_, 0));
  auto set = [&](std::size_t i, std::size_t j) {
    std::uint64_t bit = std::uint64_t{1} << (j % 64);
    if (rel_[i][j / 64] & bit) return false;
    rel_[i][j / 64] |= bit;
    return true;
  };
  auto idx = [&](const Type& t) { return index_.at(print_type(t)); };

  auto omega = index_of(Type::omega());
  struct Node {
    std::size_t self, left, right;
  };
  std::vector<Node> ands, ors, arrows;
  for (std::size_t i = 0; i < n; ++i) {
    const Type& t = universe_[i];
    set(i, i);
    if (omega) set(i, *omega);
    if (t.is_and() || t.is_or() || t.is_arrow()) {
      auto l = index_of(t.left());
      auto r = index_of(t.right());
      if (!l || !r) throw std::invalid_argument("universe is not closed under subterms");
      Node node{i, *l, *r};
      if (t.is_and()) {
        ands.push_back(node);
        set(i, *l);
        set(i, *r);
      } else if (t.is_or()) {
        ors.push_back(node);
        set(*l, i);
        set(*r, i);
      } else {
        arrows.push_back(node);
        const Type& tail = t.right();
        if (tail.is_atom() || tail.is_omega()) set(idx(tail), i);
      }
    }
  }

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& c : ands) {
      for (std::size_t s = 0; s < n; ++s) {
        if (holds(s, c.left) && holds(s, c.right)) changed |= set(s, c.self);
      }
    }
    for (const auto& c : ors) {
      for (std::size_t w = 0; w < words_; ++w) {
        std::uint64_t add = rel_[c.left][w] & rel_[c.right][w] & ~rel_[c.self][w];
        if (add) {
          rel_[c.self][w] |= add;
          changed = true;
        }
      }
    }
    for (const auto& a : arrows) {
      for (const auto& b : arrows) {
        if (holds(b.left, a.left) && holds(a.right, b.right)) changed |= set(a.self, b.self);
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i == k || !holds(i, k)) continue;
        for (std::size_t w = 0; w < words_; ++w) {
          std::uint64_t add = rel_[k][w] & ~rel_[i][w];
          if (add) {
            rel_[i][w] |= add;
            changed = true;
          }
        }
      }
    }
  }
}

std::optional<std::size_t> LeqClosure::index_of(const Type& t) const {
  auto it = index_.find(print_type(t));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool LeqClosure::holds(const Type& s, const Type& t) const {
  auto i = index_of(s);
  auto j = index_of(t);
  if (!i || !j) throw std::invalid_argument("type outside the universe");
  return holds(*i, *j);
}

std::size_t LeqClosure::pair_count() const {
  std::size_t total = 0;
  for (const auto& row : rel_) {
    for (auto w : row) total += static_cast<std::size_t>(std::popcount(w));
  }
  return total;
}

}  // namespace isotype
