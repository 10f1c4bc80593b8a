#include "isotype/similarity.h"

#include <algorithm>
#include <functional>
#include <map>

namespace isotype {

const char* class_name(NormalClass c) {
  switch (c) {
    case NormalClass::AtomOrArrow: return "AtomOrArrow";
    case NormalClass::InterOfAA: return "InterOfAA";
    case NormalClass::UnionOfAA: return "UnionOfAA";
    case NormalClass::NormalType: return "NormalType";
  }
  return "?";
}

namespace {

bool is_alpha(const CanonicalType& t);

bool all_alpha(const CanonicalType& t) {
  return std::all_of(t.children().begin(), t.children().end(),
                     [](const CanonicalType& c) { return is_alpha(c) && !c.is_omega(); });
}

bool is_xi(const CanonicalType& t) { return is_alpha(t) || (t.is_and() && all_alpha(t)); }
bool is_mu(const CanonicalType& t) { return is_alpha(t) || (t.is_or() && all_alpha(t)); }

bool is_alpha(const CanonicalType& t) {
  if (t.is_atom() || t.is_omega()) return true;
  if (!t.is_arrow()) return false;
  if (t.right().is_omega()) return false;
  if (t.left().is_omega() && t.right().is_atom()) return false;
  return is_xi(t.left()) && is_mu(t.right());
}

bool is_alpha_entry(const CanonicalType& t) { return t.is_atom() || t.is_omega() || t.is_arrow(); }

}  // namespace

std::optional<NormalClass> classify(const CanonicalType& t) {
  if (is_alpha(t)) return NormalClass::AtomOrArrow;
  if (t.is_and() && all_alpha(t)) return NormalClass::InterOfAA;
  if (t.is_or() && all_alpha(t)) return NormalClass::UnionOfAA;
  if (t.is_and() && std::all_of(t.children().begin(), t.children().end(), [](const CanonicalType& c) {
        return !c.is_omega() && is_mu(c);
      })) {
    return NormalClass::NormalType;
  }
  return std::nullopt;
}

bool is_normal(const CanonicalType& t) { return classify(t).has_value(); }

std::optional<ArrowView> arrow_view(const CanonicalType& a, std::size_t n) {
  ArrowView v{{}, a};
  while (v.args.size() < n && v.tail.is_arrow()) {
    v.args.push_back(v.tail.left());
    CanonicalType next = v.tail.right();
    v.tail = next;
  }
  if (v.args.size() < n) {
    if (!v.tail.is_atom() && !v.tail.is_omega()) return std::nullopt;
    while (v.args.size() < n) v.args.push_back(CanonicalType::omega());
  }
  return v;
}

CanonicalType arrow_build(const std::vector<CanonicalType>& args, const CanonicalType& tail) {
  std::size_t keep = args.size();
  if (tail.is_atom() || tail.is_omega()) {
    while (keep > 0 && args[keep - 1].is_omega()) --keep;
  }
  CanonicalType out = tail;
  for (std::size_t i = keep; i-- > 0;) out = CanonicalType::arrow(args[i], out);
  return out;
}

bool SimilarityDerivation::uses_only_identity() const {
  if (!perm.is_identity()) return false;
  return std::all_of(premises.begin(), premises.end(),
                     [](const SimilarityDerivation& p) { return p.uses_only_identity(); });
}

const char* rule_name(SimilarityDerivation::Rule r) {
  switch (r) {
    case SimilarityDerivation::Rule::Refl: return "Refl";
    case SimilarityDerivation::Rule::MergeAnd: return "MergeAnd";
    case SimilarityDerivation::Rule::MergeOr: return "MergeOr";
    case SimilarityDerivation::Rule::ArrowPerm: return "ArrowPerm";
  }
  return "?";
}

namespace {

using Seq = std::vector<CanonicalType>;
using Rule = SimilarityDerivation::Rule;

std::string seq_key(const Seq& s) {
  std::string out;
  for (const auto& t : s) {
    out += t.key();
    out += ';';
  }
  return out;
}

CanonicalType rebuild(TypeKind k, std::vector<CanonicalType> members) {
  return k == TypeKind::And ? CanonicalType::conj(std::move(members)) : CanonicalType::disj(std::move(members));
}

std::size_t spine_length(const CanonicalType& t) {
  std::size_t n = 0;
  const CanonicalType* cur = &t;
  while (cur->is_arrow()) {
    ++n;
    cur = &cur->right();
  }
  return n;
}

class Search {
 public:
  explicit Search(bool strong) : strong_(strong) {}

  std::optional<SimilarityDerivation> run(const Seq& l, const Seq& r) {
    std::string key = seq_key(l) + "~" + seq_key(r);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    auto result = solve(l, r);
    memo_.emplace(std::move(key), result);
    return result;
  }

 private:
  std::optional<SimilarityDerivation> solve(const Seq& l, const Seq& r) {
    if (l.size() != r.size()) return std::nullopt;
    if (l == r) return SimilarityDerivation{Rule::Refl, l, r, 0, {}, {}};
    bool alphas = std::all_of(l.begin(), l.end(), is_alpha_entry) && std::all_of(r.begin(), r.end(), is_alpha_entry);
    if (alphas) {
      std::size_t lmax = 0;
      for (const auto& t : l) lmax = std::max(lmax, spine_length(t));
      for (const auto& t : r) lmax = std::max(lmax, spine_length(t));
      for (std::size_t n = 1; n <= lmax; ++n) {
        if (auto d = try_arrow(l, r, n)) return d;
      }
      return std::nullopt;
    }
    for (std::size_t i = 0; i < l.size(); ++i) {
      if (is_alpha_entry(l[i]) && is_alpha_entry(r[i])) continue;
      if (l[i].kind() != r[i].kind() || l[i].is_arrow()) return std::nullopt;
      const auto& lm = l[i].children();
      const auto& rm = r[i].children();
      if (lm.size() != rm.size()) return std::nullopt;
      TypeKind k = l[i].kind();
      Seq nl = l;
      nl[i] = lm[0];
      nl.insert(nl.begin() + static_cast<long>(i) + 1, rebuild(k, Seq(lm.begin() + 1, lm.end())));
      for (std::size_t j = 0; j < rm.size(); ++j) {
        Seq rest;
        for (std::size_t q = 0; q < rm.size(); ++q) {
          if (q != j) rest.push_back(rm[q]);
        }
        Seq nr = r;
        nr[i] = rm[j];
        nr.insert(nr.begin() + static_cast<long>(i) + 1, rebuild(k, std::move(rest)));
        if (auto d = run(nl, nr)) {
          Rule rule = k == TypeKind::And ? Rule::MergeAnd : Rule::MergeOr;
          return SimilarityDerivation{rule, l, r, i, {}, {std::move(*d)}};
        }
      }
      return std::nullopt;
    }
    return std::nullopt;
  }

  std::optional<SimilarityDerivation> try_arrow(const Seq& l, const Seq& r, std::size_t n) {
    const std::size_t m = l.size();
    std::vector<ArrowView> lv, rv;
    for (std::size_t j = 0; j < m; ++j) {
      auto a = arrow_view(l[j], n);
      auto b = arrow_view(r[j], n);
      if (!a || !b) return std::nullopt;
      lv.push_back(std::move(*a));
      rv.push_back(std::move(*b));
    }
    Seq mus, nus;
    for (std::size_t j = 0; j < m; ++j) {
      mus.push_back(lv[j].tail);
      nus.push_back(rv[j].tail);
    }
    auto tail = run(mus, nus);
    if (!tail) return std::nullopt;

    auto column = [&](const std::vector<ArrowView>& views, std::size_t i) {
      Seq c;
      for (const auto& v : views) c.push_back(v.args[i]);
      return c;
    };
    // compat[i][s]: column i on the left against argument slot s on the right.
    std::vector<std::vector<std::optional<SimilarityDerivation>>> compat(n);
    std::vector<std::vector<bool>> tried(n, std::vector<bool>(n, false));
    auto cell = [&](std::size_t i, std::size_t s) -> const std::optional<SimilarityDerivation>& {
      if (compat[i].empty()) compat[i].resize(n);
      if (!tried[i][s]) {
        tried[i][s] = true;
        compat[i][s] = run(column(lv, i), column(rv, s));
      }
      return compat[i][s];
    };

    std::vector<std::size_t> slot(n);
    bool identity_ok = true;
    for (std::size_t i = 0; i < n && identity_ok; ++i) identity_ok = cell(i, i).has_value();
    bool found = false;
    if (identity_ok) {
      for (std::size_t i = 0; i < n; ++i) slot[i] = i;
      found = true;
    } else if (!strong_) {
      std::vector<bool> used(n, false);
      std::function<bool(std::size_t)> assign = [&](std::size_t i) {
        if (i == n) return true;
        for (std::size_t s = 0; s < n; ++s) {
          if (used[s] || !cell(i, s)) continue;
          used[s] = true;
          slot[i] = s;
          if (assign(i + 1)) return true;
          used[s] = false;
        }
        return false;
      };
      found = assign(0);
    }
    if (!found) return std::nullopt;

    // slot is the inverse of the argument permutation.
    Permutation inv(slot);
    SimilarityDerivation d{Rule::ArrowPerm, l, r, 0, inv.inverse(), {}};
    for (std::size_t i = 0; i < n; ++i) d.premises.push_back(*cell(i, slot[i]));
    d.premises.push_back(std::move(*tail));
    return d;
  }

  bool strong_;
  std::map<std::string, std::optional<SimilarityDerivation>> memo_;
};

}  // namespace

std::optional<SimilarityDerivation> similar_sequences(const Seq& lhs, const Seq& rhs, bool strong_only) {
  for (const auto* side : {&lhs, &rhs}) {
    for (const auto& t : *side) {
      if (!is_normal(t)) throw NotNormal("not a normal type: " + print_type(t));
    }
  }
  return Search(strong_only).run(lhs, rhs);
}

std::optional<SimilarityDerivation> similar(const CanonicalType& h, const CanonicalType& k, bool strong_only) {
  return similar_sequences({h}, {k}, strong_only);
}

bool check_similarity(const SimilarityDerivation& d) {
  const std::size_t m = d.lhs.size();
  if (d.rhs.size() != m) return false;
  switch (d.rule) {
    case Rule::Refl:
      return d.premises.empty() && d.lhs == d.rhs;
    case Rule::MergeAnd:
    case Rule::MergeOr: {
      if (d.premises.size() != 1) return false;
      const auto& p = d.premises[0];
      if (p.lhs.size() != m + 1 || p.rhs.size() != m + 1 || d.index >= m) return false;
      TypeKind k = d.rule == Rule::MergeAnd ? TypeKind::And : TypeKind::Or;
      for (const auto* pair : {&p.lhs, &p.rhs}) {
        const Seq& side = *pair;
        const Seq& concl = pair == &p.lhs ? d.lhs : d.rhs;
        for (std::size_t j = 0, q = 0; j < m; ++j, ++q) {
          if (j == d.index) {
            if (rebuild(k, {side[q], side[q + 1]}) != concl[j]) return false;
            ++q;
          } else if (side[q] != concl[j]) {
            return false;
          }
        }
      }
      return check_similarity(p);
    }
    case Rule::ArrowPerm: {
      const std::size_t n = d.perm.size();
      if (n == 0 || d.premises.size() != n + 1) return false;
      const auto& tail = d.premises[n];
      if (tail.lhs.size() != m || tail.rhs.size() != m) return false;
      for (std::size_t j = 0; j < m; ++j) {
        Seq lhs_args, rhs_args;
        for (std::size_t i = 0; i < n; ++i) {
          if (d.premises[i].lhs.size() != m || d.premises[i].rhs.size() != m) return false;
          lhs_args.push_back(d.premises[i].lhs[j]);
          rhs_args.push_back(d.premises[d.perm(i)].rhs[j]);
        }
        if (arrow_build(lhs_args, tail.lhs[j]) != d.lhs[j] || arrow_build(rhs_args, tail.rhs[j]) != d.rhs[j]) return false;
      }
      return std::all_of(d.premises.begin(), d.premises.end(), check_similarity);
    }
  }
  return false;
}

namespace {

std::string format_seq(const Seq& s) {
  std::string out = "<";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += print_type(s[i]);
  }
  return out + ">";
}

void format_rec(const SimilarityDerivation& d, std::size_t depth, std::string& out) {
  out += std::string(depth * 2, ' ');
  out += rule_name(d.rule);
  if (d.rule == Rule::MergeAnd || d.rule == Rule::MergeOr) out += " i=" + std::to_string(d.index + 1);
  if (d.rule == Rule::ArrowPerm) out += " n=" + std::to_string(d.perm.size()) + " perm=" + d.perm.to_string();
  out += " : " + format_seq(d.lhs) + " ~ " + format_seq(d.rhs) + "\n";
  for (const auto& p : d.premises) format_rec(p, depth + 1, out);
}

}  // namespace

std::string format_derivation(const SimilarityDerivation& d) {
  std::string out;
  format_rec(d, 0, out);
  return out;
}

}  // namespace isotype
