#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "isotype/lambda.h"
#include "isotype/type.h"

namespace isotype {

enum class NormalClass { AtomOrArrow, InterOfAA, UnionOfAA, NormalType };

const char* class_name(NormalClass c);

// Most specific class of a normal type; nullopt when the type is not normal.
std::optional<NormalClass> classify(const CanonicalType& t);
bool is_normal(const CanonicalType& t);

class NotNormal : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ArrowView {
  std::vector<CanonicalType> args;
  CanonicalType tail;
};

// Reads a as args[0] -> ... -> args[n-1] -> tail, padding with omega
// arguments only where the normal form would erase them.
std::optional<ArrowView> arrow_view(const CanonicalType& a, std::size_t n);
// Inverse of arrow_view: the normal arrow with erasable trailing omegas dropped.
CanonicalType arrow_build(const std::vector<CanonicalType>& args, const CanonicalType& tail);

struct SimilarityDerivation {
  enum class Rule { Refl, MergeAnd, MergeOr, ArrowPerm };

  Rule rule = Rule::Refl;
  std::vector<CanonicalType> lhs;
  std::vector<CanonicalType> rhs;
  // Merge: entries index and index+1 of the premise are merged.
  std::size_t index = 0;
  // ArrowPerm: rhs argument j is column perm(j).
  Permutation perm;
  // Merge: one premise. ArrowPerm: one per column, then the tail.
  std::vector<SimilarityDerivation> premises;

  std::size_t arity() const { return perm.size(); }
  bool uses_only_identity() const;
};

const char* rule_name(SimilarityDerivation::Rule r);

// Throws NotNormal when either input is not a normal type.
std::optional<SimilarityDerivation> similar(const CanonicalType& h, const CanonicalType& k, bool strong_only);
std::optional<SimilarityDerivation> similar_sequences(const std::vector<CanonicalType>& lhs,
                                                      const std::vector<CanonicalType>& rhs, bool strong_only);

// Replays the tree and checks every node against its rule.
bool check_similarity(const SimilarityDerivation& d);
std::string format_derivation(const SimilarityDerivation& d);

}  // namespace isotype
