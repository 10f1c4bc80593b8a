#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "isotype/lambda.h"
#include "isotype/normalizer.h"
#include "isotype/similarity.h"
#include "isotype/type.h"

namespace isotype {

enum class Provenance { Stock, LeqWitness, NormCertificate, Similarity, Composite };

enum class StockIso {
  IdemAnd,
  IdemOr,
  CommAnd,
  CommOr,
  AssocAnd,
  AssocOr,
  DistAndOr,
  DistOrAnd,
  DistArrowAnd,
  DistArrowOr,
  EraseAnd,
  EraseOr,
};

const char* stock_name(StockIso s);
std::optional<StockIso> stock_from_name(const std::string& name);
std::vector<StockIso> all_stock_isos();

// fwd : source -> target and bwd : target -> source, inverse to each other.
struct IsoWitness {
  Type source;
  Type target;
  Term fwd;
  Term bwd;
  bool strong = false;
  Provenance provenance = Provenance::Similarity;
  std::string label;
  std::optional<SimilarityDerivation> derivation;
  std::optional<NormCertificate> source_certificate;
  std::optional<NormCertificate> target_certificate;
};

class WitnessError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Instantiates a stock isomorphism. Arguments are the component types in
// left-to-right order (one for idem, three for assoc and the distributions,
// two otherwise). The erase cases remove whichever component is below the
// other; they throw std::invalid_argument when neither is.
IsoWitness stock_witness(StockIso which, const std::vector<Type>& args);

// The coercion pair proving every position of the derivation's conclusion.
std::pair<Term, Term> derivation_to_fhp_pair(const SimilarityDerivation& d);

// nullopt means no witness was found, not that the types are not isomorphic.
std::optional<IsoWitness> synthesize_iso(const Type& s, const Type& t, bool strong_only);

// Witness for the normalization of t, typed t -> the rewritten type.
IsoWitness normalization_witness(const Type& t);

// a : s ~ t and b : t ~ u give s ~ u.
IsoWitness compose_witnesses(const IsoWitness& a, const IsoWitness& b);

}  // namespace isotype
