#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "isotype/lambda.h"
#include "isotype/type.h"

namespace isotype {

enum class RewriteRule {
  PhiRule,
  OmegaRule,
  AndArrowRule,
  ArrowAndRule,
  OrArrowRule,
  ArrowOrRule,
  LeqAndRule,
  LeqOrRule,
  TopDistRule,
};

const char* rule_name(RewriteRule r);

// One rewrite at `position`. fwd/bwd are the step's coercions between the whole
// types before and after, already lifted through the context.
struct RewriteStep {
  RewriteRule rule;
  TypeContext position;
  Type before;
  Type after;
  Term fwd;
  Term bwd;
};

struct NormCertificate {
  Type source;
  // The rewritten type before AC canonicalization.
  Type result;
  std::vector<RewriteStep> steps;
  Term witness_fwd;
  Term witness_bwd;
};

struct NormalizeOptions {
  // Asserts after each step that the path-ordering measure decreased.
  bool check_measure = false;
  // Picks one of the available redexes; innermost-leftmost when empty.
  std::function<std::size_t(const std::vector<RewriteStep>&)> choose;
};

struct Normalized {
  CanonicalType normal;
  NormCertificate certificate;
};

class NormalizationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// Every applicable (rule, position) pair, in post-order of positions.
std::vector<RewriteStep> find_redexes(const Type& t);
Normalized normalize(const Type& t, const NormalizeOptions& opts = {});
CanonicalType nf(const Type& t);
bool nf_equal(const Type& s, const Type& t);
std::pair<Term, Term> iso_to_nf(const Type& t);

// Recursive path ordering over polarity-labelled connectives, the
// termination measure of the rewrite system.
bool measure_greater(const Type& s, const Type& t);

// `rule-tag @ path : before ⟹ after`, one line per step.
std::string format_certificate(const NormCertificate& c);

}  // namespace isotype
