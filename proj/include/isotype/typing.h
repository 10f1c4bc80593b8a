#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "isotype/lambda.h"
#include "isotype/type.h"

namespace isotype {

struct IsoWitness;

enum class TypingRule {
  Ax,
  Equiv,
  ArrowI,
  ArrowE,
  AndI,
  AndE_l,
  AndE_r,
  OrI_l,
  OrI_r,
  OrE,
  Adm_L,
  Adm_Omega,
  Adm_C,
  Adm_OrI,
  Adm_OrE,
};

const char* typing_rule_name(TypingRule r);
std::optional<TypingRule> typing_rule_from_name(std::string_view name);

using TypeEnv = std::map<std::string, Type>;

// Conclusion env |- term : type. `var` names the variable a rule binds,
// substitutes or rewrites (ArrowI, OrE, Adm_L, Adm_C, Adm_OrI, Adm_OrE).
struct TypingDerivation {
  TypingRule rule;
  std::string var;
  TypeEnv env;
  Term term;
  Type type;
  std::vector<TypingDerivation> premises;

  std::size_t size() const;
};

struct CheckResult {
  bool ok = true;
  std::string diagnostic;
  explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const TypingDerivation& d);

// Bounded proof search for env |- term : type over the checked rules.
std::optional<TypingDerivation> derive(const TypeEnv& env, const Term& term, const Type& type);

std::optional<TypingDerivation> emit_leq_derivation(const Type& s, const Type& t);

struct WitnessDerivations {
  TypingDerivation fwd;
  TypingDerivation bwd;
};

// Derivations of |- fwd : source -> target and |- bwd : target -> source.
// On failure returns nullopt and, when given, sets `why`.
std::optional<WitnessDerivations> emit_witness_derivations(const IsoWitness& w, std::string* why = nullptr);

// One node per line, two spaces of indentation per level:
// `rule[var] | {x : T, ...} | term | type`. Types containing `|` are parenthesized.
std::string format_typing(const TypingDerivation& d);
TypingDerivation parse_typing(std::string_view text);

}  // namespace isotype
