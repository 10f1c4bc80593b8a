#include "isotype/synthesis.h"

#include <array>

#include "isotype/preorder.h"

namespace isotype {

namespace {

const std::array<std::pair<StockIso, const char*>, 12> kStock{{
    {StockIso::IdemAnd, "idem-and"},
    {StockIso::IdemOr, "idem-or"},
    {StockIso::CommAnd, "comm-and"},
    {StockIso::CommOr, "comm-or"},
    {StockIso::AssocAnd, "assoc-and"},
    {StockIso::AssocOr, "assoc-or"},
    {StockIso::DistAndOr, "dist-and-or"},
    {StockIso::DistOrAnd, "dist-or-and"},
    {StockIso::DistArrowAnd, "dist-arrow-and"},
    {StockIso::DistArrowOr, "dist-arrow-or"},
    {StockIso::EraseAnd, "erase-and"},
    {StockIso::EraseOr, "erase-or"},
}};

bool fhi(const Term& t) { return is_fhi_term(t); }

IsoWitness checked(IsoWitness w) {
  if (!verify_inverse_pair(w.fwd, w.bwd)) {
    throw WitnessError("constructed coercions are not inverse: " + print_term(w.fwd) + " / " + print_term(w.bwd));
  }
  w.strong = fhi(w.fwd) && fhi(w.bwd);
  return w;
}

}  // namespace

const char* stock_name(StockIso s) {
  for (const auto& [k, n] : kStock) {
    if (k == s) return n;
  }
  return "?";
}

std::optional<StockIso> stock_from_name(const std::string& name) {
  for (const auto& [k, n] : kStock) {
    if (name == n) return k;
  }
  return std::nullopt;
}

std::vector<StockIso> all_stock_isos() {
  std::vector<StockIso> out;
  for (const auto& [k, n] : kStock) out.push_back(k);
  return out;
}

IsoWitness stock_witness(StockIso which, const std::vector<Type>& args) {
  std::size_t need = 2;
  if (which == StockIso::IdemAnd || which == StockIso::IdemOr) need = 1;
  if (which == StockIso::AssocAnd || which == StockIso::AssocOr || which == StockIso::DistAndOr ||
      which == StockIso::DistOrAnd || which == StockIso::DistArrowAnd || which == StockIso::DistArrowOr) {
    need = 3;
  }
  if (args.size() != need) throw std::invalid_argument(std::string(stock_name(which)) + " needs " +
                                                       std::to_string(need) + " types");
  const Type& a = args[0];
  const Type& b = args[need > 1 ? 1 : 0];
  const Type& c = args[need > 2 ? 2 : 0];
  Term id = identity_term();
  Term eta = to_term(PermTree::eta(1));
  IsoWitness w{a, a, id, id, true, Provenance::Stock, stock_name(which), {}, {}, {}};
  switch (which) {
    case StockIso::IdemAnd:
      w.source = Type::conj(a, a);
      break;
    case StockIso::IdemOr:
      w.source = Type::disj(a, a);
      break;
    case StockIso::CommAnd:
      w.source = Type::conj(a, b);
      w.target = Type::conj(b, a);
      break;
    case StockIso::CommOr:
      w.source = Type::disj(a, b);
      w.target = Type::disj(b, a);
      break;
    case StockIso::AssocAnd:
      w.source = Type::conj(Type::conj(a, b), c);
      w.target = Type::conj(a, Type::conj(b, c));
      break;
    case StockIso::AssocOr:
      w.source = Type::disj(Type::disj(a, b), c);
      w.target = Type::disj(a, Type::disj(b, c));
      break;
    case StockIso::DistAndOr:
      w.source = Type::conj(Type::disj(a, b), c);
      w.target = Type::disj(Type::conj(a, c), Type::conj(b, c));
      break;
    case StockIso::DistOrAnd:
      w.source = Type::disj(Type::conj(a, b), c);
      w.target = Type::conj(Type::disj(a, c), Type::disj(b, c));
      break;
    case StockIso::DistArrowAnd:
      w.source = Type::arrow(a, Type::conj(b, c));
      w.target = Type::conj(Type::arrow(a, b), Type::arrow(a, c));
      w.fwd = w.bwd = eta;
      break;
    case StockIso::DistArrowOr:
      w.source = Type::arrow(Type::disj(a, b), c);
      w.target = Type::conj(Type::arrow(a, c), Type::arrow(b, c));
      w.fwd = w.bwd = eta;
      break;
    case StockIso::EraseAnd:
    case StockIso::EraseOr: {
      bool conj = which == StockIso::EraseAnd;
      w.source = conj ? Type::conj(a, b) : Type::disj(a, b);
      // The smaller component survives an intersection, the larger a union.
      std::optional<Term> up;
      if ((up = leq_witness(a, b))) {
        w.target = conj ? a : b;
      } else if ((up = leq_witness(b, a))) {
        w.target = conj ? b : a;
      } else {
        throw std::invalid_argument("erase needs one component below the other");
      }
      w.fwd = w.bwd = *up;
      break;
    }
  }
  return checked(std::move(w));
}

std::pair<Term, Term> derivation_to_fhp_pair(const SimilarityDerivation& d) {
  using Rule = SimilarityDerivation::Rule;
  switch (d.rule) {
    case Rule::Refl:
      return {identity_term(), identity_term()};
    case Rule::MergeAnd:
    case Rule::MergeOr:
      if (d.premises.size() != 1) throw std::invalid_argument("malformed merge node");
      return derivation_to_fhp_pair(d.premises[0]);
    case Rule::ArrowPerm: {
      const std::size_t n = d.perm.size();
      if (d.premises.size() != n + 1) throw std::invalid_argument("malformed arrow node");
      std::vector<std::pair<Term, Term>> cols;
      for (std::size_t i = 0; i < n; ++i) cols.push_back(derivation_to_fhp_pair(d.premises[i]));
      auto [star, star_inv] = derivation_to_fhp_pair(d.premises[n]);
      Permutation inv = d.perm.inverse();
      std::vector<std::string> names{"x"};
      for (std::size_t j = 0; j < n; ++j) names.push_back("y" + std::to_string(j + 1));
      std::vector<Term> fwd_args, bwd_args;
      for (std::size_t i = 0; i < n; ++i) {
        fwd_args.push_back(Term::app(cols[i].second, var(names[inv(i) + 1])));
        std::size_t src = d.perm(i);
        bwd_args.push_back(Term::app(cols[src].first, var(names[src + 1])));
      }
      Term p = lams(names, Term::app(star, apps(var("x"), fwd_args)));
      Term q = lams(names, Term::app(star_inv, apps(var("x"), bwd_args)));
      return {beta_normalize(p), beta_normalize(q)};
    }
  }
  throw std::invalid_argument("unknown derivation rule");
}

IsoWitness normalization_witness(const Type& t) {
  Normalized n = normalize(t);
  IsoWitness w{t,    n.certificate.result, n.certificate.witness_fwd, n.certificate.witness_bwd,
               true, Provenance::NormCertificate, "nf", {}, n.certificate, {}};
  return checked(std::move(w));
}

std::optional<IsoWitness> synthesize_iso(const Type& s, const Type& t, bool strong_only) {
  Normalized ns = normalize(s);
  Normalized nt = normalize(t);
  auto d = similar(ns.normal, nt.normal, strong_only);
  if (!d) return std::nullopt;
  auto [p, p_inv] = derivation_to_fhp_pair(*d);
  const NormCertificate& cs = ns.certificate;
  const NormCertificate& ct = nt.certificate;
  Term fwd = fhp_compose(ct.witness_bwd, fhp_compose(p, cs.witness_fwd));
  Term bwd = fhp_compose(cs.witness_bwd, fhp_compose(p_inv, ct.witness_fwd));
  IsoWitness w{s, t, fwd, bwd, false, Provenance::Similarity, "similarity", std::move(*d), cs, ct};
  w = checked(std::move(w));
  if (strong_only && !w.strong) throw WitnessError("strong search produced a non-identity coercion");
  return w;
}

IsoWitness compose_witnesses(const IsoWitness& a, const IsoWitness& b) {
  if (a.target != b.source) throw std::invalid_argument("witnesses do not meet: " + print_type(a.target) + " vs " + print_type(b.source));
  IsoWitness w{a.source, b.target, fhp_compose(b.fwd, a.fwd), fhp_compose(a.bwd, b.bwd), false,
               Provenance::Composite, a.label + "+" + b.label, {}, {}, {}};
  return checked(std::move(w));
}

}  // namespace isotype
