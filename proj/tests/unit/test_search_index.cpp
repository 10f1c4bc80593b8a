#include <doctest.h>

#include <map>
#include <sstream>

#include "isotype/normalizer.h"
#include "isotype/search_index.h"
#include "isotype/similarity.h"
#include "support/universe.h"

using namespace isotype;

namespace {
Type T(const char* s) { return parse_type(s); }

std::vector<std::string> names(const std::vector<SearchHit>& hits) {
  std::vector<std::string> out;
  for (const auto& h : hits) out.push_back(h.name);
  return out;
}
}  // namespace

TEST_CASE("corpus ingestion") {
  std::vector<CorpusDiagnostic> diags;
  Index ix = build_index_from_string("# comment\n\nf : a -> b -> c\ng : omega -> p\nbad line\nh : (p\n", &diags);
  REQUIRE(ix.entries().size() == 2);
  CHECK(ix.entries()[0].normal == canonicalize(T("a -> b -> c")));
  CHECK(ix.entries()[1].normal == canonicalize(T("p")));
  REQUIRE(diags.size() == 2);
  CHECK(diags[0].line == 5);
  CHECK(diags[1].line == 6);
}

TEST_CASE("coarse keys") {
  CHECK(coarse_key(canonicalize(T("p"))) == "a");
  CHECK(coarse_key(canonicalize(T("omega"))) == "w");
  CHECK(coarse_key(canonicalize(T("p -> q -> r"))) == "F[a,a]>a");
  CHECK(coarse_key(nf(T("omega -> p -> p"))) == coarse_key(nf(T("p -> p"))));
  CHECK(coarse_key(canonicalize(T("p & (q -> r)"))) == coarse_key(canonicalize(T("(r -> q) & p"))));
  CHECK(coarse_key(canonicalize(T("p & q"))) != coarse_key(canonicalize(T("p | q"))));
}

TEST_CASE("queries") {
  Index ix = build_index_from_string(
      "f : p & q -> r\n"
      "swap : p -> q -> r\n"
      "g : p -> q\n"
      "h : q & p -> r\n");
  auto hits = query(ix, T("q & p -> r"), false);
  CHECK(names(hits) == std::vector<std::string>{"f", "h"});
  for (const auto& h : hits) {
    CHECK(h.exact_normal_form);
    CHECK(h.witness.strong);
    CHECK(verify_inverse_pair(h.witness.fwd, h.witness.bwd));
  }
  hits = query(ix, T("q -> p -> r"), false);
  REQUIRE(names(hits) == std::vector<std::string>{"swap"});
  CHECK(beta_normalize(hits[0].witness.fwd) == parse_term("\\x y1 y2. x y2 y1"));
  CHECK(query(ix, T("q -> p -> r"), true).empty());
  CHECK(query(ix, T("q -> p"), false).empty());
}

TEST_CASE("exact matches come first") {
  Index ix = build_index_from_string("a : q -> p -> r\nb : p -> q -> r\n");
  auto hits = query(ix, T("p -> q -> r"), false);
  CHECK(names(hits) == std::vector<std::string>{"b", "a"});
}

TEST_CASE("save and load") {
  Index ix = build_index_from_string("f : p & q -> r\nswap : p -> q -> r\ng : p | (q -> p)\n");
  std::stringstream buf;
  save_index(ix, buf);
  std::string text = buf.str();
  CHECK(text.rfind("ISOIDX v1\n", 0) == 0);
  std::istringstream in(text);
  Index back = load_index(in);
  CHECK(back.source_digest() == ix.source_digest());
  for (const char* q : {"q & p -> r", "q -> p -> r", "(q -> p) | p"}) {
    auto a = query(ix, T(q), false);
    auto b = query(back, T(q), false);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].name == b[i].name);
      CHECK(a[i].witness.fwd == b[i].witness.fwd);
    }
  }

  std::string corrupt = text;
  corrupt[corrupt.size() - 3] = 'z';
  std::istringstream c(corrupt);
  CHECK_THROWS_AS(load_index(c), IndexFormatError);

  std::string newer = text;
  newer.replace(0, 9, "ISOIDX v2");
  std::istringstream n(newer);
  CHECK_THROWS_AS(load_index(n), IndexVersionError);

  std::istringstream junk("hello\n");
  CHECK_THROWS_AS(load_index(junk), IndexFormatError);
}

TEST_CASE("coarse keys agree for every similar pair in the universe") {
  std::map<std::string, CanonicalType> forms;
  for (const auto& t : testing::universe()) {
    CanonicalType n = nf(t);
    forms.emplace(n.key(), n);
  }
  std::vector<CanonicalType> v;
  for (auto& [k, n] : forms) v.push_back(n);
  for (const auto& a : v) {
    for (const auto& b : v) {
      if (similar(a, b, false)) REQUIRE(coarse_key(a) == coarse_key(b));
    }
  }
}

TEST_CASE("determinism") {
  std::string corpus = "a : p -> q -> r\nb : q -> p -> r\nc : (p -> q -> r) & s\n";
  auto x = query(build_index_from_string(corpus), T("q -> p -> r"), false);
  auto y = query(build_index_from_string(corpus), T("q -> p -> r"), false);
  CHECK(names(x) == names(y));
}
