#include <doctest.h>

#include <set>

#include "isotype/type.h"
#include "support/universe.h"

using namespace isotype;

TEST_CASE("parse and print basic types") {
  CHECK(print_type(parse_type("p -> q -> r")) == "p -> q -> r");
  CHECK(parse_type("p -> q -> r") == Type::arrow(Type::atom("p"), Type::arrow(Type::atom("q"), Type::atom("r"))));
  CHECK(print_type(parse_type("(p -> q) -> r")) == "(p -> q) -> r");
  CHECK(parse_type("omega").is_omega());
  CHECK(parse_type("a & b & c") == Type::conj(Type::conj(Type::atom("a"), Type::atom("b")), Type::atom("c")));
  CHECK(parse_type("a & b -> c").is_arrow());
  CHECK(parse_type("a | b -> c").left().is_or());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_type("p & q | r"), ParseError);
  CHECK_THROWS_AS(parse_type("p ->"), ParseError);
  CHECK_THROWS_AS(parse_type("(p"), ParseError);
  CHECK_THROWS_AS(parse_type(""), ParseError);
  CHECK_THROWS_AS(parse_type("p q"), ParseError);
  CHECK_NOTHROW(parse_type("(p & q) | r"));
}

TEST_CASE("print then parse is the identity on the universe") {
  for (const auto& t : testing::universe()) {
    REQUIRE(parse_type(print_type(t)) == t);
  }
}

TEST_CASE("canonical form is AC invariant") {
  CHECK(canonicalize(parse_type("p & q")) == canonicalize(parse_type("q & p")));
  CHECK(canonicalize(parse_type("(p & q) & r")) == canonicalize(parse_type("p & (q & r)")));
  CHECK(canonicalize(parse_type("p | p")) == canonicalize(parse_type("p")));
  CHECK(canonicalize(parse_type("p -> q")) != canonicalize(parse_type("q -> p")));
  CHECK(canonicalize(parse_type("(p & q) -> r")) == canonicalize(parse_type("(q & p) -> r")));
  CHECK(canonicalize(parse_type("p & q")) != canonicalize(parse_type("p | q")));
}

TEST_CASE("to_type round trips through canonicalize") {
  for (const auto& t : testing::universe()) {
    CanonicalType c = canonicalize(t);
    REQUIRE(canonicalize(to_type(c)) == c);
  }
}

TEST_CASE("contexts address subterms") {
  Type t = parse_type("(p & q) -> r | s");
  TypeContext ctx{{Step::ArrowLeft, Step::AndRight}};
  CHECK(subterm_at(t, ctx) == Type::atom("q"));
  CHECK(ctx.to_string() == "/ArrowLeft/AndRight");
  CHECK(TypeContext{}.to_string() == "/");
  CHECK(plug(t, ctx, Type::omega()) == parse_type("(p & omega) -> r | s"));
  CHECK_THROWS_AS(subterm_at(t, TypeContext{{Step::OrLeft}}), std::invalid_argument);
}

TEST_CASE("semantic equivalence") {
  CHECK(sem_equiv(parse_type("p"), parse_type("omega -> p")));
  CHECK(sem_equiv(parse_type("omega"), parse_type("omega -> omega")));
  CHECK(sem_equiv(parse_type("p & omega"), parse_type("p")));
  CHECK(sem_equiv(parse_type("p | omega"), parse_type("omega")));
  CHECK(sem_equiv(parse_type("q -> omega -> p"), parse_type("q -> p")));
  CHECK_FALSE(sem_equiv(parse_type("p"), parse_type("q -> p")));
  CHECK_FALSE(sem_equiv(parse_type("p & q"), parse_type("q & p")));
  CHECK_FALSE(sem_equiv(parse_type("p -> omega"), parse_type("omega")));
}

TEST_CASE("random equivalence steps stay equivalent") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 300; ++i) {
    Type t = testing::random_type(rng, {"p", "q"}, 3);
    Type u = testing::random_equiv_step(rng, t);
    REQUIRE(sem_equiv(t, u));
  }
}
