#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "isotype/cli.h"
#include "isotype/lambda.h"

using namespace isotype;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "isotype_cli_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void write(const std::filesystem::path& p, const std::string& text) {
  std::ofstream(p) << text;
}

}  // namespace

TEST_CASE("parse and nf") {
  auto r = run({"parse", "p -> (q & r)"});
  CHECK(r.code == 0);
  CHECK(r.out == "p -> q & r\n");
  r = run({"nf", "((p1 -> p2) & p2) | p3"});
  CHECK(r.code == 0);
  CHECK(r.out == "p2 | p3\n");
  r = run({"nf", "--trace", "((p1 -> p2) & p2) | p3"});
  CHECK(r.out.find("# LeqAndRule @ /OrLeft") != std::string::npos);
  r = run({"nf", "p &"});
  CHECK(r.code == 2);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("usage errors") {
  CHECK(run({}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"iso", "p"}).code == 2);
  CHECK(run({"nf", "@/nonexistent/file"}).code == 2);
}

TEST_CASE("leq and equiv") {
  auto r = run({"leq", "p", "q -> p", "--witness"});
  CHECK(r.code == 0);
  CHECK(lines(r.out).at(1) == "\\x y. x y");
  CHECK(run({"leq", "omega", "p"}).code == 1);
  CHECK(run({"equiv", "p", "omega -> p"}).code == 0);
  CHECK(run({"equiv", "p", "q"}).code == 1);
}

TEST_CASE("similar") {
  auto r = run({"similar", "--derivation", "p1 -> p2 -> p3", "p2 -> p1 -> p3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ArrowPerm") != std::string::npos);
  CHECK(run({"similar", "--strong", "p1 -> p2 -> p3", "p2 -> p1 -> p3"}).code == 1);
}

TEST_CASE("iso and verify pipe") {
  auto r = run({"iso", "p1 -> p2 -> p3", "p2 -> p1 -> p3"});
  REQUIRE(r.code == 0);
  auto l = lines(r.out);
  CHECK(parse_term(l.at(0)) == parse_term("\\x y1 y2. x y2 y1"));
  CHECK(run({"verify", l.at(0), l.at(1)}).code == 0);
  CHECK(run({"verify", l.at(0), "\\x. x"}).code == 1);

  r = run({"iso", "--strong", "omega -> p -> p", "p -> p"});
  CHECK(r.code == 1);
  CHECK(r.out == "no witness found (similarity-incomplete)\n");
}

TEST_CASE("iso derivations feed typecheck") {
  auto r = run({"iso", "--emit-derivation", "p1 -> p2 -> p3", "p2 -> p1 -> p3"});
  REQUIRE(r.code == 0);
  auto pos = r.out.find("# derivation bwd");
  REQUIRE(pos != std::string::npos);
  std::string fwd = r.out.substr(r.out.find("# derivation fwd"), pos - r.out.find("# derivation fwd"));
  auto file = scratch("fwd.txt");
  write(file, fwd);
  auto t = run({"typecheck", file.string()});
  CHECK(t.code == 0);
  CHECK(t.out == "ok\n");

  write(file, "ArrowI[x] | {} | \\x. x | p -> s -> p\n  Equiv | {x : p} | x | s -> p\n    Ax | {x : p} | x | p\n");
  t = run({"typecheck", file.string()});
  CHECK(t.code == 1);
  CHECK(t.out.find("rejected") == 0);

  write(file, "garbage\n");
  CHECK(run({"typecheck", file.string()}).code == 2);
}

TEST_CASE("at-file inputs") {
  auto file = scratch("type.txt");
  write(file, "p & q -> r | s\n");
  auto r = run({"parse", "@" + file.string()});
  CHECK(r.code == 0);
  CHECK(r.out == "p & q -> r | s\n");
}

TEST_CASE("index build and query") {
  auto corpus = scratch("corpus.txt");
  auto idx = scratch("corpus.idx");
  write(corpus, "f : p & q -> r\nswap : p -> q -> r\nnot a line\n");
  auto b = run({"index-build", corpus.string(), "-o", idx.string()});
  CHECK(b.code == 0);
  CHECK(b.out == "indexed 2 entries\n");
  CHECK(b.err.find(":3:") != std::string::npos);
  auto q = run({"index-query", idx.string(), "q & p -> r"});
  CHECK(q.code == 0);
  CHECK(q.out.rfind("f : p & q -> r\n", 0) == 0);
  CHECK(run({"index-query", idx.string(), "q -> p"}).code == 1);
  CHECK(run({"index-query", idx.string(), "q -> p -> r", "--strong"}).code == 1);
  write(idx, "ISOIDX v9\n");
  CHECK(run({"index-query", idx.string(), "q -> p"}).code == 2);
}
