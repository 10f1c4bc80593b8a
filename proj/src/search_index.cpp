#include "isotype/search_index.h"

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>

#include "isotype/normalizer.h"

namespace isotype {

namespace {

constexpr const char* kHeader = "ISOIDX";
constexpr int kVersion = 1;

std::string join_sorted(std::vector<std::string> keys) {
  std::sort(keys.begin(), keys.end());
  std::string out;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    if (i) out += ',';
    out += keys[i];
  }
  return out;
}

std::string hex(std::uint64_t v) {
  std::ostringstream s;
  s << std::hex << std::setw(16) << std::setfill('0') << v;
  return s.str();
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string entry_line(const SignatureEntry& e) {
  return e.coarse_key + "\t" + e.name + "\t" + print_type(e.declared);
}

SignatureEntry make_entry(std::string name, const Type& declared) {
  CanonicalType normal = nf(declared);
  std::string key = coarse_key(normal);
  return SignatureEntry{std::move(name), declared, normal, std::move(key)};
}

}  // namespace

std::string coarse_key(const CanonicalType& t) {
  switch (t.kind()) {
    case TypeKind::Atom:
      return "a";
    case TypeKind::Omega:
      return "w";
    case TypeKind::Arrow: {
      std::vector<std::string> args;
      const CanonicalType* cur = &t;
      while (cur->is_arrow()) {
        if (!cur->left().is_omega()) args.push_back(coarse_key(cur->left()));
        cur = &cur->right();
      }
      return "F[" + join_sorted(std::move(args)) + "]>" + coarse_key(*cur);
    }
    case TypeKind::And:
    case TypeKind::Or: {
      std::vector<std::string> kids;
      for (const auto& c : t.children()) kids.push_back(coarse_key(c));
      return std::string(t.is_and() ? "I(" : "U(") + join_sorted(std::move(kids)) + ")";
    }
  }
  return "?";
}

std::uint64_t fnv1a64(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

Index::Index(std::vector<SignatureEntry> entries, std::uint64_t source_digest)
    : entries_(std::move(entries)), source_digest_(source_digest) {
  for (std::size_t i = 0; i < entries_.size(); ++i) buckets_[entries_[i].coarse_key].push_back(i);
}

const std::vector<std::size_t>& Index::bucket(const std::string& key) const {
  static const std::vector<std::size_t> empty;
  auto it = buckets_.find(key);
  return it == buckets_.end() ? empty : it->second;
}

Index build_index(std::istream& corpus, std::vector<CorpusDiagnostic>* diagnostics) {
  if (!corpus) throw std::runtime_error("corpus stream is not readable");
  std::string text((std::istreambuf_iterator<char>(corpus)), std::istreambuf_iterator<char>());
  if (corpus.bad()) throw std::runtime_error("error while reading corpus");
  return build_index_from_string(text, diagnostics);
}

Index build_index_from_string(const std::string& text, std::vector<CorpusDiagnostic>* diagnostics) {
  std::vector<SignatureEntry> entries;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto report = [&](std::string msg) {
    if (diagnostics) diagnostics->push_back({lineno, std::move(msg)});
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string s = trim(line);
    if (s.empty() || s[0] == '#') continue;
    auto colon = s.find(':');
    if (colon == std::string::npos) {
      report("expected 'name : type'");
      continue;
    }
    std::string name = trim(s.substr(0, colon));
    if (!is_identifier(name)) {
      report("bad name '" + name + "'");
      continue;
    }
    try {
      entries.push_back(make_entry(name, parse_type(s.substr(colon + 1))));
    } catch (const ParseError& e) {
      report(e.what());
    } catch (const std::exception& e) {
      report(std::string("cannot normalize: ") + e.what());
    }
  }
  return Index(std::move(entries), fnv1a64(text));
}

std::vector<SearchHit> query(const Index& ix, const Type& q, bool strong_only) {
  CanonicalType qn = nf(q);
  std::vector<SearchHit> exact, rest;
  for (std::size_t i : ix.bucket(coarse_key(qn))) {
    const SignatureEntry& e = ix.entries()[i];
    auto w = synthesize_iso(q, e.declared, strong_only);
    if (!w) continue;
    bool same = e.normal == qn;
    (same ? exact : rest).push_back(SearchHit{e.name, e.declared, std::move(*w), same});
  }
  exact.insert(exact.end(), std::make_move_iterator(rest.begin()), std::make_move_iterator(rest.end()));
  return exact;
}

void save_index(const Index& ix, std::ostream& out) {
  std::string body;
  for (const auto& e : ix.entries()) body += entry_line(e) + "\n";
  out << kHeader << " v" << kVersion << "\n";
  out << "source\t" << hex(ix.source_digest()) << "\n";
  out << "digest\t" << hex(fnv1a64(body)) << "\n";
  out << body;
  if (!out) throw std::runtime_error("error while writing index");
}

void save_index(const Index& ix, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  save_index(ix, out);
}

Index load_index(std::istream& in) {
  if (!in) throw std::runtime_error("index stream is not readable");
  std::string line;
  if (!std::getline(in, line)) throw IndexFormatError("empty index file");
  std::istringstream head(line);
  std::string magic, ver;
  head >> magic >> ver;
  if (magic != kHeader || ver.size() < 2 || ver[0] != 'v') throw IndexFormatError("not an index file");
  int version = 0;
  try {
    version = std::stoi(ver.substr(1));
  } catch (const std::exception&) {
    throw IndexFormatError("bad version field '" + ver + "'");
  }
  if (version != kVersion) {
    throw IndexVersionError("unsupported index version " + std::to_string(version) + " (expected " +
                            std::to_string(kVersion) + ")");
  }

  auto field = [&](const std::string& tag) {
    if (!std::getline(in, line) || line.rfind(tag + "\t", 0) != 0) throw IndexFormatError("missing " + tag + " line");
    try {
      std::size_t used = 0;
      std::string v = line.substr(tag.size() + 1);
      std::uint64_t x = std::stoull(v, &used, 16);
      if (used != v.size()) throw IndexFormatError("bad " + tag + " value");
      return x;
    } catch (const std::logic_error&) {
      throw IndexFormatError("bad " + tag + " value");
    }
  };
  std::uint64_t source = field("source");
  std::uint64_t digest = field("digest");

  std::string body;
  std::vector<SignatureEntry> entries;
  std::size_t lineno = 3;
  while (std::getline(in, line)) {
    ++lineno;
    body += line + "\n";
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw IndexFormatError("malformed entry at line " + std::to_string(lineno));
    std::string key = line.substr(0, t1);
    std::string name = line.substr(t1 + 1, t2 - t1 - 1);
    SignatureEntry e = [&] {
      try {
        return make_entry(name, parse_type(line.substr(t2 + 1)));
      } catch (const std::exception& ex) {
        throw IndexFormatError("bad type at line " + std::to_string(lineno) + ": " + ex.what());
      }
    }();
    if (e.coarse_key != key) throw IndexFormatError("stale key at line " + std::to_string(lineno));
    entries.push_back(std::move(e));
  }
  if (fnv1a64(body) != digest) throw IndexFormatError("digest mismatch");
  return Index(std::move(entries), source);
}

Index load_index(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return load_index(in);
}

}  // namespace isotype
