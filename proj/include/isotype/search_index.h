#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "isotype/synthesis.h"
#include "isotype/type.h"

namespace isotype {

// Skeleton of a normal type: atoms collapse to one placeholder, arrow spines
// are flattened into a sorted multiset of non-omega argument keys, and And/Or
// children are summarized as sorted multisets. Similar normal types share it.
std::string coarse_key(const CanonicalType& normal);

struct SignatureEntry {
  std::string name;
  Type declared;
  CanonicalType normal;
  std::string coarse_key;
};

struct CorpusDiagnostic {
  std::size_t line;
  std::string message;
};

class Index {
 public:
  Index() = default;
  Index(std::vector<SignatureEntry> entries, std::uint64_t source_digest);

  const std::vector<SignatureEntry>& entries() const { return entries_; }
  // Entry positions sharing a coarse key, in corpus order.
  const std::vector<std::size_t>& bucket(const std::string& key) const;
  std::uint64_t source_digest() const { return source_digest_; }

 private:
  std::vector<SignatureEntry> entries_;
  std::map<std::string, std::vector<std::size_t>> buckets_;
  std::uint64_t source_digest_ = 0;
};

class IndexFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexVersionError : public IndexFormatError {
 public:
  using IndexFormatError::IndexFormatError;
};

std::uint64_t fnv1a64(const std::string& data);

// `name : type` lines; `#` comments and blank lines are skipped, malformed
// lines are reported and skipped. Throws std::runtime_error on a stream failure.
Index build_index(std::istream& corpus, std::vector<CorpusDiagnostic>* diagnostics = nullptr);
Index build_index_from_string(const std::string& corpus, std::vector<CorpusDiagnostic>* diagnostics = nullptr);

struct SearchHit {
  std::string name;
  Type declared;
  // fwd : query -> declared, bwd : declared -> query.
  IsoWitness witness;
  bool exact_normal_form = false;
};

// Exact normal-form matches first, then corpus order.
std::vector<SearchHit> query(const Index& ix, const Type& q, bool strong_only);

void save_index(const Index& ix, std::ostream& out);
void save_index(const Index& ix, const std::string& path);
Index load_index(std::istream& in);
Index load_index(const std::string& path);

}  // namespace isotype
