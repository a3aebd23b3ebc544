// Persisted collection of zero records for one height window.
#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "eta/zeta_zeros.hpp"

namespace eta {

inline constexpr int kCatalogSchemaVersion = 1;

struct Catalog {
  double t0 = 0, t1 = 0;
  EvalParams params{};
  std::map<std::string, std::string> parameters;  ///< tracer thresholds and other provenance
  std::uint64_t seed = 0;
  std::vector<ZeroRecord> records;  ///< sorted by ordinate, ties broken by kind
  int schema_version = kCatalogSchemaVersion;

  std::vector<ZeroRecord> of_kind(ZeroKind kind) const;
  void sort();
};

}  // namespace eta
