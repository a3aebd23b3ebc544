#include "eta/catalog.hpp"

#include <algorithm>

namespace eta {

std::vector<ZeroRecord> Catalog::of_kind(ZeroKind kind) const {
  std::vector<ZeroRecord> out;
  for (const auto& r : records)
    if (r.kind == kind) out.push_back(r);
  return out;
}

void Catalog::sort() {
  std::stable_sort(records.begin(), records.end(), [](const ZeroRecord& a, const ZeroRecord& b) {
    if (a.gamma() != b.gamma()) return a.gamma() < b.gamma();
    return static_cast<int>(a.kind) < static_cast<int>(b.kind);
  });
}

}  // namespace eta
