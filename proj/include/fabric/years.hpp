#pragma once

#include <set>
#include <string>
#include <vector>

namespace fabric {

/// Outcome of resolving a requested year against the years a table covers.
struct YearResolution {
  int requested = 0;
  int resolved = 0;
  bool exact() const noexcept { return requested == resolved; }
};

inline constexpr int kDefaultYearWindow = 3;

/// Nearest available year within +/- `window`; ties go to the earlier year.
/// Throws ResolutionError listing the available years when none qualifies.
YearResolution resolve_year(const std::set<int>& available, int requested, int window,
                            const std::string& what);

/// Collects human-readable flags (fallbacks, node mappings, estimates).
using Notes = std::vector<std::string>;

inline void add_note(Notes* notes, std::string text) {
  if (notes) notes->push_back(std::move(text));
}

}  // namespace fabric
