#include "fabric/years.hpp"

#include <cstdlib>

#include "fabric/error.hpp"

namespace fabric {

YearResolution resolve_year(const std::set<int>& available, int requested, int window,
                            const std::string& what) {
  YearResolution out{requested, requested};
  int best_distance = window + 1;
  for (int year : available) {
    const int d = std::abs(year - requested);
    if (d < best_distance) {
      best_distance = d;
      out.resolved = year;
    }
  }
  if (best_distance > window) {
    std::vector<std::string> years;
    std::string listing;
    for (int y : available) {
      years.push_back(std::to_string(y));
      if (!listing.empty()) listing += ", ";
      listing += std::to_string(y);
    }
    throw ResolutionError(what + ": no data within +/-" + std::to_string(window) + " years of " +
                              std::to_string(requested) + " (available: " +
                              (listing.empty() ? "none" : listing) + ")",
                          years);
  }
  return out;
}

}  // namespace fabric
