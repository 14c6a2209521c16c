#include "fabric/error.hpp"

namespace fabric {
namespace {

std::string join_problems(const std::vector<std::string>& problems) {
  std::string out = std::to_string(problems.size()) + " dataset problem(s)";
  for (const auto& p : problems) out += "\n  - " + p;
  return out;
}

}  // namespace

DatasetError::DatasetError(std::vector<std::string> problems)
    : Error(join_problems(problems)), problems_(std::move(problems)) {}

}  // namespace fabric
