#pragma once

#include <compare>
#include <string>
#include <string_view>

namespace cochange {

// Fully qualified class name, dot separated. The package is every segment
// except the last; classes in the default package have an empty package.
struct ClassId {
  std::string fqn;

  ClassId() = default;
  explicit ClassId(std::string name) : fqn(std::move(name)) {}

  auto operator<=>(const ClassId&) const = default;
};

// A valid fqn has at least one segment and no empty segments.
inline bool is_valid_fqn(std::string_view fqn) {
  if (fqn.empty()) return false;
  std::size_t start = 0;
  while (true) {
    std::size_t dot = fqn.find('.', start);
    if (dot == start) return false;  // empty segment
    if (dot == std::string_view::npos) return start < fqn.size();
    start = dot + 1;
    if (start == fqn.size()) return false;  // trailing dot
  }
}

inline std::string_view package_of(const ClassId& id) {
  std::string_view fqn = id.fqn;
  std::size_t dot = fqn.rfind('.');
  return dot == std::string_view::npos ? std::string_view{} : fqn.substr(0, dot);
}

inline std::string_view simple_name_of(const ClassId& id) {
  std::string_view fqn = id.fqn;
  std::size_t dot = fqn.rfind('.');
  return dot == std::string_view::npos ? fqn : fqn.substr(dot + 1);
}

}  // namespace cochange
