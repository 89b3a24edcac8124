#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cochange {

// Bad command line or configuration values. Maps to exit code 2.
class UsageError : public std::runtime_error {
public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input document (VCS log, issue XML, config file). Maps to exit code 3.
class ParseError : public std::runtime_error {
public:
  ParseError(const std::string& source, std::size_t byte_offset, const std::string& what)
      : std::runtime_error(source + ": byte " + std::to_string(byte_offset) + ": " + what),
        source_(source),
        byte_offset_(byte_offset) {}

  explicit ParseError(const std::string& what) : std::runtime_error(what) {}

  const std::string& source() const { return source_; }
  std::size_t byte_offset() const { return byte_offset_; }

private:
  std::string source_;
  std::size_t byte_offset_ = 0;
};

// Inputs that are individually well formed but mutually inconsistent
// (e.g. a clustered class missing from the package structure).
class ConsistencyError : public std::runtime_error {
public:
  explicit ConsistencyError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cochange
