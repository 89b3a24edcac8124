#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cochange::xml {

// Minimal XML reader covering the documents this tool consumes: svn verbose
// logs and issue exports. Supports elements, attributes, character data, the
// five predefined entities plus numeric references, comments, and the XML
// declaration. No namespaces, DTDs, or CDATA. Throws ParseError with the
// source name and byte offset on malformed input.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;
  std::string text;          // concatenated character data of this element
  std::size_t byte_offset = 0;  // offset of the opening '<'

  const std::string* attribute(std::string_view attr_name) const {
    for (const auto& [k, v] : attributes) {
      if (k == attr_name) return &v;
    }
    return nullptr;
  }
};

// Parses a whole document and returns its root element.
Element parse_document(std::string_view document, const std::string& source_name);

}  // namespace cochange::xml
