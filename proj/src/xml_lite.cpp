#include "cochange/xml_lite.hpp"

#include <cctype>

#include "cochange/errors.hpp"

namespace cochange::xml {
namespace {

class Cursor {
public:
  Cursor(std::string_view doc, const std::string& source) : doc_(doc), source_(source) {}

  bool eof() const { return pos_ >= doc_.size(); }
  std::size_t pos() const { return pos_; }
  char peek() const { return doc_[pos_]; }
  char take() { return doc_[pos_++]; }

  bool starts_with(std::string_view s) const { return doc_.substr(pos_, s.size()) == s; }

  void skip(std::size_t n) { pos_ += n; }

  void skip_whitespace() {
    while (!eof() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(source_, pos_, message);
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

private:
  std::string_view doc_;
  const std::string& source_;
  std::size_t pos_ = 0;
};

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.' || c == ':';
}

std::string read_name(Cursor& cur) {
  std::string name;
  while (!cur.eof() && is_name_char(cur.peek())) name.push_back(cur.take());
  if (name.empty()) cur.fail("expected a name");
  return name;
}

void append_entity(Cursor& cur, std::string& out) {
  cur.expect('&');
  std::string ref;
  while (!cur.eof() && cur.peek() != ';') ref.push_back(cur.take());
  cur.expect(';');
  if (ref == "lt") out.push_back('<');
  else if (ref == "gt") out.push_back('>');
  else if (ref == "amp") out.push_back('&');
  else if (ref == "quot") out.push_back('"');
  else if (ref == "apos") out.push_back('\'');
  else if (!ref.empty() && ref[0] == '#') {
    int base = 10;
    std::size_t i = 1;
    if (ref.size() > 1 && (ref[1] == 'x' || ref[1] == 'X')) { base = 16; i = 2; }
    unsigned long code = 0;
    if (i >= ref.size()) cur.fail("empty character reference");
    for (; i < ref.size(); ++i) {
      int digit;
      char c = ref[i];
      if (c >= '0' && c <= '9') digit = c - '0';
      else if (base == 16 && c >= 'a' && c <= 'f') digit = c - 'a' + 10;
      else if (base == 16 && c >= 'A' && c <= 'F') digit = c - 'A' + 10;
      else { cur.fail("bad character reference '&" + ref + ";'"); }
      code = code * static_cast<unsigned long>(base) + static_cast<unsigned long>(digit);
    }
    // UTF-8 encode
    if (code < 0x80) out.push_back(static_cast<char>(code));
    else if (code < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (code >> 6)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (code >> 12)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else if (code < 0x110000) {
      out.push_back(static_cast<char>(0xF0 | (code >> 18)));
      out.push_back(static_cast<char>(0x80 | ((code >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((code >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (code & 0x3F)));
    } else {
      cur.fail("character reference out of range");
    }
  } else {
    cur.fail("unknown entity '&" + ref + ";'");
  }
}

std::string read_attribute_value(Cursor& cur) {
  if (cur.eof() || (cur.peek() != '"' && cur.peek() != '\'')) cur.fail("expected quoted attribute value");
  char quote = cur.take();
  std::string value;
  while (!cur.eof() && cur.peek() != quote) {
    if (cur.peek() == '&') append_entity(cur, value);
    else value.push_back(cur.take());
  }
  cur.expect(quote);
  return value;
}

void skip_comment(Cursor& cur) {
  cur.skip(4);  // "<!--"
  while (!cur.eof()) {
    if (cur.starts_with("-->")) { cur.skip(3); return; }
    cur.skip(1);
  }
  cur.fail("unterminated comment");
}

Element read_element(Cursor& cur);

void read_content(Cursor& cur, Element& elem) {
  while (true) {
    if (cur.eof()) cur.fail("unterminated element <" + elem.name + ">");
    if (cur.peek() == '<') {
      if (cur.starts_with("</")) return;
      if (cur.starts_with("<!--")) { skip_comment(cur); continue; }
      if (cur.starts_with("<!") || cur.starts_with("<?")) cur.fail("unsupported markup inside <" + elem.name + ">");
      elem.children.push_back(read_element(cur));
    } else if (cur.peek() == '&') {
      append_entity(cur, elem.text);
    } else {
      elem.text.push_back(cur.take());
    }
  }
}

Element read_element(Cursor& cur) {
  Element elem;
  elem.byte_offset = cur.pos();
  cur.expect('<');
  elem.name = read_name(cur);
  while (true) {
    cur.skip_whitespace();
    if (cur.eof()) cur.fail("unterminated start tag <" + elem.name + ">");
    if (cur.peek() == '>') { cur.skip(1); break; }
    if (cur.starts_with("/>")) { cur.skip(2); return elem; }
    std::string attr_name = read_name(cur);
    cur.skip_whitespace();
    cur.expect('=');
    cur.skip_whitespace();
    elem.attributes.emplace_back(std::move(attr_name), read_attribute_value(cur));
  }
  read_content(cur, elem);
  cur.skip(2);  // "</"
  std::string closing = read_name(cur);
  if (closing != elem.name)
    cur.fail("mismatched end tag </" + closing + "> for <" + elem.name + ">");
  cur.skip_whitespace();
  cur.expect('>');
  return elem;
}

}  // namespace

Element parse_document(std::string_view document, const std::string& source_name) {
  Cursor cur(document, source_name);
  cur.skip_whitespace();
  if (cur.starts_with("<?xml")) {
    while (!cur.eof() && !cur.starts_with("?>")) cur.skip(1);
    if (cur.eof()) cur.fail("unterminated XML declaration");
    cur.skip(2);
  }
  cur.skip_whitespace();
  while (cur.starts_with("<!--")) { skip_comment(cur); cur.skip_whitespace(); }
  if (cur.eof() || cur.peek() != '<') cur.fail("expected a root element");
  Element root = read_element(cur);
  cur.skip_whitespace();
  while (cur.starts_with("<!--")) { skip_comment(cur); cur.skip_whitespace(); }
  if (!cur.eof()) cur.fail("trailing content after the root element");
  return root;
}

}  // namespace cochange::xml
