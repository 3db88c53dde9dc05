#ifndef MVC2GEN_XML_HPP
#define MVC2GEN_XML_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

// Minimal XML tree for the model interchange files. Covers exactly what
// the formats need: elements, ordered attributes, nesting, comments and
// the five predefined entities. No text content, no CDATA, no DTDs.

namespace mvc2gen::xml {

struct Element {
  std::string tag;
  std::vector<std::pair<std::string, std::string>> attributes;
  std::vector<Element> children;

  // Attribute value by name, or nullptr.
  const std::string* attribute(std::string_view name) const;

  Element& add_child(std::string child_tag);
  Element& set_attribute(std::string name, std::string value);

  bool operator==(const Element&) const = default;
};

struct Document {
  Element root;

  bool operator==(const Document&) const = default;
};

// Throws `xml-malformed` with line:column on any syntax problem,
// including non-whitespace text content.
Document parse(std::string_view text);

// Deterministic renderer: XML declaration, two-space indent, one element
// per line, attributes in stored order, self-closing leaf tags.
std::string serialize(const Document& doc);

} // namespace mvc2gen::xml

#endif
