#include "mvc2gen/xml.hpp"

#include <cctype>

#include "mvc2gen/diagnostics.hpp"

namespace mvc2gen::xml {

namespace {

bool is_name_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
         c == '.' || c == ':';
}

class Reader {
public:
  explicit Reader(std::string_view text) : text_(text) {}

  Element parse_document() {
    skip_prolog();
    Element root = parse_element();
    skip_misc();
    if (!at_end())
      fail("content after the document element");
    return root;
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  bool starts_with(std::string_view s) const {
    return text_.substr(pos_).starts_with(s);
  }

  [[noreturn]] void fail(const std::string& why) const {
    std::size_t line = 1, col = 1;
    for (std::size_t i = 0; i < pos_ && i < text_.size(); ++i) {
      if (text_[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error("xml-malformed", std::to_string(line) + ":" +
                                     std::to_string(col) + ": " + why);
  }

  void skip_whitespace() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
      ++pos_;
  }

  void skip_comment() {
    pos_ += 4; // "<!--"
    const auto end = text_.find("-->", pos_);
    if (end == std::string_view::npos)
      fail("unterminated comment");
    pos_ = end + 3;
  }

  // Whitespace, comments and (before the root) the XML declaration.
  void skip_misc() {
    for (;;) {
      skip_whitespace();
      if (starts_with("<!--"))
        skip_comment();
      else
        return;
    }
  }

  void skip_prolog() {
    skip_whitespace();
    if (starts_with("<?xml")) {
      const auto end = text_.find("?>", pos_);
      if (end == std::string_view::npos)
        fail("unterminated XML declaration");
      pos_ = end + 2;
    }
    skip_misc();
  }

  std::string parse_name() {
    if (at_end() || !is_name_start(peek()))
      fail("expected a name");
    const std::size_t start = pos_;
    while (!at_end() && is_name_char(peek()))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string decode_entities(std::string_view raw) {
    std::string out;
    out.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
      if (raw[i] != '&') {
        out.push_back(raw[i]);
        continue;
      }
      const auto semi = raw.find(';', i);
      if (semi == std::string_view::npos)
        fail("unterminated entity reference");
      const std::string_view entity = raw.substr(i + 1, semi - i - 1);
      if (entity == "amp")
        out.push_back('&');
      else if (entity == "lt")
        out.push_back('<');
      else if (entity == "gt")
        out.push_back('>');
      else if (entity == "quot")
        out.push_back('"');
      else if (entity == "apos")
        out.push_back('\'');
      else
        fail("unknown entity \"&" + std::string(entity) + ";\"");
      i = semi;
    }
    return out;
  }

  std::pair<std::string, std::string> parse_attribute() {
    std::string name = parse_name();
    skip_whitespace();
    if (at_end() || peek() != '=')
      fail("expected '=' after attribute name");
    ++pos_;
    skip_whitespace();
    if (at_end() || (peek() != '"' && peek() != '\''))
      fail("expected a quoted attribute value");
    const char quote = peek();
    ++pos_;
    const std::size_t start = pos_;
    while (!at_end() && peek() != quote && peek() != '<')
      ++pos_;
    if (at_end() || peek() != quote)
      fail("unterminated attribute value");
    std::string value = decode_entities(text_.substr(start, pos_ - start));
    ++pos_;
    return {std::move(name), std::move(value)};
  }

  Element parse_element() {
    if (at_end() || peek() != '<')
      fail("expected an element");
    ++pos_;
    Element element;
    element.tag = parse_name();

    for (;;) {
      skip_whitespace();
      if (at_end())
        fail("unterminated start tag");
      if (peek() == '/') {
        ++pos_;
        if (at_end() || peek() != '>')
          fail("expected '>' after '/'");
        ++pos_;
        return element; // self-closing
      }
      if (peek() == '>') {
        ++pos_;
        break;
      }
      auto [name, value] = parse_attribute();
      if (element.attribute(name))
        fail("duplicate attribute \"" + name + "\"");
      element.attributes.emplace_back(std::move(name), std::move(value));
    }

    // Children until the matching end tag. Only whitespace text is allowed.
    for (;;) {
      const std::size_t content_start = pos_;
      while (!at_end() && peek() != '<') {
        if (!std::isspace(static_cast<unsigned char>(peek()))) {
          pos_ = content_start;
          fail("unexpected text content");
        }
        ++pos_;
      }
      if (at_end())
        fail("missing end tag for <" + element.tag + ">");
      if (starts_with("<!--")) {
        skip_comment();
        continue;
      }
      if (starts_with("</")) {
        pos_ += 2;
        std::string closing = parse_name();
        if (closing != element.tag)
          fail("end tag </" + closing + "> does not match <" + element.tag + ">");
        skip_whitespace();
        if (at_end() || peek() != '>')
          fail("expected '>' in end tag");
        ++pos_;
        return element;
      }
      element.children.push_back(parse_element());
    }
  }
};

void escape_into(std::string& out, std::string_view value) {
  for (char c : value) {
    switch (c) {
    case '&':
      out += "&amp;";
      break;
    case '<':
      out += "&lt;";
      break;
    case '>':
      out += "&gt;";
      break;
    case '"':
      out += "&quot;";
      break;
    default:
      out.push_back(c);
    }
  }
}

void serialize_element(std::string& out, const Element& element, int depth) {
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out.push_back('<');
  out += element.tag;
  for (const auto& [name, value] : element.attributes) {
    out.push_back(' ');
    out += name;
    out += "=\"";
    escape_into(out, value);
    out.push_back('"');
  }
  if (element.children.empty()) {
    out += "/>\n";
    return;
  }
  out += ">\n";
  for (const Element& child : element.children)
    serialize_element(out, child, depth + 1);
  out.append(static_cast<std::size_t>(depth) * 2, ' ');
  out += "</";
  out += element.tag;
  out += ">\n";
}

} // namespace

const std::string* Element::attribute(std::string_view name) const {
  for (const auto& [attr_name, value] : attributes)
    if (attr_name == name)
      return &value;
  return nullptr;
}

Element& Element::add_child(std::string child_tag) {
  children.push_back(Element{std::move(child_tag), {}, {}});
  return children.back();
}

Element& Element::set_attribute(std::string name, std::string value) {
  attributes.emplace_back(std::move(name), std::move(value));
  return *this;
}

Document parse(std::string_view text) {
  Reader reader(text);
  return Document{reader.parse_document()};
}

std::string serialize(const Document& doc) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  serialize_element(out, doc.root, 0);
  return out;
}

} // namespace mvc2gen::xml
