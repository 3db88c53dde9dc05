#include "mvc2gen/io.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <utility>

namespace mvc2gen::io {

namespace {

// ---------------------------------------------------------------------
// PIM XMI reader

[[noreturn]] void schema_error(const std::string& path, const std::string& why) {
  throw Error("schema-violation", path + ": " + why);
}

bool is_tolerated_attribute(std::string_view name) {
  // Namespace declarations and xmi bookkeeping (version etc.) are accepted
  // and ignored.
  return name.starts_with("xmlns:") || name.starts_with("xmi:") ||
         name == "xmlns";
}

void check_namespace(const xml::Element& root, std::string_view prefix,
                     std::string_view uri, const std::string& path) {
  const std::string decl = "xmlns:" + std::string(prefix);
  if (const std::string* value = root.attribute(decl); value && *value != uri)
    schema_error(path, "namespace " + decl + " is \"" + *value +
                           "\", expected \"" + std::string(uri) + "\"");
}

// Attribute type names that are not classifiers become datatypes of the
// package, in order of first appearance. The PIM serializations carry no
// datatype declarations of their own.
void synthesize_datatypes(pim::UmlPackage& pkg) {
  std::set<std::string, std::less<>> known;
  for (const pim::DataType& d : pkg.datatypes)
    known.insert(d.name);
  for (const pim::Classifier& c : pkg.classifiers)
    known.insert(c.name);
  for (const pim::Classifier& c : pkg.classifiers) {
    for (const pim::Property& p : c.properties) {
      if (known.insert(p.type).second)
        pkg.datatypes.push_back(pim::DataType{p.type});
    }
  }
}

} // namespace

pim::UmlModel parse_pim_xmi(const xml::Document& doc) {
  const xml::Element& root = doc.root;
  const std::string root_path = "/" + root.tag;
  if (root.tag != kPimRootTag && root.tag != "UMLPackage")
    schema_error(root_path,
                 "expected <" + std::string(kPimRootTag) + "> as the root");
  check_namespace(root, "uml", kPimNamespace, root_path);

  pim::UmlPackage pkg = pim::make_package();
  for (const auto& [name, value] : root.attributes) {
    if (name == "name")
      pkg.name = value;
    else if (!is_tolerated_attribute(name))
      schema_error(root_path, "unknown attribute \"" + name + "\"");
  }

  std::vector<std::string> parents(0);
  for (std::size_t ci = 0; ci < root.children.size(); ++ci) {
    const xml::Element& cls = root.children[ci];
    const std::string cls_path = root_path + "/class." + std::to_string(ci);
    if (cls.tag != "class")
      schema_error(cls_path, "unexpected element <" + cls.tag + ">");

    pim::Classifier classifier;
    std::string parent;
    for (const auto& [name, value] : cls.attributes) {
      if (name == "name")
        classifier.name = value;
      else if (name == "parent")
        parent = value;
      else
        schema_error(cls_path, "unknown attribute \"" + name + "\"");
    }
    if (classifier.name.empty())
      schema_error(cls_path, "class has no name attribute");

    for (std::size_t mi = 0; mi < cls.children.size(); ++mi) {
      const xml::Element& member = cls.children[mi];
      const std::string member_path =
          cls_path + "/" + member.tag + "." + std::to_string(mi);
      if (member.tag == "attr") {
        const std::string* attr_name = member.attribute("name");
        const std::string* attr_type = member.attribute("type");
        if (!attr_name || !attr_type)
          schema_error(member_path, "attr needs name and type attributes");
        classifier.properties.push_back(pim::Property{*attr_name, *attr_type});
      } else if (member.tag == "op") {
        const std::string* op_name = member.attribute("name");
        if (!op_name)
          schema_error(member_path, "op needs a name attribute");
        pim::Operation op;
        op.name = *op_name;
        if (const std::string* stereo = member.attribute("stereotype")) {
          op.stereotype = pim::stereotype_from_string(*stereo);
          if (!op.stereotype)
            schema_error(member_path, "unknown stereotype \"" + *stereo + "\"");
        }
        classifier.operations.push_back(std::move(op));
      } else {
        schema_error(member_path, "unexpected element <" + member.tag + ">");
      }
    }

    classifier.opposite =
        pim::Property{"", parent.empty() ? std::string(pim::kVoidTypeName)
                                         : parent};
    pkg.classifiers.push_back(std::move(classifier));
  }

  // Parent references resolve by name against the classes of this package.
  for (const pim::Classifier& c : pkg.classifiers) {
    if (c.opposite.type == pim::kVoidTypeName)
      continue;
    const bool known = std::any_of(
        pkg.classifiers.begin(), pkg.classifiers.end(),
        [&](const pim::Classifier& other) { return other.name == c.opposite.type; });
    if (!known)
      throw Error("unresolved-ref", "class \"" + c.name +
                                        "\" names unknown parent \"" +
                                        c.opposite.type + "\"");
  }

  synthesize_datatypes(pkg);
  return pim::UmlModel{std::move(pkg)};
}

pim::UmlModel parse_pim_xmi_text(std::string_view text) {
  return parse_pim_xmi(xml::parse(text));
}

// ---------------------------------------------------------------------
// PIM textual DSL

namespace {

struct Token {
  enum class Kind { Ident, Punct, End };
  Kind kind = Kind::End;
  std::string text;
  int line = 0;
  int col = 0;
};

class DslLexer {
public:
  explicit DslLexer(std::string_view text) : text_(text) {}

  Token next() {
    skip_blanks();
    Token tok;
    tok.line = line_;
    tok.col = col_;
    if (at_end())
      return tok;

    const char c = peek();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      tok.kind = Token::Kind::Ident;
      while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) ||
                           peek() == '_'))
        tok.text.push_back(take());
      return tok;
    }
    if (c == '<' || c == '>') {
      if (text_.substr(pos_).starts_with("<<") ||
          text_.substr(pos_).starts_with(">>")) {
        tok.kind = Token::Kind::Punct;
        tok.text.push_back(take());
        tok.text.push_back(take());
        return tok;
      }
    }
    if (c == '{' || c == '}' || c == ':' || c == ';') {
      tok.kind = Token::Kind::Punct;
      tok.text.push_back(take());
      return tok;
    }
    fail(tok.line, tok.col, std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] static void fail(int line, int col, const std::string& why) {
    throw Error("parse-error",
                std::to_string(line) + ":" + std::to_string(col) + ": " + why);
  }

private:
  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;

  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char take() {
    const char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_blanks() {
    for (;;) {
      while (!at_end() && std::isspace(static_cast<unsigned char>(peek())))
        take();
      if (!at_end() && peek() == '/' && text_.substr(pos_).starts_with("//")) {
        while (!at_end() && peek() != '\n')
          take();
        continue;
      }
      return;
    }
  }
};

class DslParser {
public:
  explicit DslParser(std::string_view text) : lexer_(text) { advance(); }

  pim::UmlModel parse() {
    expect_keyword("package");
    pim::UmlPackage pkg = pim::make_package();
    if (current_.kind == Token::Kind::Ident)
      pkg.name = take_ident();
    expect_punct("{");
    while (!is_punct("}"))
      pkg.classifiers.push_back(parse_class());
    expect_punct("}");
    if (current_.kind != Token::Kind::End)
      fail("expected end of input");

    check_class_names(pkg);
    synthesize_datatypes(pkg);
    return pim::UmlModel{std::move(pkg)};
  }

private:
  DslLexer lexer_;
  Token current_;

  void advance() { current_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& why) {
    DslLexer::fail(current_.line, current_.col, why);
  }

  bool is_punct(std::string_view text) const {
    return current_.kind == Token::Kind::Punct && current_.text == text;
  }

  bool is_keyword(std::string_view text) const {
    return current_.kind == Token::Kind::Ident && current_.text == text;
  }

  void expect_punct(std::string_view text) {
    if (!is_punct(text))
      fail("expected \"" + std::string(text) + "\"");
    advance();
  }

  void expect_keyword(std::string_view text) {
    if (!is_keyword(text))
      fail("expected \"" + std::string(text) + "\"");
    advance();
  }

  std::string take_ident() {
    if (current_.kind != Token::Kind::Ident)
      fail("expected an identifier");
    std::string text = current_.text;
    advance();
    return text;
  }

  void optional_semicolon() {
    if (is_punct(";"))
      advance();
  }

  pim::Classifier parse_class() {
    expect_keyword("class");
    pim::Classifier cls;
    cls.name = take_ident();
    std::string parent(pim::kVoidTypeName);
    if (is_keyword("parent")) {
      advance();
      parent = take_ident();
    }
    cls.opposite = pim::Property{"", std::move(parent)};
    expect_punct("{");
    while (!is_punct("}"))
      parse_member(cls);
    expect_punct("}");
    return cls;
  }

  void parse_member(pim::Classifier& cls) {
    if (is_keyword("attr")) {
      advance();
      pim::Property prop;
      prop.name = take_ident();
      expect_punct(":");
      prop.type = take_ident();
      cls.properties.push_back(std::move(prop));
      optional_semicolon();
      return;
    }
    if (is_keyword("crud")) {
      advance();
      for (const char* name : {"Create", "Delete", "Retrieve", "Update"}) {
        pim::Operation op;
        op.name = name;
        op.stereotype = pim::stereotype_from_string(name);
        cls.operations.push_back(std::move(op));
      }
      optional_semicolon();
      return;
    }
    std::optional<pim::Stereotype> stereotype;
    if (is_punct("<<")) {
      advance();
      std::string word = take_ident();
      std::transform(word.begin(), word.end(), word.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
      });
      if (!word.empty())
        word[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(word[0])));
      stereotype = pim::stereotype_from_string(word);
      if (!stereotype)
        fail("unknown stereotype \"" + word + "\"");
      expect_punct(">>");
    }
    if (!is_keyword("op"))
      fail("expected a class member (attr, op, crud or <<stereotype>> op)");
    advance();
    pim::Operation op;
    op.name = take_ident();
    op.stereotype = stereotype;
    cls.operations.push_back(std::move(op));
    optional_semicolon();
  }

  static void check_class_names(const pim::UmlPackage& pkg) {
    std::set<std::string_view> names;
    for (const pim::Classifier& c : pkg.classifiers)
      if (!names.insert(c.name).second)
        throw Error("duplicate-class",
                    "class \"" + c.name + "\" is declared twice");
    for (const pim::Classifier& c : pkg.classifiers) {
      if (c.opposite.type != pim::kVoidTypeName &&
          !names.contains(c.opposite.type))
        throw Error("unknown-parent", "class \"" + c.name +
                                          "\" names unknown parent \"" +
                                          c.opposite.type + "\"");
    }
  }
};

} // namespace

pim::UmlModel parse_pim_dsl(std::string_view text) {
  return DslParser(text).parse();
}

// ---------------------------------------------------------------------
// PSM XMI

xml::Document write_psm_xmi(const psm::StrutsModel& model) {
  if (const Violations violations = psm::validate_psm(model);
      !violations.empty())
    throw Error("invalid-model", "model has " +
                                     std::to_string(violations.size()) +
                                     " violation(s); first: " +
                                     violations.front().code + " at " +
                                     violations.front().path);

  xml::Document doc;
  doc.root.tag = kPsmRootTag;
  doc.root.set_attribute("xmlns:struts", std::string(kPsmNamespace));

  // Container tags and the per-action attribute order are part of the
  // golden format; optional attributes are simply left out.
  xml::Element& views = doc.root.add_child("ViewPackage");
  if (model.view_package.name)
    views.set_attribute("name", *model.view_package.name);
  for (const psm::JspPage& page : model.view_package.views)
    views.add_child("view").set_attribute("name", page.name);

  xml::Element& mappings = doc.root.add_child("actionmappings");
  for (const psm::Action& action : model.action_mapping.actions) {
    xml::Element& el = mappings.add_child("action");
    el.set_attribute("path", action.path);
    if (action.name)
      el.set_attribute("name", *action.name);
    el.set_attribute("type", action.type);
    if (action.input)
      el.set_attribute("input", *action.input);
    for (const psm::ActionForward& fwd : action.forwards) {
      xml::Element& fwd_el = el.add_child("forward");
      fwd_el.set_attribute("name", fwd.name);
      fwd_el.set_attribute(
          "path", psm::fragment_path(
                      model, {psm::ElementKind::JspPage, fwd.target_view, -1}));
    }
  }

  xml::Element& beans = doc.root.add_child("formbeans");
  for (const psm::ActionForm& form : model.form_bean.forms)
    beans.add_child("form").set_attribute("name", form.name);

  return doc;
}

std::string write_psm_xmi_text(const psm::StrutsModel& model) {
  return xml::serialize(write_psm_xmi(model));
}

psm::StrutsModel parse_psm_xmi(const xml::Document& doc,
                               const PsmParseOptions& options) {
  const xml::Element& root = doc.root;
  const std::string root_path = "/" + root.tag;
  if (root.tag != kPsmRootTag && root.tag != "StrutsModel")
    schema_error(root_path,
                 "expected <" + std::string(kPsmRootTag) + "> as the root");
  check_namespace(root, "struts", kPsmNamespace, root_path);
  for (const auto& [name, value] : root.attributes)
    if (!is_tolerated_attribute(name))
      schema_error(root_path, "unknown attribute \"" + name + "\"");

  if (root.children.size() != 3 || root.children[0].tag != "ViewPackage" ||
      root.children[1].tag != "actionmappings" ||
      root.children[2].tag != "formbeans")
    schema_error(root_path, "expected the ViewPackage, actionmappings, "
                            "formbeans roots in order");

  psm::StrutsModel model;

  const xml::Element& views = root.children[0];
  for (const auto& [name, value] : views.attributes) {
    if (name == "name")
      model.view_package.name = value;
    else
      schema_error(root_path + "/ViewPackage", "unknown attribute \"" + name + "\"");
  }
  for (std::size_t i = 0; i < views.children.size(); ++i) {
    const xml::Element& view = views.children[i];
    const std::string path = "/0/@view." + std::to_string(i);
    if (view.tag != "view")
      schema_error(path, "unexpected element <" + view.tag + ">");
    const std::string* name = view.attribute("name");
    if (!name)
      schema_error(path, "view needs a name attribute");
    model.view_package.views.push_back(psm::JspPage{*name});
  }

  const xml::Element& mappings = root.children[1];
  for (std::size_t i = 0; i < mappings.children.size(); ++i) {
    const xml::Element& el = mappings.children[i];
    const std::string path = "/1/@action." + std::to_string(i);
    if (el.tag != "action")
      schema_error(path, "unexpected element <" + el.tag + ">");
    psm::Action action;
    for (const auto& [name, value] : el.attributes) {
      if (name == "path")
        action.path = value;
      else if (name == "name")
        action.name = value;
      else if (name == "type")
        action.type = value;
      else if (name == "input")
        action.input = value;
      else
        schema_error(path, "unknown attribute \"" + name + "\"");
    }
    for (std::size_t j = 0; j < el.children.size(); ++j) {
      const xml::Element& fwd_el = el.children[j];
      const std::string fwd_path = path + "/@forward." + std::to_string(j);
      if (fwd_el.tag != "forward")
        schema_error(fwd_path, "unexpected element <" + fwd_el.tag + ">");
      psm::ActionForward forward;
      if (const std::string* name = fwd_el.attribute("name"))
        forward.name = *name;
      const std::string* target = fwd_el.attribute("path");
      if (!target)
        schema_error(fwd_path, "forward needs a path attribute");
      try {
        const psm::ElementRef ref = psm::resolve_fragment(model, *target);
        if (ref.kind != psm::ElementKind::JspPage)
          throw Error("bad-path",
                      "\"" + *target + "\" does not reference a view");
        forward.target_view = ref.index;
      } catch (const Error& e) {
        if (options.strict_forwards)
          throw Error("bad-path", fwd_path + ": " + e.what());
        forward.target_view = -1; // left dangling for validate_psm
      }
      action.forwards.push_back(forward);
    }
    model.action_mapping.actions.push_back(std::move(action));
  }

  const xml::Element& beans = root.children[2];
  for (std::size_t i = 0; i < beans.children.size(); ++i) {
    const xml::Element& form = beans.children[i];
    const std::string path = "/2/@form." + std::to_string(i);
    if (form.tag != "form")
      schema_error(path, "unexpected element <" + form.tag + ">");
    const std::string* name = form.attribute("name");
    if (!name)
      schema_error(path, "form needs a name attribute");
    model.form_bean.forms.push_back(psm::ActionForm{*name});
  }

  return model;
}

psm::StrutsModel parse_psm_xmi_text(std::string_view text,
                                    const PsmParseOptions& options) {
  return parse_psm_xmi(xml::parse(text), options);
}

// ---------------------------------------------------------------------
// Structural diff

namespace {

std::string quoted(const std::optional<std::string>& value) {
  return value ? "\"" + *value + "\"" : "(absent)";
}

std::string render_attr(std::string_view name,
                        const std::optional<std::string>& value) {
  return std::string(name) + "=" + quoted(value);
}

// Forwards compare by target position: the view at the same index of the
// other model is the corresponding one, and its own differences are
// reported against the view list, not against every action pointing there.
struct NormalizedForward {
  std::string name;
  int target_view = -1;

  auto operator<=>(const NormalizedForward&) const = default;

  std::string render() const {
    return name + "->@view." + std::to_string(target_view);
  }
};

struct NormalizedAction {
  std::string path;
  std::optional<std::string> name;
  std::string type;
  std::optional<std::string> input;
  std::vector<NormalizedForward> forwards;

  auto operator<=>(const NormalizedAction&) const = default;

  std::string render() const {
    std::string out = render_attr("path", path) + " " +
                      render_attr("name", name) + " " +
                      render_attr("type", type) + " " +
                      render_attr("input", input);
    for (const NormalizedForward& fwd : forwards)
      out += " forward " + fwd.render();
    return out;
  }
};

NormalizedAction normalize(const psm::Action& action) {
  NormalizedAction out{action.path, action.name, action.type, action.input, {}};
  for (const psm::ActionForward& fwd : action.forwards)
    out.forwards.push_back(NormalizedForward{fwd.name, fwd.target_view});
  return out;
}

// Positional comparison of one container. When both sides hold the same
// elements in a different order, the report says so instead of listing a
// mismatch per attribute.
template <typename T>
void diff_list(ModelDiff& out, const std::vector<T>& a, const std::vector<T>& b,
               std::string_view fragment_prefix,
               const std::function<std::string(const T&)>& render,
               const std::function<void(ModelDiff&, const std::string&,
                                        const T&, const T&)>& attr_diff) {
  auto fragment = [&](std::size_t i) {
    return std::string(fragment_prefix) + std::to_string(i);
  };

  if (a.size() == b.size() && a != b) {
    std::vector<T> sorted_a = a;
    std::vector<T> sorted_b = b;
    auto by_render = [&](const T& x, const T& y) { return render(x) < render(y); };
    std::sort(sorted_a.begin(), sorted_a.end(), by_render);
    std::sort(sorted_b.begin(), sorted_b.end(), by_render);
    if (sorted_a == sorted_b) {
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!(a[i] == b[i]))
          out.push_back({fragment(i), DiffKind::Order, render(a[i]), render(b[i])});
      return;
    }
  }

  const std::size_t common = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < common; ++i)
    if (!(a[i] == b[i]))
      attr_diff(out, fragment(i), a[i], b[i]);
  for (std::size_t i = common; i < a.size(); ++i)
    out.push_back({fragment(i), DiffKind::Missing, render(a[i]), ""});
  for (std::size_t i = common; i < b.size(); ++i)
    out.push_back({fragment(i), DiffKind::Extra, "", render(b[i])});
}

} // namespace

std::string_view to_string(DiffKind kind) {
  switch (kind) {
  case DiffKind::Missing:
    return "missing";
  case DiffKind::Extra:
    return "extra";
  case DiffKind::AttrMismatch:
    return "attr-mismatch";
  case DiffKind::Order:
    return "order";
  }
  return "";
}

ModelDiff diff_psm(const psm::StrutsModel& a, const psm::StrutsModel& b) {
  ModelDiff out;

  if (a.view_package.name != b.view_package.name)
    out.push_back({"/0", DiffKind::AttrMismatch,
                   render_attr("name", a.view_package.name),
                   render_attr("name", b.view_package.name)});

  diff_list<psm::JspPage>(
      out, a.view_package.views, b.view_package.views, "/0/@view.",
      [](const psm::JspPage& page) { return page.name; },
      [](ModelDiff& diffs, const std::string& path, const psm::JspPage& x,
         const psm::JspPage& y) {
        diffs.push_back({path, DiffKind::AttrMismatch, render_attr("name", x.name),
                         render_attr("name", y.name)});
      });

  std::vector<NormalizedAction> actions_a;
  std::vector<NormalizedAction> actions_b;
  for (const psm::Action& action : a.action_mapping.actions)
    actions_a.push_back(normalize(action));
  for (const psm::Action& action : b.action_mapping.actions)
    actions_b.push_back(normalize(action));
  diff_list<NormalizedAction>(
      out, actions_a, actions_b, "/1/@action.",
      [](const NormalizedAction& action) { return action.render(); },
      [](ModelDiff& diffs, const std::string& path, const NormalizedAction& x,
         const NormalizedAction& y) {
        if (x.path != y.path)
          diffs.push_back({path, DiffKind::AttrMismatch,
                           render_attr("path", x.path), render_attr("path", y.path)});
        if (x.name != y.name)
          diffs.push_back({path, DiffKind::AttrMismatch,
                           render_attr("name", x.name), render_attr("name", y.name)});
        if (x.type != y.type)
          diffs.push_back({path, DiffKind::AttrMismatch,
                           render_attr("type", x.type), render_attr("type", y.type)});
        if (x.input != y.input)
          diffs.push_back({path, DiffKind::AttrMismatch,
                           render_attr("input", x.input),
                           render_attr("input", y.input)});
        if (x.forwards != y.forwards) {
          const std::size_t count = std::max(x.forwards.size(), y.forwards.size());
          for (std::size_t j = 0; j < count; ++j) {
            const bool in_x = j < x.forwards.size();
            const bool in_y = j < y.forwards.size();
            if (in_x && in_y && x.forwards[j] == y.forwards[j])
              continue;
            diffs.push_back({path + "/@forward." + std::to_string(j),
                             in_x && in_y ? DiffKind::AttrMismatch
                             : in_x       ? DiffKind::Missing
                                          : DiffKind::Extra,
                             in_x ? x.forwards[j].render() : "",
                             in_y ? y.forwards[j].render() : ""});
          }
        }
      });

  diff_list<psm::ActionForm>(
      out, a.form_bean.forms, b.form_bean.forms, "/2/@form.",
      [](const psm::ActionForm& form) { return form.name; },
      [](ModelDiff& diffs, const std::string& path, const psm::ActionForm& x,
         const psm::ActionForm& y) {
        diffs.push_back({path, DiffKind::AttrMismatch, render_attr("name", x.name),
                         render_attr("name", y.name)});
      });

  return out;
}

} // namespace mvc2gen::io
