#include "mvc2gen/codegen.hpp"

#include <cctype>

#include "mvc2gen/diagnostics.hpp"

namespace mvc2gen::codegen {

namespace {

bool is_identifier(std::string_view word) {
  if (word.empty() || !(std::isalpha(static_cast<unsigned char>(word[0])) ||
                        word[0] == '_'))
    return false;
  for (char c : word)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_')
      return false;
  return true;
}

void check_package(std::string_view pkg) {
  std::size_t start = 0;
  while (true) {
    const std::size_t dot = pkg.find('.', start);
    const std::string_view segment =
        pkg.substr(start, dot == std::string_view::npos ? dot : dot - start);
    if (!is_identifier(segment))
      throw Error("invalid-package",
                  "\"" + std::string(pkg) + "\" is not a dot-separated identifier");
    if (dot == std::string_view::npos)
      return;
    start = dot + 1;
  }
}

std::string package_dir(std::string_view pkg) {
  std::string dir = "src/";
  for (char c : pkg)
    dir.push_back(c == '.' ? '/' : c);
  return dir + "/";
}

void require_valid(const psm::StrutsModel& model) {
  if (const Violations violations = psm::validate_psm(model);
      !violations.empty())
    throw Error("invalid-model", "model has " +
                                     std::to_string(violations.size()) +
                                     " violation(s); first: " +
                                     violations.front().code + " at " +
                                     violations.front().path);
}

std::string view_url(const psm::StrutsModel& model, int target_view) {
  return "/" + model.view_package.views.at(static_cast<std::size_t>(target_view))
                   .name;
}

std::string jsp_stub(const psm::JspPage& page) {
  return "<%-- Generated by mvc2gen for view " + page.name + ". --%>\n"
         "<%-- TODO: build the page content. --%>\n";
}

std::string action_stub(const psm::Action& action, std::string_view pkg) {
  std::string out;
  out += "// Generated by mvc2gen for action " + action.path + ".\n";
  out += "package " + std::string(pkg) + ";\n\n";
  out += "public class " + action.type + " {\n";
  out += "    // TODO: implement the controller logic behind " + action.path +
         ".\n";
  out += "}\n";
  return out;
}

std::string form_stub(const psm::ActionForm& form, std::string_view pkg) {
  std::string out;
  out += "// Generated by mvc2gen for form bean " + form.name + ".\n";
  out += "package " + std::string(pkg) + ";\n\n";
  out += "public class " + form.name + " {\n";
  out += "    // TODO: declare the form properties and their accessors.\n";
  out += "}\n";
  return out;
}

} // namespace

xml::Document emit_struts_config(const psm::StrutsModel& model,
                                 std::string_view pkg) {
  require_valid(model);
  check_package(pkg);

  xml::Document doc;
  doc.root.tag = "struts-config";

  xml::Element& beans = doc.root.add_child("form-beans");
  for (const psm::ActionForm& form : model.form_bean.forms) {
    xml::Element& bean = beans.add_child("form-bean");
    bean.set_attribute("name", form.name);
    // The model carries names only; the implementing class is a naming
    // convention over the configured package.
    bean.set_attribute("type", std::string(pkg) + "." + form.name + "Bean");
  }

  xml::Element& mappings = doc.root.add_child("action-mappings");
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
      // A deployment descriptor needs page URLs, not model fragments.
      fwd_el.set_attribute("path", view_url(model, fwd.target_view));
    }
  }

  return doc;
}

GeneratedFileSet emit_stub_files(const psm::StrutsModel& model,
                                 std::string_view pkg) {
  require_valid(model);
  check_package(pkg);
  const std::string src_dir = package_dir(pkg);

  GeneratedFileSet files;
  for (const psm::JspPage& page : model.view_package.views)
    files["web/" + page.name] = jsp_stub(page);
  for (const psm::Action& action : model.action_mapping.actions)
    files[src_dir + action.type + ".java"] = action_stub(action, pkg);
  for (const psm::ActionForm& form : model.form_bean.forms)
    files[src_dir + form.name + ".java"] = form_stub(form, pkg);
  return files;
}

} // namespace mvc2gen::codegen
