#ifndef MVC2GEN_PSM_HPP
#define MVC2GEN_PSM_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvc2gen/diagnostics.hpp"

// The target model: a Struts-style controller configuration with three
// fixed roots -- the view package (index 0), the action mappings (index 1)
// and the form beans (index 2). Cross-references between elements are held
// as positions and rendered as "/rootIndex/@feature.position" fragment
// paths only at serialization time.

namespace mvc2gen::psm {

struct JspPage {
  std::string name; // ends in ".jsp"

  bool operator==(const JspPage&) const = default;
};

struct ViewPackage {
  std::optional<std::string> name;
  std::vector<JspPage> views;

  bool operator==(const ViewPackage&) const = default;
};

struct ActionForward {
  std::string name;
  int target_view = -1; // position in ViewPackage::views

  bool operator==(const ActionForward&) const = default;
};

struct Action {
  std::string path;                 // starts with "/"
  std::optional<std::string> name;  // form-bean name, absent on root Retrieve
  std::string type;                 // controller class name
  std::optional<std::string> input; // "/....jsp", absent on root classes
  std::vector<ActionForward> forwards; // exactly one per action

  bool operator==(const Action&) const = default;
};

struct ActionMapping {
  std::vector<Action> actions;

  bool operator==(const ActionMapping&) const = default;
};

struct ActionForm {
  std::string name; // ends in "Form"

  bool operator==(const ActionForm&) const = default;
};

struct FormBean {
  std::vector<ActionForm> forms;

  bool operator==(const FormBean&) const = default;
};

struct StrutsModel {
  ViewPackage view_package; // root 0
  ActionMapping action_mapping; // root 1
  FormBean form_bean; // root 2

  bool operator==(const StrutsModel&) const = default;
};

enum class ElementKind {
  ViewPackage,
  JspPage,
  ActionMapping,
  Action,
  ActionForward,
  FormBean,
  ActionForm,
};

std::string_view to_string(ElementKind kind);

// Position of an element inside a StrutsModel. `index` addresses the
// element within its root container; `sub` is only used for forwards
// (index = action position, sub = forward position).
struct ElementRef {
  ElementKind kind = ElementKind::ViewPackage;
  int index = -1;
  int sub = -1;

  auto operator<=>(const ElementRef&) const = default;
};

// Serialized cross-reference form, e.g. "/0/@view.3" for the fourth view
// or "/1/@action.2/@forward.0". Roots themselves are "/0", "/1", "/2".
// Throws `not-contained` when the ref does not address an element of the
// model.
std::string fragment_path(const StrutsModel& model, const ElementRef& ref);

// Inverse of fragment_path. Throws `bad-path` on malformed strings and
// `out-of-range` when the syntax is fine but no such element exists.
ElementRef resolve_fragment(const StrutsModel& model, std::string_view path);

// Every element of the model, containers first, in model order.
std::vector<ElementRef> all_elements(const StrutsModel& model);

// Checks invariant conformance: name/path uniqueness per container, the
// ".jsp"/"Form" naming shapes, one forward per action, and that every
// forward target resolves to a view of root 0.
Violations validate_psm(const StrutsModel& model);

} // namespace mvc2gen::psm

#endif
