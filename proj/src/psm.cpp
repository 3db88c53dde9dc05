#include "mvc2gen/psm.hpp"

#include <charconv>
#include <set>
#include <string>

namespace mvc2gen::psm {

namespace {

constexpr int kViewRoot = 0;
constexpr int kActionRoot = 1;
constexpr int kFormRoot = 2;

[[noreturn]] void bad_path(std::string_view path, const std::string& why) {
  throw Error("bad-path", "\"" + std::string(path) + "\": " + why);
}

[[noreturn]] void out_of_range(std::string_view path) {
  throw Error("out-of-range",
              "\"" + std::string(path) + "\" addresses no element");
}

// Parses a non-negative decimal, consuming it from `rest`.
bool take_number(std::string_view& rest, int& value) {
  const auto* begin = rest.data();
  const auto* end = rest.data() + rest.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr == begin || value < 0)
    return false;
  rest.remove_prefix(static_cast<std::size_t>(ptr - begin));
  return true;
}

} // namespace

std::string_view to_string(ElementKind kind) {
  switch (kind) {
  case ElementKind::ViewPackage:
    return "ViewPackage";
  case ElementKind::JspPage:
    return "JspPage";
  case ElementKind::ActionMapping:
    return "ActionMapping";
  case ElementKind::Action:
    return "Action";
  case ElementKind::ActionForward:
    return "ActionForward";
  case ElementKind::FormBean:
    return "FormBean";
  case ElementKind::ActionForm:
    return "ActionForm";
  }
  return "";
}

std::string fragment_path(const StrutsModel& model, const ElementRef& ref) {
  const auto views = static_cast<int>(model.view_package.views.size());
  const auto actions = static_cast<int>(model.action_mapping.actions.size());
  const auto forms = static_cast<int>(model.form_bean.forms.size());

  auto contained = [&]() -> bool {
    switch (ref.kind) {
    case ElementKind::ViewPackage:
    case ElementKind::ActionMapping:
    case ElementKind::FormBean:
      return true;
    case ElementKind::JspPage:
      return ref.index >= 0 && ref.index < views;
    case ElementKind::Action:
      return ref.index >= 0 && ref.index < actions;
    case ElementKind::ActionForward:
      return ref.index >= 0 && ref.index < actions && ref.sub >= 0 &&
             ref.sub < static_cast<int>(
                           model.action_mapping.actions[ref.index].forwards.size());
    case ElementKind::ActionForm:
      return ref.index >= 0 && ref.index < forms;
    }
    return false;
  };
  if (!contained())
    throw Error("not-contained", std::string(to_string(ref.kind)) +
                                     " reference is not part of the model");

  switch (ref.kind) {
  case ElementKind::ViewPackage:
    return "/0";
  case ElementKind::ActionMapping:
    return "/1";
  case ElementKind::FormBean:
    return "/2";
  case ElementKind::JspPage:
    return "/0/@view." + std::to_string(ref.index);
  case ElementKind::Action:
    return "/1/@action." + std::to_string(ref.index);
  case ElementKind::ActionForward:
    return "/1/@action." + std::to_string(ref.index) + "/@forward." +
           std::to_string(ref.sub);
  case ElementKind::ActionForm:
    return "/2/@form." + std::to_string(ref.index);
  }
  throw Error("not-contained", "unknown element kind");
}

ElementRef resolve_fragment(const StrutsModel& model, std::string_view path) {
  std::string_view rest = path;
  if (rest.empty() || rest.front() != '/')
    bad_path(path, "expected a leading '/'");
  rest.remove_prefix(1);

  int root = -1;
  if (!take_number(rest, root))
    bad_path(path, "expected a root index");

  struct Segment {
    std::string_view feature;
    int position;
  };
  std::vector<Segment> segments;
  while (!rest.empty()) {
    if (!rest.starts_with("/@"))
      bad_path(path, "expected \"/@feature.N\" segment");
    rest.remove_prefix(2);
    const auto dot = rest.find('.');
    if (dot == std::string_view::npos || dot == 0)
      bad_path(path, "expected \".\" after the feature name");
    const std::string_view feature = rest.substr(0, dot);
    if (feature != "view" && feature != "action" && feature != "form" &&
        feature != "forward")
      bad_path(path, "unknown feature \"" + std::string(feature) + "\"");
    rest.remove_prefix(dot + 1);
    int position = -1;
    if (!take_number(rest, position))
      bad_path(path, "expected a position after \".\"");
    segments.push_back({feature, position});
  }

  if (root > kFormRoot)
    out_of_range(path);
  if (segments.empty()) {
    switch (root) {
    case kViewRoot:
      return {ElementKind::ViewPackage, -1, -1};
    case kActionRoot:
      return {ElementKind::ActionMapping, -1, -1};
    default:
      return {ElementKind::FormBean, -1, -1};
    }
  }

  const Segment& first = segments.front();
  if (root == kViewRoot && first.feature == "view") {
    if (segments.size() > 1 ||
        first.position >= static_cast<int>(model.view_package.views.size()))
      out_of_range(path);
    return {ElementKind::JspPage, first.position, -1};
  }
  if (root == kActionRoot && first.feature == "action") {
    if (first.position >= static_cast<int>(model.action_mapping.actions.size()))
      out_of_range(path);
    if (segments.size() == 1)
      return {ElementKind::Action, first.position, -1};
    const Segment& second = segments[1];
    const Action& action = model.action_mapping.actions[first.position];
    if (segments.size() > 2 || second.feature != "forward" ||
        second.position >= static_cast<int>(action.forwards.size()))
      out_of_range(path);
    return {ElementKind::ActionForward, first.position, second.position};
  }
  if (root == kFormRoot && first.feature == "form") {
    if (segments.size() > 1 ||
        first.position >= static_cast<int>(model.form_bean.forms.size()))
      out_of_range(path);
    return {ElementKind::ActionForm, first.position, -1};
  }
  out_of_range(path); // well-formed, but the feature lives on another root
}

std::vector<ElementRef> all_elements(const StrutsModel& model) {
  std::vector<ElementRef> out;
  out.push_back({ElementKind::ViewPackage, -1, -1});
  for (int i = 0; i < static_cast<int>(model.view_package.views.size()); ++i)
    out.push_back({ElementKind::JspPage, i, -1});
  out.push_back({ElementKind::ActionMapping, -1, -1});
  for (int i = 0; i < static_cast<int>(model.action_mapping.actions.size()); ++i) {
    out.push_back({ElementKind::Action, i, -1});
    const auto& forwards = model.action_mapping.actions[i].forwards;
    for (int j = 0; j < static_cast<int>(forwards.size()); ++j)
      out.push_back({ElementKind::ActionForward, i, j});
  }
  out.push_back({ElementKind::FormBean, -1, -1});
  for (int i = 0; i < static_cast<int>(model.form_bean.forms.size()); ++i)
    out.push_back({ElementKind::ActionForm, i, -1});
  return out;
}

Violations validate_psm(const StrutsModel& model) {
  Violations out;
  const int view_count = static_cast<int>(model.view_package.views.size());

  std::set<std::string> seen_views;
  for (int i = 0; i < view_count; ++i) {
    const JspPage& page = model.view_package.views[i];
    const std::string path = "/0/@view." + std::to_string(i);
    if (page.name.empty())
      out.push_back({path, "empty-name", "view has no name"});
    else if (!page.name.ends_with(".jsp"))
      out.push_back({path, "invalid-view-name",
                     "\"" + page.name + "\" does not end in \".jsp\""});
    if (!seen_views.insert(page.name).second)
      out.push_back({path, "duplicate-view-name",
                     "view \"" + page.name + "\" appears twice"});
  }

  std::set<std::string> seen_paths;
  const auto& actions = model.action_mapping.actions;
  for (int i = 0; i < static_cast<int>(actions.size()); ++i) {
    const Action& action = actions[i];
    const std::string path = "/1/@action." + std::to_string(i);
    if (action.path.empty() || action.path.front() != '/')
      out.push_back({path, "invalid-action-path",
                     "\"" + action.path + "\" does not start with \"/\""});
    if (!seen_paths.insert(action.path).second)
      out.push_back({path, "duplicate-action-path",
                     "action path \"" + action.path + "\" appears twice"});
    if (action.forwards.size() != 1)
      out.push_back({path, "forward-count",
                     "expected exactly one forward, found " +
                         std::to_string(action.forwards.size())});
    for (int j = 0; j < static_cast<int>(action.forwards.size()); ++j) {
      const ActionForward& fwd = action.forwards[j];
      if (fwd.target_view < 0 || fwd.target_view >= view_count) {
        out.push_back({path + "/@forward." + std::to_string(j),
                       "dangling-forward",
                       "forward \"" + fwd.name +
                           "\" targets no view of the view package"});
      }
    }
  }

  std::set<std::string> seen_forms;
  const auto& forms = model.form_bean.forms;
  for (int i = 0; i < static_cast<int>(forms.size()); ++i) {
    const ActionForm& form = forms[i];
    const std::string path = "/2/@form." + std::to_string(i);
    if (form.name.empty())
      out.push_back({path, "empty-name", "form has no name"});
    else if (!form.name.ends_with("Form"))
      out.push_back({path, "invalid-form-name",
                     "\"" + form.name + "\" does not end in \"Form\""});
    if (!seen_forms.insert(form.name).second)
      out.push_back({path, "duplicate-form-name",
                     "form \"" + form.name + "\" appears twice"});
  }

  return out;
}

} // namespace mvc2gen::psm
