#include "mvc2gen/rules.hpp"

#include <utility>
#include <vector>

#include "mvc2gen/diagnostics.hpp"

namespace mvc2gen::rules {

namespace {

using engine::BindingValue;
using engine::MatchedRule;
using engine::SourceKind;
using engine::SourceRef;
using engine::TargetTemplate;
using engine::TraceStore;

const pim::Classifier& owner(const pim::UmlModel& model, const SourceRef& src) {
  return model.package.classifiers.at(static_cast<std::size_t>(src.class_index));
}

const pim::Operation& operation(const pim::UmlModel& model,
                                const SourceRef& src) {
  return owner(model, src).operations.at(
      static_cast<std::size_t>(src.member_index));
}

// Collects resolve_temp over all operations in method-definition order;
// unmatched (suppressed) operations contribute undefined members, which
// the assignment drops.
BindingValue collect_over_method_defs(const pim::UmlModel& model,
                                      const TraceStore& trace,
                                      std::string_view template_name) {
  std::vector<BindingValue> items;
  for (pim::OpRef op : pim::all_method_defs(model))
    items.push_back(engine::resolve_temp_value(
        trace, engine::operation_ref(op), template_name));
  return BindingValue::sequence(std::move(items));
}

} // namespace

CrudKind crud_kind(const pim::Operation& op) {
  if (op.name == "Create")
    return {CrudVerb::Create, op.name};
  if (op.name == "Retrieve")
    return {CrudVerb::Retrieve, op.name};
  if (op.name == "Update")
    return {CrudVerb::Update, op.name};
  if (op.name == "Delete")
    return {CrudVerb::Delete, op.name};
  return {CrudVerb::Other, op.name};
}

std::optional<std::string> jsp_name(const pim::Classifier& owner,
                                    const pim::Operation& op) {
  if (crud_kind(op).verb == CrudVerb::Delete)
    return std::nullopt;
  return op.name + owner.name + ".jsp";
}

std::string action_path(const pim::Classifier& owner, const pim::Operation& op) {
  return "/" + op.name + owner.name;
}

std::string action_type(const pim::Classifier& owner, const pim::Operation& op) {
  return op.name + owner.name + "Action";
}

std::optional<std::string> action_form_name(const pim::Classifier& owner,
                                            const pim::Operation& op) {
  if (pim::is_root(owner) && crud_kind(op).verb == CrudVerb::Retrieve)
    return std::nullopt;
  return op.name + owner.name + "Form";
}

std::optional<std::string> action_input(const pim::Classifier& owner,
                                        const pim::Operation& op) {
  if (pim::is_root(owner))
    return std::nullopt;
  const std::string parent(pim::opposite_type_name(owner));
  if (crud_kind(op).verb == CrudVerb::Delete)
    return "/Retrieve" + parent + ".jsp";
  return "/" + op.name + parent + ".jsp";
}

std::optional<std::string> end_form_name(const pim::Classifier& owner,
                                         const pim::Operation& op) {
  const CrudVerb verb = crud_kind(op).verb;
  if (verb != CrudVerb::Create && verb != CrudVerb::Update)
    return std::nullopt;
  return op.name + owner.name + "EndForm";
}

pim::OpRef forward_target(const pim::UmlModel& model, pim::OpRef op) {
  if (crud_kind(pim::operation_at(model, op)).verb != CrudVerb::Delete)
    return op;
  const pim::Classifier& cls = pim::owner_of(model, op);
  for (int i = 0; i < static_cast<int>(cls.operations.size()); ++i)
    if (cls.operations[i].name == "Retrieve")
      return pim::OpRef{op.class_index, i};
  throw Error("missing-retrieve", "Delete on \"" + cls.name +
                                      "\" has no sibling Retrieve to forward to");
}

engine::RuleModule build_crud_module() {
  engine::RuleModule module;

  // package -> view package containing every page, in method order.
  MatchedRule package_to_views;
  package_to_views.name = "package-to-view-package";
  package_to_views.source_kind = SourceKind::Package;
  TargetTemplate vout;
  vout.local_name = "vout";
  vout.target_kind = psm::ElementKind::ViewPackage;
  vout.bindings.emplace_back(
      "name", [](const pim::UmlModel& m, const SourceRef&, const TraceStore&) {
        // An unnamed package yields an unnamed view package.
        if (m.package.name.empty())
          return BindingValue::undefined();
        return BindingValue::text(m.package.name);
      });
  vout.bindings.emplace_back(
      "view", [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return collect_over_method_defs(m, t, "jsp");
      });
  package_to_views.targets.push_back(std::move(vout));
  module.add(std::move(package_to_views));

  // operation -> page. Delete produces no page, so the template is
  // suppressed when the name comes out undefined.
  MatchedRule op_to_page;
  op_to_page.name = "operation-to-jsp-page";
  op_to_page.source_kind = SourceKind::Operation;
  TargetTemplate jsp;
  jsp.local_name = "jsp";
  jsp.target_kind = psm::ElementKind::JspPage;
  jsp.suppress_if_unnamed = true;
  jsp.bindings.emplace_back(
      "name", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(jsp_name(owner(m, src), operation(m, src)));
      });
  op_to_page.targets.push_back(std::move(jsp));
  module.add(std::move(op_to_page));

  // package -> action mapping containing every action.
  MatchedRule package_to_mapping;
  package_to_mapping.name = "package-to-action-mapping";
  package_to_mapping.source_kind = SourceKind::Package;
  TargetTemplate act;
  act.local_name = "act";
  act.target_kind = psm::ElementKind::ActionMapping;
  act.bindings.emplace_back(
      "action",
      [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return collect_over_method_defs(m, t, "frm");
      });
  package_to_mapping.targets.push_back(std::move(act));
  module.add(std::move(package_to_mapping));

  // operation -> action plus its Success forward. Every operation becomes
  // an action; the action is also the operation's default target.
  MatchedRule op_to_action;
  op_to_action.name = "operation-to-action";
  op_to_action.source_kind = SourceKind::Operation;
  op_to_action.provides_default = true;
  TargetTemplate frm;
  frm.local_name = "frm";
  frm.target_kind = psm::ElementKind::Action;
  frm.bindings.emplace_back(
      "path", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(action_path(owner(m, src), operation(m, src)));
      });
  frm.bindings.emplace_back(
      "name", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(
            action_form_name(owner(m, src), operation(m, src)));
      });
  frm.bindings.emplace_back(
      "type", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(action_type(owner(m, src), operation(m, src)));
      });
  frm.bindings.emplace_back(
      "input", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(
            action_input(owner(m, src), operation(m, src)));
      });
  frm.bindings.emplace_back(
      "forward",
      [](const pim::UmlModel&, const SourceRef& src, const TraceStore& t) {
        return engine::resolve_temp_value(t, src, "fwd");
      });
  op_to_action.targets.push_back(std::move(frm));
  TargetTemplate fwd;
  fwd.local_name = "fwd";
  fwd.target_kind = psm::ElementKind::ActionForward;
  fwd.bindings.emplace_back(
      "name", [](const pim::UmlModel&, const SourceRef&, const TraceStore&) {
        return BindingValue::text("Success");
      });
  fwd.bindings.emplace_back(
      "target",
      [](const pim::UmlModel& m, const SourceRef& src, const TraceStore& t) {
        const pim::OpRef landing =
            forward_target(m, pim::OpRef{src.class_index, src.member_index});
        return engine::resolve_temp_value(t, engine::operation_ref(landing),
                                          "jsp");
      });
  op_to_action.targets.push_back(std::move(fwd));
  module.add(std::move(op_to_action));

  // package -> form bean: all end forms first, then the plain forms.
  MatchedRule package_to_forms;
  package_to_forms.name = "package-to-form-bean";
  package_to_forms.source_kind = SourceKind::Package;
  TargetTemplate fmb;
  fmb.local_name = "fmb";
  fmb.target_kind = psm::ElementKind::FormBean;
  fmb.bindings.emplace_back(
      "form", [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return BindingValue::sequence({
            collect_over_method_defs(m, t, "actf1"),
            collect_over_method_defs(m, t, "actf"),
        });
      });
  package_to_forms.targets.push_back(std::move(fmb));
  module.add(std::move(package_to_forms));

  // operation -> form(s). The plain form vanishes for a root Retrieve,
  // the end form exists only for Create and Update.
  MatchedRule op_to_forms;
  op_to_forms.name = "operation-to-action-form";
  op_to_forms.source_kind = SourceKind::Operation;
  TargetTemplate actf;
  actf.local_name = "actf";
  actf.target_kind = psm::ElementKind::ActionForm;
  actf.suppress_if_unnamed = true;
  actf.bindings.emplace_back(
      "name", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(
            action_form_name(owner(m, src), operation(m, src)));
      });
  op_to_forms.targets.push_back(std::move(actf));
  TargetTemplate actf1;
  actf1.local_name = "actf1";
  actf1.target_kind = psm::ElementKind::ActionForm;
  actf1.suppress_if_unnamed = true;
  actf1.bindings.emplace_back(
      "name", [](const pim::UmlModel& m, const SourceRef& src, const TraceStore&) {
        return BindingValue::text(
            end_form_name(owner(m, src), operation(m, src)));
      });
  op_to_forms.targets.push_back(std::move(actf1));
  module.add(std::move(op_to_forms));

  return module;
}

psm::StrutsModel transform(const pim::UmlModel& model) {
  const Violations violations = pim::validate_pim(model);
  if (!violations.empty())
    throw Error("invalid-input", "source model has " +
                                     std::to_string(violations.size()) +
                                     " violation(s); first: " +
                                     violations.front().code + " at " +
                                     violations.front().path);
  return engine::execute(build_crud_module(), model).model;
}

} // namespace mvc2gen::rules
