#include "mvc2gen/engine.hpp"

#include <utility>

#include "mvc2gen/diagnostics.hpp"

namespace mvc2gen::engine {

namespace {

// A feature value after evaluation: the flattened scalars, undefineds
// already dropped and source references resolved to their default targets.
struct Scalar {
  bool is_text = false;
  std::string text;
  TargetId target = kNoTarget;
};

using FeatureValues = std::vector<Scalar>;

struct Node {
  psm::ElementKind kind;
  std::vector<std::pair<std::string, FeatureValues>> features;

  const FeatureValues* feature(std::string_view name) const {
    for (const auto& [fname, values] : features)
      if (fname == name)
        return &values;
    return nullptr;
  }
};

// One element created in phase 1, waiting for its bindings.
struct Creation {
  SourceRef src;
  const MatchedRule* rule;
  const TargetTemplate* tmpl;
  TargetId id;
  bool suppressed = false;
  // Values cached by the suppression pass so phase 2 does not re-evaluate.
  std::vector<BindingValue> evaluated;
};

std::vector<SourceRef> enumerate_sources(const pim::UmlModel& model) {
  std::vector<SourceRef> out;
  out.push_back(package_ref());
  for (int i = 0; i < static_cast<int>(model.package.datatypes.size()); ++i)
    out.push_back(datatype_ref(i));
  const auto& classifiers = model.package.classifiers;
  for (int ci = 0; ci < static_cast<int>(classifiers.size()); ++ci) {
    out.push_back(classifier_ref(ci));
    for (int pi = 0; pi < static_cast<int>(classifiers[ci].properties.size()); ++pi)
      out.push_back(property_ref(ci, pi));
    for (int oi = 0; oi < static_cast<int>(classifiers[ci].operations.size()); ++oi)
      out.push_back(operation_ref(ci, oi));
  }
  return out;
}

// Flattens a binding value into scalars. Undefined members vanish; source
// references resolve through the trace or fail.
void flatten_into(const BindingValue& value, const TraceStore& trace,
                  FeatureValues& out) {
  if (value.is_undefined())
    return;
  if (value.is_text()) {
    out.push_back(Scalar{true, value.text_value(), kNoTarget});
    return;
  }
  if (value.is_target()) {
    if (value.target_value() != kNoTarget &&
        trace.target(value.target_value()).alive)
      out.push_back(Scalar{false, {}, value.target_value()});
    return;
  }
  if (value.is_source()) {
    const TargetId id = trace.lookup_default(value.source_value());
    if (id == kNoTarget)
      throw Error("unresolved-reference",
                  "binding names a source element no rule matched");
    if (trace.target(id).alive)
      out.push_back(Scalar{false, {}, id});
    return;
  }
  for (const BindingValue& item : value.items())
    flatten_into(item, trace, out);
}

[[noreturn]] void bad_feature(const Node& node, std::string_view feature,
                              const std::string& why) {
  throw Error("invalid-binding", "feature \"" + std::string(feature) +
                                     "\" of " +
                                     std::string(psm::to_string(node.kind)) +
                                     ": " + why);
}

std::optional<std::string> take_text(const Node& node, std::string_view name) {
  const FeatureValues* values = node.feature(name);
  if (!values || values->empty())
    return std::nullopt;
  if (values->size() != 1 || !values->front().is_text)
    bad_feature(node, name, "expected a single string value");
  return values->front().text;
}

std::vector<TargetId> take_references(const Node& node, std::string_view name) {
  std::vector<TargetId> out;
  const FeatureValues* values = node.feature(name);
  if (!values)
    return out;
  for (const Scalar& scalar : *values) {
    if (scalar.is_text)
      bad_feature(node, name, "expected element references, found a string");
    out.push_back(scalar.target);
  }
  return out;
}

class Assembler {
public:
  Assembler(const std::vector<Node>& nodes, TraceStore& trace)
      : nodes_(nodes), trace_(trace) {}

  psm::StrutsModel assemble(const std::vector<TargetId>& roots) {
    psm::StrutsModel model;
    const TargetId view_root = take_root(roots, psm::ElementKind::ViewPackage);
    const TargetId action_root =
        take_root(roots, psm::ElementKind::ActionMapping);
    const TargetId form_root = take_root(roots, psm::ElementKind::FormBean);

    // Views first: forward targets are positions in the view list.
    if (view_root != kNoTarget) {
      const Node& pkg = nodes_[view_root];
      trace_.set_placement(view_root, {psm::ElementKind::ViewPackage, -1, -1});
      model.view_package.name = take_text(pkg, "name");
      for (TargetId id : take_references(pkg, "view")) {
        expect_kind(id, psm::ElementKind::JspPage, "view");
        const int index = static_cast<int>(model.view_package.views.size());
        model.view_package.views.push_back(
            psm::JspPage{take_text(nodes_[id], "name").value_or("")});
        trace_.set_placement(id, {psm::ElementKind::JspPage, index, -1});
      }
    }

    if (action_root != kNoTarget) {
      trace_.set_placement(action_root, {psm::ElementKind::ActionMapping, -1, -1});
      for (TargetId id : take_references(nodes_[action_root], "action")) {
        expect_kind(id, psm::ElementKind::Action, "action");
        const int index = static_cast<int>(model.action_mapping.actions.size());
        model.action_mapping.actions.push_back(assemble_action(id, index));
        trace_.set_placement(id, {psm::ElementKind::Action, index, -1});
      }
    }

    if (form_root != kNoTarget) {
      trace_.set_placement(form_root, {psm::ElementKind::FormBean, -1, -1});
      for (TargetId id : take_references(nodes_[form_root], "form")) {
        expect_kind(id, psm::ElementKind::ActionForm, "form");
        const int index = static_cast<int>(model.form_bean.forms.size());
        model.form_bean.forms.push_back(
            psm::ActionForm{take_text(nodes_[id], "name").value_or("")});
        trace_.set_placement(id, {psm::ElementKind::ActionForm, index, -1});
      }
    }
    return model;
  }

private:
  const std::vector<Node>& nodes_;
  TraceStore& trace_;

  TargetId take_root(const std::vector<TargetId>& roots,
                     psm::ElementKind kind) {
    TargetId found = kNoTarget;
    for (TargetId id : roots) {
      if (nodes_[id].kind != kind)
        continue;
      if (found != kNoTarget)
        throw Error("invalid-binding",
                    "module created more than one " +
                        std::string(psm::to_string(kind)));
      found = id;
    }
    return found;
  }

  void expect_kind(TargetId id, psm::ElementKind kind, std::string_view where) {
    if (nodes_[id].kind != kind)
      throw Error("invalid-binding",
                  "feature \"" + std::string(where) + "\" holds a " +
                      std::string(psm::to_string(nodes_[id].kind)));
  }

  psm::Action assemble_action(TargetId id, int action_index) {
    const Node& node = nodes_[id];
    psm::Action action;
    action.path = take_text(node, "path").value_or("");
    action.name = take_text(node, "name");
    action.type = take_text(node, "type").value_or("");
    action.input = take_text(node, "input");
    for (TargetId fwd_id : take_references(node, "forward")) {
      expect_kind(fwd_id, psm::ElementKind::ActionForward, "forward");
      const Node& fwd = nodes_[fwd_id];
      psm::ActionForward forward;
      forward.name = take_text(fwd, "name").value_or("");
      for (TargetId page : take_references(fwd, "target")) {
        const auto& placement = trace_.target(page).placement;
        if (placement && placement->kind == psm::ElementKind::JspPage)
          forward.target_view = placement->index;
      }
      const int sub = static_cast<int>(action.forwards.size());
      action.forwards.push_back(forward);
      trace_.set_placement(fwd_id,
                           {psm::ElementKind::ActionForward, action_index, sub});
    }
    return action;
  }
};

} // namespace

SourceRef package_ref() { return {SourceKind::Package, -1, -1}; }
SourceRef datatype_ref(int index) { return {SourceKind::DataType, -1, index}; }
SourceRef classifier_ref(int class_index) {
  return {SourceKind::Classifier, class_index, -1};
}
SourceRef property_ref(int class_index, int property_index) {
  return {SourceKind::Property, class_index, property_index};
}
SourceRef operation_ref(int class_index, int op_index) {
  return {SourceKind::Operation, class_index, op_index};
}
SourceRef operation_ref(pim::OpRef ref) {
  return operation_ref(ref.class_index, ref.op_index);
}

BindingValue BindingValue::undefined() { return BindingValue{}; }

BindingValue BindingValue::text(std::string value) {
  BindingValue v;
  v.kind_ = Kind::Text;
  v.text_ = std::move(value);
  return v;
}

BindingValue BindingValue::text(const char* value) {
  return text(std::string(value));
}

BindingValue BindingValue::text(std::optional<std::string> value) {
  return value ? text(std::move(*value)) : undefined();
}

BindingValue BindingValue::target(TargetId id) {
  if (id == kNoTarget)
    return undefined();
  BindingValue v;
  v.kind_ = Kind::Target;
  v.target_ = id;
  return v;
}

BindingValue BindingValue::source(SourceRef ref) {
  BindingValue v;
  v.kind_ = Kind::Source;
  v.source_ = ref;
  return v;
}

BindingValue BindingValue::sequence(std::vector<BindingValue> items) {
  BindingValue v;
  v.kind_ = Kind::Sequence;
  v.items_ = std::move(items);
  return v;
}

RuleModule& RuleModule::add(MatchedRule rule) {
  for (const MatchedRule& existing : rules_)
    if (existing.name == rule.name)
      throw Error("duplicate-rule",
                  "rule \"" + rule.name + "\" is already registered");
  if (rule.targets.empty())
    throw Error("invalid-rule", "rule \"" + rule.name + "\" has no targets");
  for (std::size_t i = 0; i < rule.targets.size(); ++i)
    for (std::size_t j = i + 1; j < rule.targets.size(); ++j)
      if (rule.targets[i].local_name == rule.targets[j].local_name)
        throw Error("invalid-rule", "rule \"" + rule.name +
                                        "\" declares template \"" +
                                        rule.targets[i].local_name + "\" twice");
  rules_.push_back(std::move(rule));
  return *this;
}

void TraceStore::record(const SourceRef& src, std::string template_name,
                        TargetId id) {
  const auto [it, inserted] =
      entries_.emplace(std::pair(src, std::move(template_name)), id);
  if (!inserted)
    throw Error("trace-overwrite", "trace entry for template \"" +
                                       it->first.second +
                                       "\" recorded twice for one element");
}

void TraceStore::record_default(const SourceRef& src, TargetId id) {
  const auto [it, inserted] = defaults_.emplace(src, id);
  if (!inserted)
    throw Error("trace-overwrite",
                "default trace entry recorded twice for one element");
}

TargetId TraceStore::lookup(const SourceRef& src,
                            std::string_view template_name) const {
  const auto it = entries_.find(std::pair(src, std::string(template_name)));
  return it == entries_.end() ? kNoTarget : it->second;
}

TargetId TraceStore::lookup_default(const SourceRef& src) const {
  const auto it = defaults_.find(src);
  return it == defaults_.end() ? kNoTarget : it->second;
}

const TraceStore::TargetInfo& TraceStore::target(TargetId id) const {
  return targets_.at(static_cast<std::size_t>(id));
}

TargetId TraceStore::add_target(psm::ElementKind kind) {
  targets_.push_back(TargetInfo{kind, true, std::nullopt});
  return static_cast<TargetId>(targets_.size() - 1);
}

void TraceStore::suppress(const SourceRef& src,
                          const std::string& template_name) {
  const auto it = entries_.find(std::pair(src, template_name));
  if (it == entries_.end())
    return;
  targets_[static_cast<std::size_t>(it->second)].alive = false;
  const auto def = defaults_.find(src);
  if (def != defaults_.end() && def->second == it->second)
    defaults_.erase(def);
  entries_.erase(it);
}

void TraceStore::set_placement(TargetId id, psm::ElementRef ref) {
  targets_[static_cast<std::size_t>(id)].placement = ref;
}

std::optional<ResolvedTarget> resolve(const TraceStore& trace,
                                      const SourceRef& src) {
  const TargetId id = trace.lookup_default(src);
  if (id == kNoTarget)
    return std::nullopt;
  const auto& info = trace.target(id);
  return ResolvedTarget{id, info.kind, info.placement};
}

std::optional<ResolvedTarget> resolve_temp(const TraceStore& trace,
                                           const SourceRef& src,
                                           std::string_view name) {
  const TargetId id = trace.lookup(src, name);
  if (id == kNoTarget)
    return std::nullopt;
  const auto& info = trace.target(id);
  return ResolvedTarget{id, info.kind, info.placement};
}

BindingValue resolve_temp_value(const TraceStore& trace, const SourceRef& src,
                                std::string_view name) {
  return BindingValue::target(trace.lookup(src, name));
}

ExecutionResult execute(const RuleModule& module, const pim::UmlModel& source) {
  TraceStore trace;
  std::vector<Node> nodes;
  std::vector<Creation> creations;
  std::vector<TargetId> creation_order;

  // Phase 1: match rules and create blank targets with trace links.
  for (const SourceRef& src : enumerate_sources(source)) {
    std::vector<const MatchedRule*> matching;
    for (const MatchedRule& rule : module.rules()) {
      if (rule.source_kind != src.kind)
        continue;
      bool matched = false;
      try {
        matched = !rule.guard || rule.guard(source, src);
      } catch (const std::exception& e) {
        throw Error("guard-failure", "guard of rule \"" + rule.name +
                                         "\" threw: " + e.what());
      }
      if (matched)
        matching.push_back(&rule);
    }
    if (matching.empty())
      continue;

    // Matching rules must not collide: template names stay disjoint and at
    // most one rule may claim the element's default target.
    for (std::size_t i = 0; i < matching.size(); ++i)
      for (std::size_t j = i + 1; j < matching.size(); ++j)
        for (const TargetTemplate& a : matching[i]->targets)
          for (const TargetTemplate& b : matching[j]->targets)
            if (a.local_name == b.local_name)
              throw Error("ambiguous-match",
                          "rules \"" + matching[i]->name + "\" and \"" +
                              matching[j]->name +
                              "\" both match one element with template \"" +
                              a.local_name + "\"");
    const MatchedRule* default_rule = nullptr;
    if (matching.size() == 1) {
      default_rule = matching.front();
    } else {
      for (const MatchedRule* rule : matching) {
        if (!rule->provides_default)
          continue;
        if (default_rule)
          throw Error("ambiguous-match",
                      "rules \"" + default_rule->name + "\" and \"" +
                          rule->name +
                          "\" both provide the default target for one element");
        default_rule = rule;
      }
    }

    for (const MatchedRule* rule : matching) {
      for (const TargetTemplate& tmpl : rule->targets) {
        const TargetId id = trace.add_target(tmpl.target_kind);
        nodes.push_back(Node{tmpl.target_kind, {}});
        trace.record(src, tmpl.local_name, id);
        creations.push_back(Creation{src, rule, &tmpl, id, false, {}});
        creation_order.push_back(id);
        if (rule == default_rule && &tmpl == &rule->targets.front())
          trace.record_default(src, id);
      }
    }
  }

  // Phase 2, suppression pass: a suppress_if_unnamed template whose every
  // binding comes out undefined never happened -- the element and its
  // trace entry both go away, so collections built from the trace skip it.
  for (Creation& creation : creations) {
    if (!creation.tmpl->suppress_if_unnamed)
      continue;
    bool any_defined = false;
    for (const auto& [feature, fn] : creation.tmpl->bindings) {
      creation.evaluated.push_back(fn(source, creation.src, trace));
      if (!creation.evaluated.back().is_undefined())
        any_defined = true;
    }
    if (!any_defined && !creation.tmpl->bindings.empty()) {
      creation.suppressed = true;
      trace.suppress(creation.src, creation.tmpl->local_name);
    }
  }

  // Phase 2, binding pass: every surviving element sees the final trace.
  for (Creation& creation : creations) {
    if (creation.suppressed)
      continue;
    Node& node = nodes[static_cast<std::size_t>(creation.id)];
    for (std::size_t i = 0; i < creation.tmpl->bindings.size(); ++i) {
      const auto& [feature, fn] = creation.tmpl->bindings[i];
      const BindingValue value = i < creation.evaluated.size()
                                     ? creation.evaluated[i]
                                     : fn(source, creation.src, trace);
      FeatureValues flattened;
      flatten_into(value, trace, flattened);
      if (!flattened.empty())
        node.features.emplace_back(feature, std::move(flattened));
    }
  }

  // Roots: elements no containment feature picked up. With the fixed
  // target metamodel these are exactly the three container kinds.
  std::vector<char> contained(nodes.size(), 0);
  for (const Node& node : nodes)
    for (const auto& [feature, values] : node.features)
      for (const Scalar& scalar : values)
        if (!scalar.is_text && feature != "target")
          contained[static_cast<std::size_t>(scalar.target)] = 1;
  std::vector<TargetId> roots;
  for (TargetId id : creation_order)
    if (!contained[static_cast<std::size_t>(id)] &&
        trace.target(id).alive &&
        (nodes[static_cast<std::size_t>(id)].kind ==
             psm::ElementKind::ViewPackage ||
         nodes[static_cast<std::size_t>(id)].kind ==
             psm::ElementKind::ActionMapping ||
         nodes[static_cast<std::size_t>(id)].kind == psm::ElementKind::FormBean))
      roots.push_back(id);

  Assembler assembler(nodes, trace);
  psm::StrutsModel model = assembler.assemble(roots);
  return ExecutionResult{std::move(model), std::move(trace)};
}

} // namespace mvc2gen::engine
