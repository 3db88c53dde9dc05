#ifndef MVC2GEN_ENGINE_HPP
#define MVC2GEN_ENGINE_HPP

#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvc2gen/pim.hpp"
#include "mvc2gen/psm.hpp"

// Two-phase matched-rule transformation engine. Phase 1 walks the source
// model in declaration order, matches rules and creates one blank target
// element per template, recording a trace link for each. Phase 2 evaluates
// every binding expression with the complete trace in scope and assigns
// the results, so no expression can depend on evaluation order.
//
// Several rules may match the same source element as long as their
// template names do not clash; at most one of them may be flagged as the
// element's default-resolution rule.

namespace mvc2gen::engine {

enum class SourceKind { Package, DataType, Classifier, Property, Operation };

// Identity of a source element: kind plus declaration position.
struct SourceRef {
  SourceKind kind = SourceKind::Package;
  int class_index = -1;  // Classifier / Property / Operation owner
  int member_index = -1; // member position; DataType position

  auto operator<=>(const SourceRef&) const = default;
};

SourceRef package_ref();
SourceRef datatype_ref(int index);
SourceRef classifier_ref(int class_index);
SourceRef property_ref(int class_index, int property_index);
SourceRef operation_ref(int class_index, int op_index);
SourceRef operation_ref(pim::OpRef ref);

// Handle to an element created during execution. Stable for the lifetime
// of the TraceStore that produced it.
using TargetId = int;
inline constexpr TargetId kNoTarget = -1;

// Value produced by a binding expression. Undefined values leave the bound
// feature unset and are dropped from collections; nested collections are
// flattened on assignment. A source-element value is resolved through the
// trace to the element's default target when assigned (failing with
// `unresolved-reference` if the element was never matched).
class BindingValue {
public:
  static BindingValue undefined();
  static BindingValue text(std::string value);
  static BindingValue text(const char* value);
  static BindingValue text(std::optional<std::string> value); // undefined if absent
  static BindingValue target(TargetId id);
  static BindingValue source(SourceRef ref);
  static BindingValue sequence(std::vector<BindingValue> items);

  bool is_undefined() const { return kind_ == Kind::Undefined; }
  bool is_text() const { return kind_ == Kind::Text; }
  bool is_target() const { return kind_ == Kind::Target; }
  bool is_source() const { return kind_ == Kind::Source; }
  bool is_sequence() const { return kind_ == Kind::Sequence; }

  const std::string& text_value() const { return text_; }
  TargetId target_value() const { return target_; }
  const SourceRef& source_value() const { return source_; }
  const std::vector<BindingValue>& items() const { return items_; }

private:
  enum class Kind { Undefined, Text, Target, Source, Sequence };

  Kind kind_ = Kind::Undefined;
  std::string text_;
  TargetId target_ = kNoTarget;
  SourceRef source_;
  std::vector<BindingValue> items_;
};

class TraceStore;

using GuardFn = std::function<bool(const pim::UmlModel&, const SourceRef&)>;
using BindingFn = std::function<BindingValue(
    const pim::UmlModel&, const SourceRef&, const TraceStore&)>;

// One target pattern of a rule: the element it creates and how its
// features are filled in.
struct TargetTemplate {
  std::string local_name;
  psm::ElementKind target_kind = psm::ElementKind::JspPage;
  // When set, the created element is discarded again -- trace entry
  // included -- if every one of its bindings evaluates to undefined.
  bool suppress_if_unnamed = false;
  std::vector<std::pair<std::string, BindingFn>> bindings;
};

struct MatchedRule {
  std::string name;
  SourceKind source_kind = SourceKind::Operation;
  GuardFn guard; // total predicate; a throwing guard aborts the run
  std::vector<TargetTemplate> targets; // non-empty; first is the default
  // Marks this rule's first template as the default resolution target for
  // elements it matches. Needed only when several rules match the same
  // element; a lone matching rule provides the default implicitly.
  bool provides_default = false;
};

class RuleModule {
public:
  // Registers a rule. Throws `duplicate-rule` on a name collision and
  // `invalid-rule` when the template list is empty or template names
  // repeat within the rule.
  RuleModule& add(MatchedRule rule);

  std::size_t size() const { return rules_.size(); }
  const std::vector<MatchedRule>& rules() const { return rules_; }

private:
  std::vector<MatchedRule> rules_;
};

// Record of every (source element, template name) -> created element link,
// plus per-element default links. Entries are write-once.
class TraceStore {
public:
  struct TargetInfo {
    psm::ElementKind kind;
    bool alive = true; // false once suppressed
    std::optional<psm::ElementRef> placement; // set after assembly
  };

  // Throws `trace-overwrite` when the key is already present.
  void record(const SourceRef& src, std::string template_name, TargetId id);
  void record_default(const SourceRef& src, TargetId id);

  TargetId lookup(const SourceRef& src, std::string_view template_name) const;
  TargetId lookup_default(const SourceRef& src) const;

  std::size_t entry_count() const { return entries_.size(); }
  const TargetInfo& target(TargetId id) const;

  // Engine bookkeeping.
  TargetId add_target(psm::ElementKind kind);
  void suppress(const SourceRef& src, const std::string& template_name);
  void set_placement(TargetId id, psm::ElementRef ref);

private:
  std::map<std::pair<SourceRef, std::string>, TargetId, std::less<>> entries_;
  std::map<SourceRef, TargetId> defaults_;
  std::vector<TargetInfo> targets_;
};

// A trace lookup result: the created element and, after execution has
// finished, its position in the assembled model.
struct ResolvedTarget {
  TargetId id = kNoTarget;
  psm::ElementKind kind = psm::ElementKind::JspPage;
  std::optional<psm::ElementRef> placement;

  bool operator==(const ResolvedTarget&) const = default;
};

// Default resolution: the element created from src's first template, or
// nullopt if src was never matched (or no matching rule provides the
// default).
std::optional<ResolvedTarget> resolve(const TraceStore& trace,
                                      const SourceRef& src);

// Named resolution: the element created from src's template `name`.
std::optional<ResolvedTarget> resolve_temp(const TraceStore& trace,
                                           const SourceRef& src,
                                           std::string_view name);

// resolve_temp as a binding value: the target, or undefined when absent.
BindingValue resolve_temp_value(const TraceStore& trace, const SourceRef& src,
                                std::string_view name);

struct ExecutionResult {
  psm::StrutsModel model;
  TraceStore trace;
};

// Runs the module over the source model. Throws `ambiguous-match` when two
// matching rules collide on a template name or both claim the default,
// `guard-failure` when a guard throws, and `unresolved-reference` when a
// binding assigns a source element that no rule matched.
ExecutionResult execute(const RuleModule& module, const pim::UmlModel& source);

} // namespace mvc2gen::engine

#endif
