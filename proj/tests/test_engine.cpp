#include <doctest.h>

#include <string>
#include <vector>

#include "mvc2gen/engine.hpp"
#include "support/builders.hpp"

using namespace mvc2gen;
using engine::BindingValue;
using engine::MatchedRule;
using engine::SourceKind;
using engine::SourceRef;
using engine::TargetTemplate;
using engine::TraceStore;

namespace {

const pim::Classifier& classifier_of(const pim::UmlModel& model,
                                     const SourceRef& src) {
  return model.package.classifiers.at(static_cast<std::size_t>(src.class_index));
}

// classifier -> one JspPage named <Class>.jsp under template `page`.
MatchedRule page_rule(bool suppress = false, bool undefined_name = false) {
  MatchedRule rule;
  rule.name = "classifier-to-page";
  rule.source_kind = SourceKind::Classifier;
  TargetTemplate tmpl;
  tmpl.local_name = "page";
  tmpl.target_kind = psm::ElementKind::JspPage;
  tmpl.suppress_if_unnamed = suppress;
  tmpl.bindings.emplace_back(
      "name", [undefined_name](const pim::UmlModel& m, const SourceRef& src,
                               const TraceStore&) {
        if (undefined_name)
          return BindingValue::undefined();
        return BindingValue::text(classifier_of(m, src).name + ".jsp");
      });
  rule.targets.push_back(std::move(tmpl));
  return rule;
}

// package -> ViewPackage whose views come from the given binding.
MatchedRule collector_rule(engine::BindingFn views_binding) {
  MatchedRule rule;
  rule.name = "package-to-views";
  rule.source_kind = SourceKind::Package;
  TargetTemplate tmpl;
  tmpl.local_name = "out";
  tmpl.target_kind = psm::ElementKind::ViewPackage;
  tmpl.bindings.emplace_back("view", std::move(views_binding));
  rule.targets.push_back(std::move(tmpl));
  return rule;
}

BindingValue collect_pages(const pim::UmlModel& m, const TraceStore& t) {
  std::vector<BindingValue> items;
  for (int i = 0; i < static_cast<int>(m.package.classifiers.size()); ++i)
    items.push_back(
        engine::resolve_temp_value(t, engine::classifier_ref(i), "page"));
  return BindingValue::sequence(std::move(items));
}

pim::UmlModel two_class_model() {
  pim::UmlModel model = testsupport::empty_model();
  model.package.classifiers.push_back(testsupport::make_class("A", "Void", {}));
  model.package.classifiers.push_back(testsupport::make_class("B", "Void", {}));
  return model;
}

} // namespace

TEST_CASE("rule registration keeps order and rejects collisions") {
  engine::RuleModule module;
  CHECK(module.size() == 0);
  module.add(page_rule());
  CHECK(module.size() == 1);
  CHECK_THROWS_WITH_AS(module.add(page_rule()),
                       doctest::Contains("duplicate-rule"), Error);

  MatchedRule empty;
  empty.name = "no-targets";
  CHECK_THROWS_WITH_AS(module.add(empty), doctest::Contains("invalid-rule"),
                       Error);

  MatchedRule twice = page_rule();
  twice.name = "repeated-template";
  twice.targets.push_back(twice.targets.front());
  CHECK_THROWS_WITH_AS(module.add(twice), doctest::Contains("invalid-rule"),
                       Error);
}

TEST_CASE("empty module produces empty roots and an empty trace") {
  const auto result =
      engine::execute(engine::RuleModule{}, testsupport::chain_model());
  CHECK(result.model == psm::StrutsModel{});
  CHECK(result.trace.entry_count() == 0);
}

TEST_CASE("elements flow from created pages into the collecting package") {
  engine::RuleModule module;
  module.add(page_rule());
  module.add(collector_rule(
      [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return collect_pages(m, t);
      }));

  const auto result = engine::execute(module, two_class_model());
  REQUIRE(result.model.view_package.views.size() == 2);
  CHECK(result.model.view_package.views[0].name == "A.jsp");
  CHECK(result.model.view_package.views[1].name == "B.jsp");

  // Trace placements point back into the assembled model.
  const auto resolved =
      engine::resolve_temp(result.trace, engine::classifier_ref(1), "page");
  REQUIRE(resolved.has_value());
  REQUIRE(resolved->placement.has_value());
  CHECK(*resolved->placement == psm::ElementRef{psm::ElementKind::JspPage, 1, -1});
}

TEST_CASE("phase two sees the complete trace regardless of source order") {
  // The package is enumerated before any classifier, so this binding can
  // only find the pages if creation finished before evaluation started.
  engine::RuleModule module;
  module.add(page_rule());
  module.add(collector_rule(
      [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        for (int i = 0; i < static_cast<int>(m.package.classifiers.size()); ++i)
          if (!engine::resolve_temp(t, engine::classifier_ref(i), "page"))
            throw std::logic_error("trace entry missing during binding");
        return collect_pages(m, t);
      }));
  const auto result = engine::execute(module, two_class_model());
  CHECK(result.model.view_package.views.size() == 2);
}

TEST_CASE("undefined collection members are dropped, order preserved") {
  engine::RuleModule module;
  module.add(page_rule());
  module.add(collector_rule(
      [](const pim::UmlModel&, const SourceRef&, const TraceStore& t) {
        // Nested sequences flatten; undefineds vanish; sources resolve to
        // the element's default target.
        return BindingValue::sequence({
            BindingValue::undefined(),
            BindingValue::sequence(
                {engine::resolve_temp_value(t, engine::classifier_ref(1), "page"),
                 BindingValue::undefined()}),
            BindingValue::sequence({}),
            BindingValue::source(engine::classifier_ref(0)),
        });
      }));
  const auto result = engine::execute(module, two_class_model());
  REQUIRE(result.model.view_package.views.size() == 2);
  CHECK(result.model.view_package.views[0].name == "B.jsp");
  CHECK(result.model.view_package.views[1].name == "A.jsp");
}

TEST_CASE("a binding naming a never-matched element fails the run") {
  engine::RuleModule module;
  module.add(collector_rule(
      [](const pim::UmlModel&, const SourceRef&, const TraceStore&) {
        return BindingValue::source(engine::classifier_ref(0));
      }));
  CHECK_THROWS_WITH_AS((void)engine::execute(module, two_class_model()),
                       doctest::Contains("unresolved-reference"), Error);
}

TEST_CASE("two rules matching one element must not share template names") {
  engine::RuleModule module;
  module.add(page_rule());
  MatchedRule clone = page_rule();
  clone.name = "classifier-to-page-again";
  module.add(clone);
  CHECK_THROWS_WITH_AS((void)engine::execute(module, two_class_model()),
                       doctest::Contains("ambiguous-match"), Error);
}

TEST_CASE("two rules may not both provide the default target") {
  engine::RuleModule module;
  MatchedRule first = page_rule();
  first.provides_default = true;
  module.add(first);
  MatchedRule second = page_rule();
  second.name = "another-page";
  second.targets[0].local_name = "other";
  second.provides_default = true;
  module.add(second);
  CHECK_THROWS_WITH_AS((void)engine::execute(module, two_class_model()),
                       doctest::Contains("ambiguous-match"), Error);
}

TEST_CASE("a throwing guard aborts with guard-failure") {
  engine::RuleModule module;
  MatchedRule rule = page_rule();
  rule.guard = [](const pim::UmlModel&, const SourceRef&) -> bool {
    throw std::runtime_error("boom");
  };
  module.add(rule);
  CHECK_THROWS_WITH_AS((void)engine::execute(module, two_class_model()),
                       doctest::Contains("guard-failure"), Error);
}

TEST_CASE("trace entries are write-once") {
  TraceStore trace;
  const engine::TargetId id = trace.add_target(psm::ElementKind::JspPage);
  trace.record(engine::classifier_ref(0), "page", id);
  CHECK_THROWS_WITH_AS(trace.record(engine::classifier_ref(0), "page", id),
                       doctest::Contains("trace-overwrite"), Error);
  trace.record_default(engine::classifier_ref(0), id);
  CHECK_THROWS_WITH_AS(trace.record_default(engine::classifier_ref(0), id),
                       doctest::Contains("trace-overwrite"), Error);
}

TEST_CASE("default resolution picks the lone matching rule's first template") {
  engine::RuleModule module;
  module.add(page_rule());
  const auto result = engine::execute(module, two_class_model());

  const auto first = engine::resolve(result.trace, engine::classifier_ref(0));
  REQUIRE(first.has_value());
  CHECK(first->kind == psm::ElementKind::JspPage);
  CHECK(engine::resolve(result.trace, engine::classifier_ref(0)) == first);

  CHECK_FALSE(engine::resolve(result.trace, engine::property_ref(0, 0)));
  CHECK_FALSE(
      engine::resolve_temp(result.trace, engine::classifier_ref(0), "nope"));
}

TEST_CASE("suppressed templates leave no trace entry") {
  engine::RuleModule module;
  module.add(page_rule(/*suppress=*/true, /*undefined_name=*/true));
  const auto result = engine::execute(module, two_class_model());
  CHECK(result.trace.entry_count() == 0);
  CHECK_FALSE(
      engine::resolve_temp(result.trace, engine::classifier_ref(0), "page"));
}

TEST_CASE("an unset feature without suppression keeps the element") {
  engine::RuleModule module;
  module.add(page_rule(/*suppress=*/false, /*undefined_name=*/true));
  module.add(collector_rule(
      [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return collect_pages(m, t);
      }));
  const auto result = engine::execute(module, two_class_model());
  REQUIRE(result.model.view_package.views.size() == 2);
  CHECK(result.model.view_package.views[0].name.empty());
  CHECK(result.trace.entry_count() == 3); // two pages plus the package root
}

TEST_CASE("execution is deterministic") {
  engine::RuleModule module;
  module.add(page_rule());
  module.add(collector_rule(
      [](const pim::UmlModel& m, const SourceRef&, const TraceStore& t) {
        return collect_pages(m, t);
      }));
  const pim::UmlModel model = two_class_model();
  const auto a = engine::execute(module, model);
  const auto b = engine::execute(module, model);
  CHECK(a.model == b.model);
  CHECK(a.trace.entry_count() == b.trace.entry_count());
}
