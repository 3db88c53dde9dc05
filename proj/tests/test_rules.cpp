#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "mvc2gen/rules.hpp"
#include "support/builders.hpp"
#include "support/model_gen.hpp"
#include "support/name_table_oracle.hpp"

using namespace mvc2gen;
using testsupport::chain_model;
using testsupport::empty_model;
using testsupport::make_class;
using testsupport::make_crud_class;

namespace {

pim::Operation op(const char* name) {
  pim::Operation out;
  out.name = name;
  return out;
}

const pim::Classifier root_class = make_crud_class("Ci");
const pim::Classifier child_class = make_crud_class("Cj", "Ci");
const pim::Classifier grandchild_class = make_crud_class("Ck", "Cj");

} // namespace

TEST_CASE("crud_kind dispatches on the literal name") {
  CHECK(rules::crud_kind(op("Create")).verb == rules::CrudVerb::Create);
  CHECK(rules::crud_kind(op("Retrieve")).verb == rules::CrudVerb::Retrieve);
  CHECK(rules::crud_kind(op("Update")).verb == rules::CrudVerb::Update);
  CHECK(rules::crud_kind(op("Delete")).verb == rules::CrudVerb::Delete);
  CHECK(rules::crud_kind(op("create")).verb == rules::CrudVerb::Other);
  CHECK(rules::crud_kind(op("Foo")) == rules::CrudKind{rules::CrudVerb::Other, "Foo"});
}

TEST_CASE("jsp_name skips Delete") {
  CHECK(rules::jsp_name(root_class, op("Retrieve")) == "RetrieveCi.jsp");
  CHECK_FALSE(rules::jsp_name(root_class, op("Delete")).has_value());
  CHECK(rules::jsp_name(make_crud_class("X"), op("Foo")) == "FooX.jsp");
}

TEST_CASE("action_path and action_type concatenate op and class") {
  CHECK(rules::action_path(root_class, op("Create")) == "/CreateCi");
  CHECK(rules::action_path(grandchild_class, op("Update")) == "/UpdateCk");
  CHECK(rules::action_path(make_crud_class("X"), op("Foo")) == "/FooX");
  CHECK(rules::action_type(root_class, op("Retrieve")) == "RetrieveCiAction");
  CHECK(rules::action_type(child_class, op("Delete")) == "DeleteCjAction");
  CHECK(rules::action_type(make_crud_class("X"), op("Foo")) == "FooXAction");
}

TEST_CASE("action_form_name vanishes only for a root Retrieve") {
  CHECK_FALSE(rules::action_form_name(root_class, op("Retrieve")).has_value());
  CHECK(rules::action_form_name(child_class, op("Retrieve")) == "RetrieveCjForm");
  CHECK(rules::action_form_name(root_class, op("Delete")) == "DeleteCiForm");
}

TEST_CASE("action_input reads from the parent class") {
  CHECK(rules::action_input(child_class, op("Delete")) == "/RetrieveCi.jsp");
  CHECK(rules::action_input(grandchild_class, op("Create")) == "/CreateCj.jsp");
  CHECK_FALSE(rules::action_input(root_class, op("Create")).has_value());
}

TEST_CASE("end_form_name exists for Create and Update only") {
  CHECK(rules::end_form_name(root_class, op("Create")) == "CreateCiEndForm");
  CHECK(rules::end_form_name(grandchild_class, op("Update")) == "UpdateCkEndForm");
  CHECK_FALSE(rules::end_form_name(child_class, op("Retrieve")).has_value());
  CHECK_FALSE(rules::end_form_name(child_class, op("Delete")).has_value());
  CHECK_FALSE(rules::end_form_name(child_class, op("Foo")).has_value());
}

TEST_CASE("forward_target sends Delete to the sibling Retrieve") {
  const pim::UmlModel model = chain_model();
  // Declaration order per class: Create, Delete, Retrieve, Update.
  CHECK(rules::forward_target(model, {0, 1}) == pim::OpRef{0, 2});
  CHECK(rules::forward_target(model, {1, 0}) == pim::OpRef{1, 0});

  pim::UmlModel no_retrieve = empty_model();
  no_retrieve.package.classifiers.push_back(make_class("A", "Void", {"Delete"}));
  CHECK_THROWS_WITH_AS((void)rules::forward_target(no_retrieve, {0, 0}),
                       doctest::Contains("missing-retrieve"), Error);
}

TEST_CASE("the module registers six rules") {
  CHECK(rules::build_crud_module().size() == 6);
}

TEST_CASE("transforming the chain reproduces the reference listings") {
  const psm::StrutsModel model = rules::transform(chain_model());

  CHECK_FALSE(model.view_package.name.has_value());
  const std::vector<std::string> expected_views = {
      "CreateCi.jsp",   "CreateCj.jsp",   "CreateCk.jsp",
      "RetrieveCi.jsp", "RetrieveCj.jsp", "RetrieveCk.jsp",
      "UpdateCi.jsp",   "UpdateCj.jsp",   "UpdateCk.jsp"};
  REQUIRE(model.view_package.views.size() == expected_views.size());
  for (std::size_t i = 0; i < expected_views.size(); ++i)
    CHECK(model.view_package.views[i].name == expected_views[i]);

  REQUIRE(model.action_mapping.actions.size() == 12);
  const psm::Action& delete_cj = model.action_mapping.actions[4];
  CHECK(delete_cj.path == "/DeleteCj");
  CHECK(delete_cj.name == "DeleteCjForm");
  CHECK(delete_cj.type == "DeleteCjAction");
  CHECK(delete_cj.input == "/RetrieveCi.jsp");
  REQUIRE(delete_cj.forwards.size() == 1);
  CHECK(delete_cj.forwards[0].name == "Success");
  CHECK(delete_cj.forwards[0].target_view == 4);

  const psm::Action& retrieve_ci = model.action_mapping.actions[6];
  CHECK(retrieve_ci.path == "/RetrieveCi");
  CHECK_FALSE(retrieve_ci.name.has_value()); // root Retrieve has no form
  CHECK_FALSE(retrieve_ci.input.has_value());
  CHECK(retrieve_ci.forwards[0].target_view == 3);

  const std::vector<std::string> expected_forms = {
      "CreateCiEndForm", "CreateCjEndForm", "CreateCkEndForm",
      "UpdateCiEndForm", "UpdateCjEndForm", "UpdateCkEndForm",
      "CreateCiForm",    "CreateCjForm",    "CreateCkForm",
      "DeleteCiForm",    "DeleteCjForm",    "DeleteCkForm",
      "RetrieveCjForm",  "RetrieveCkForm",  "UpdateCiForm",
      "UpdateCjForm",    "UpdateCkForm"};
  REQUIRE(model.form_bean.forms.size() == expected_forms.size());
  for (std::size_t i = 0; i < expected_forms.size(); ++i)
    CHECK(model.form_bean.forms[i].name == expected_forms[i]);

  CHECK(psm::validate_psm(model).empty());
}

TEST_CASE("an empty package transforms to empty containers") {
  const psm::StrutsModel model = rules::transform(empty_model());
  CHECK(model.view_package.views.empty());
  CHECK(model.action_mapping.actions.empty());
  CHECK(model.form_bean.forms.empty());
}

TEST_CASE("a single root class yields 3 views, 4 actions, 5 forms") {
  pim::UmlModel source = empty_model();
  source.package.classifiers.push_back(make_crud_class("X"));
  const psm::StrutsModel model = rules::transform(source);

  CHECK(model.view_package.views.size() == 3);
  CHECK(model.action_mapping.actions.size() == 4);
  const std::vector<std::string> expected_forms = {
      "CreateXEndForm", "UpdateXEndForm", "CreateXForm", "DeleteXForm",
      "UpdateXForm"};
  REQUIRE(model.form_bean.forms.size() == expected_forms.size());
  for (std::size_t i = 0; i < expected_forms.size(); ++i)
    CHECK(model.form_bean.forms[i].name == expected_forms[i]);

  std::string why;
  CHECK_MESSAGE(
      testsupport::matches_oracle(testsupport::name_table(source), model, why),
      why);
}

TEST_CASE("operations outside the CRUD names transform uniformly") {
  pim::UmlModel source = empty_model();
  source.package.classifiers.push_back(
      make_class("X", "Void", {"Create", "Delete", "Retrieve", "Update"}));
  source.package.classifiers.push_back(make_class("Y", "X", {"Foo"}));
  const psm::StrutsModel model = rules::transform(source);

  REQUIRE(model.action_mapping.actions.size() == 5);
  const psm::Action& foo = model.action_mapping.actions[2]; // after Create/Delete
  CHECK(foo.path == "/FooY");
  CHECK(foo.name == "FooYForm");
  CHECK(foo.type == "FooYAction");
  CHECK(foo.input == "/FooX.jsp"); // generic else-branch against the parent
  CHECK(model.view_package.views[1].name == "FooY.jsp");
  REQUIRE(foo.forwards.size() == 1);
  CHECK(model.view_package.views[foo.forwards[0].target_view].name == "FooY.jsp");

  // No end form for Foo: 2 end forms + 4 plain forms (root Retrieve skipped).
  CHECK(model.form_bean.forms.size() == 6);
}

TEST_CASE("transform rejects invalid sources") {
  pim::UmlModel bad = empty_model();
  bad.package.classifiers.push_back(make_crud_class("A", "A"));
  CHECK_THROWS_WITH_AS((void)rules::transform(bad),
                       doctest::Contains("invalid-input"), Error);
}

TEST_CASE("trace exposes pages for everything but Delete") {
  const pim::UmlModel source = chain_model();
  const auto result = engine::execute(rules::build_crud_module(), source);

  // Declaration order per class: Create=0, Delete=1, Retrieve=2, Update=3.
  const auto create_page =
      engine::resolve_temp(result.trace, engine::operation_ref(0, 0), "jsp");
  REQUIRE(create_page.has_value());
  REQUIRE(create_page->placement.has_value());
  CHECK(result.model.view_package.views[create_page->placement->index].name ==
        "CreateCi.jsp");

  CHECK_FALSE(
      engine::resolve_temp(result.trace, engine::operation_ref(0, 1), "jsp"));

  const auto end_form =
      engine::resolve_temp(result.trace, engine::operation_ref(0, 0), "actf1");
  REQUIRE(end_form.has_value());
  REQUIRE(end_form->placement.has_value());
  CHECK(result.model.form_bean.forms[end_form->placement->index].name ==
        "CreateCiEndForm");

  // Default resolution of an operation is its action.
  const auto action =
      engine::resolve(result.trace, engine::operation_ref(0, 2));
  REQUIRE(action.has_value());
  CHECK(action->kind == psm::ElementKind::Action);
  REQUIRE(action->placement.has_value());
  CHECK(result.model.action_mapping.actions[action->placement->index].path ==
        "/RetrieveCi");

  // 9 pages + 12 actions + 12 forwards + 11 forms + 6 end forms + 3 roots.
  CHECK(result.trace.entry_count() == 53);
}

TEST_CASE("counting law holds over random forests") {
  std::mt19937 rng(7);
  for (int round = 0; round < 40; ++round) {
    const pim::UmlModel source = testsupport::random_crud_forest(rng);
    const psm::StrutsModel model = rules::transform(source);
    const std::size_t n = source.package.classifiers.size();
    const std::size_t r = static_cast<std::size_t>(testsupport::root_count(source));
    CHECK(model.view_package.views.size() == 3 * n);
    CHECK(model.action_mapping.actions.size() == 4 * n);
    CHECK(model.form_bean.forms.size() == 6 * n - r);
    CHECK(psm::validate_psm(model).empty());
  }
}

TEST_CASE("every Delete action forwards to its own Retrieve page") {
  std::mt19937 rng(11);
  for (int round = 0; round < 25; ++round) {
    const pim::UmlModel source = testsupport::random_crud_forest(rng);
    const psm::StrutsModel model = rules::transform(source);
    for (const psm::Action& action : model.action_mapping.actions) {
      if (!action.path.starts_with("/Delete"))
        continue;
      const std::string cls = action.path.substr(7);
      REQUIRE(action.forwards.size() == 1);
      CHECK(model.view_package.views[action.forwards[0].target_view].name ==
            "Retrieve" + cls + ".jsp");
      if (action.input)
        CHECK(action.input->starts_with("/Retrieve"));
    }
  }
}

TEST_CASE("engine output equals the brute-force name table") {
  std::mt19937 rng(13);
  for (int round = 0; round < 40; ++round) {
    const pim::UmlModel source = testsupport::random_crud_forest(rng);
    const psm::StrutsModel model = rules::transform(source);
    std::string why;
    CHECK_MESSAGE(
        testsupport::matches_oracle(testsupport::name_table(source), model, why),
        why);
  }
}
