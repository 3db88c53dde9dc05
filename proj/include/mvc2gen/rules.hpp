#ifndef MVC2GEN_RULES_HPP
#define MVC2GEN_RULES_HPP

#include <optional>
#include <string>
#include <string_view>

#include "mvc2gen/engine.hpp"
#include "mvc2gen/pim.hpp"
#include "mvc2gen/psm.hpp"

// The CRUD transformation: six matched rules that turn a package of
// classifiers with CRUD operations into views, action mappings and form
// beans, plus the pure name-derivation functions the rules share.
//
// Operations dispatch on their literal name. Create/Retrieve/Update/Delete
// get the special-cased treatment below; any other operation name is
// transformed through the generic branches (own page, own action, own
// form, no end form).

namespace mvc2gen::rules {

enum class CrudVerb { Create, Retrieve, Update, Delete, Other };

struct CrudKind {
  CrudVerb verb = CrudVerb::Other;
  std::string name; // the operation name as written

  bool operator==(const CrudKind&) const = default;
};

CrudKind crud_kind(const pim::Operation& op);

// "<op><Class>.jsp"; absent for Delete (deleting renders no page of its
// own, the action forwards back to the Retrieve page).
std::optional<std::string> jsp_name(const pim::Classifier& owner,
                                    const pim::Operation& op);

// "/<op><Class>"
std::string action_path(const pim::Classifier& owner, const pim::Operation& op);

// "<op><Class>Action"
std::string action_type(const pim::Classifier& owner, const pim::Operation& op);

// "<op><Class>Form"; absent for Retrieve on a root class.
std::optional<std::string> action_form_name(const pim::Classifier& owner,
                                            const pim::Operation& op);

// Absent for root classes. Delete reads its rows from the parent's
// Retrieve page, every other operation from the parent's page of the same
// kind: "/Retrieve<Parent>.jsp" vs "/<op><Parent>.jsp".
std::optional<std::string> action_input(const pim::Classifier& owner,
                                        const pim::Operation& op);

// "<op><Class>EndForm" for Create and Update; absent otherwise.
std::optional<std::string> end_form_name(const pim::Classifier& owner,
                                         const pim::Operation& op);

// The operation whose page this operation's Success forward lands on:
// the operation itself, except Delete, which lands on the sibling Retrieve.
// Throws `missing-retrieve` when a Delete has no Retrieve next to it.
pim::OpRef forward_target(const pim::UmlModel& model, pim::OpRef op);

// The six rules, wired and registered in creation order (view package,
// pages, action mapping, actions, form bean, forms).
engine::RuleModule build_crud_module();

// End-to-end run: validates the source (`invalid-input` on violations),
// executes the CRUD module and returns the assembled target model.
psm::StrutsModel transform(const pim::UmlModel& model);

} // namespace mvc2gen::rules

#endif
