#ifndef MVC2GEN_PIM_HPP
#define MVC2GEN_PIM_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvc2gen/diagnostics.hpp"

// The source model: a UML package of classifiers carrying CRUD operations.
// Classifiers are chained master->detail through the `opposite` association
// end; a classifier whose opposite is typed by the built-in "Void" datatype
// is a root of the chain. Models are immutable once built, so everything
// here is a plain value type plus pure free functions.

namespace mvc2gen::pim {

// Reserved datatype name that marks a classifier as a chain root.
inline constexpr std::string_view kVoidTypeName = "Void";

enum class Stereotype { Create, Retrieve, Update, Delete };

std::string_view to_string(Stereotype s);
std::optional<Stereotype> stereotype_from_string(std::string_view text);

// A typed slot: an attribute of a classifier, or an association end.
// `type` names a Classifier or DataType of the same package; references
// are by name and checked by validate_pim.
struct Property {
  std::string name;
  std::string type;

  bool operator==(const Property&) const = default;
};

struct Operation {
  std::string name;
  std::optional<Stereotype> stereotype;

  bool operator==(const Operation&) const = default;
};

struct Classifier {
  std::string name;
  std::vector<Property> properties;
  std::vector<Operation> operations;
  // Association end pointing at the parent classifier in the master-detail
  // chain; typed "Void" for roots. Mandatory: every classifier has one.
  Property opposite;

  bool operator==(const Classifier&) const = default;
};

struct DataType {
  std::string name;

  bool operator==(const DataType&) const = default;
};

struct UmlPackage {
  std::string name; // may be empty
  std::vector<Classifier> classifiers;
  std::vector<DataType> datatypes; // always holds the Void datatype

  bool operator==(const UmlPackage&) const = default;
};

struct UmlModel {
  UmlPackage package;

  bool operator==(const UmlModel&) const = default;
};

// Identifies one operation of one classifier by declaration position.
// Only meaningful against the model it was taken from.
struct OpRef {
  int class_index = -1;
  int op_index = -1;

  auto operator<=>(const OpRef&) const = default;
};

const Classifier& owner_of(const UmlModel& model, OpRef ref);
const Operation& operation_at(const UmlModel& model, OpRef ref);

// Returns an empty package (just the Void datatype), ready to extend.
UmlPackage make_package(std::string name = "");

// True when the classifier's opposite end is typed by the Void datatype.
bool is_root(const Classifier& c);

// Name of the parent classifier, or "Void" for roots.
std::string_view opposite_type_name(const Classifier& c);

// Every operation of every classifier, sorted by (operation name,
// classifier declaration index, operation declaration index). This is the
// enumeration order all package-level rules iterate over, so it decides
// the order of views, actions and forms in the output.
std::vector<OpRef> all_method_defs(const UmlModel& model);

// Checks the structural invariants: unique non-reserved classifier names,
// resolvable type references, acyclic parent chains, unique (name, owner)
// operation pairs, stereotype/name agreement, Void datatype present.
Violations validate_pim(const UmlModel& model);

} // namespace mvc2gen::pim

#endif
