#include "mvc2gen/pim.hpp"

#include <algorithm>
#include <set>
#include <string>
#include <utility>

namespace mvc2gen::pim {

namespace {

std::string classifier_path(int index) {
  return "/classifier." + std::to_string(index);
}

std::string operation_path(int class_index, int op_index) {
  return classifier_path(class_index) + "/operation." + std::to_string(op_index);
}

std::string property_path(int class_index, int prop_index) {
  return classifier_path(class_index) + "/property." + std::to_string(prop_index);
}

} // namespace

std::string_view to_string(Stereotype s) {
  switch (s) {
  case Stereotype::Create:
    return "Create";
  case Stereotype::Retrieve:
    return "Retrieve";
  case Stereotype::Update:
    return "Update";
  case Stereotype::Delete:
    return "Delete";
  }
  return "";
}

std::optional<Stereotype> stereotype_from_string(std::string_view text) {
  if (text == "Create")
    return Stereotype::Create;
  if (text == "Retrieve")
    return Stereotype::Retrieve;
  if (text == "Update")
    return Stereotype::Update;
  if (text == "Delete")
    return Stereotype::Delete;
  return std::nullopt;
}

const Classifier& owner_of(const UmlModel& model, OpRef ref) {
  return model.package.classifiers.at(static_cast<std::size_t>(ref.class_index));
}

const Operation& operation_at(const UmlModel& model, OpRef ref) {
  return owner_of(model, ref).operations.at(static_cast<std::size_t>(ref.op_index));
}

UmlPackage make_package(std::string name) {
  UmlPackage pkg;
  pkg.name = std::move(name);
  pkg.datatypes.push_back(DataType{std::string(kVoidTypeName)});
  return pkg;
}

bool is_root(const Classifier& c) { return c.opposite.type == kVoidTypeName; }

std::string_view opposite_type_name(const Classifier& c) {
  return c.opposite.type;
}

std::vector<OpRef> all_method_defs(const UmlModel& model) {
  std::vector<OpRef> refs;
  const auto& classifiers = model.package.classifiers;
  for (int ci = 0; ci < static_cast<int>(classifiers.size()); ++ci) {
    const int op_count = static_cast<int>(classifiers[ci].operations.size());
    for (int oi = 0; oi < op_count; ++oi)
      refs.push_back(OpRef{ci, oi});
  }
  // Name first; declaration positions break ties, so the sort is total
  // and the result order is reproducible.
  std::sort(refs.begin(), refs.end(), [&](const OpRef& a, const OpRef& b) {
    const std::string& an = operation_at(model, a).name;
    const std::string& bn = operation_at(model, b).name;
    if (an != bn)
      return an < bn;
    return std::pair(a.class_index, a.op_index) <
           std::pair(b.class_index, b.op_index);
  });
  return refs;
}

Violations validate_pim(const UmlModel& model) {
  Violations out;
  const UmlPackage& pkg = model.package;

  const bool has_void =
      std::any_of(pkg.datatypes.begin(), pkg.datatypes.end(),
                  [](const DataType& d) { return d.name == kVoidTypeName; });
  if (!has_void)
    out.push_back({"/", "missing-void", "built-in Void datatype is absent"});

  std::set<std::string> type_names;
  for (const DataType& d : pkg.datatypes)
    type_names.insert(d.name);

  std::set<std::string> seen_classifiers;
  for (std::size_t i = 0; i < pkg.classifiers.size(); ++i) {
    const Classifier& c = pkg.classifiers[i];
    if (c.name.empty()) {
      out.push_back({classifier_path(static_cast<int>(i)), "empty-name",
                     "classifier has no name"});
    } else if (c.name == kVoidTypeName) {
      out.push_back({classifier_path(static_cast<int>(i)), "reserved-name",
                     "\"Void\" is reserved for the root marker"});
    }
    if (!seen_classifiers.insert(c.name).second) {
      out.push_back({classifier_path(static_cast<int>(i)), "duplicate-classifier",
                     "classifier name \"" + c.name + "\" is declared twice"});
    }
    type_names.insert(c.name);
  }

  auto find_classifier = [&](std::string_view name) -> const Classifier* {
    for (const Classifier& c : pkg.classifiers)
      if (c.name == name)
        return &c;
    return nullptr;
  };

  for (std::size_t i = 0; i < pkg.classifiers.size(); ++i) {
    const Classifier& c = pkg.classifiers[i];
    const std::string path = classifier_path(static_cast<int>(i));

    // The opposite end must point at another classifier or at Void.
    if (c.opposite.type != kVoidTypeName && !find_classifier(c.opposite.type)) {
      out.push_back({path + "/opposite", "unresolved-type",
                     "opposite type \"" + c.opposite.type +
                         "\" names no classifier in the package"});
    }

    for (std::size_t pi = 0; pi < c.properties.size(); ++pi) {
      const Property& p = c.properties[pi];
      if (!type_names.contains(p.type)) {
        out.push_back({property_path(static_cast<int>(i), static_cast<int>(pi)),
                       "unresolved-type",
                       "property type \"" + p.type + "\" does not resolve"});
      }
    }

    std::set<std::string> seen_ops;
    for (std::size_t oi = 0; oi < c.operations.size(); ++oi) {
      const Operation& op = c.operations[oi];
      const std::string op_path =
          operation_path(static_cast<int>(i), static_cast<int>(oi));
      if (op.name.empty())
        out.push_back({op_path, "empty-name", "operation has no name"});
      if (!seen_ops.insert(op.name).second) {
        out.push_back({op_path, "duplicate-operation",
                       "operation \"" + op.name + "\" is declared twice on \"" +
                           c.name + "\""});
      }
      if (op.stereotype && op.name != to_string(*op.stereotype)) {
        out.push_back({op_path, "stereotype-name-mismatch",
                       "operation \"" + op.name + "\" is stereotyped <<" +
                           std::string(to_string(*op.stereotype)) + ">>"});
      }
    }
  }

  // Parent chains must form a forest: walking opposite links from any
  // classifier terminates at Void without revisiting anyone.
  for (std::size_t i = 0; i < pkg.classifiers.size(); ++i) {
    std::set<std::string> visited;
    const Classifier* cur = &pkg.classifiers[i];
    visited.insert(cur->name);
    while (cur->opposite.type != kVoidTypeName) {
      const Classifier* parent = find_classifier(cur->opposite.type);
      if (!parent)
        break; // already reported as unresolved-type
      if (!visited.insert(parent->name).second) {
        out.push_back({classifier_path(static_cast<int>(i)), "cycle",
                       "parent chain starting at \"" +
                           pkg.classifiers[i].name + "\" revisits \"" +
                           parent->name + "\""});
        break;
      }
      cur = parent;
    }
  }

  return out;
}

} // namespace mvc2gen::pim
