#ifndef MVC2GEN_IO_HPP
#define MVC2GEN_IO_HPP

#include <string>
#include <string_view>
#include <vector>

#include "mvc2gen/pim.hpp"
#include "mvc2gen/psm.hpp"
#include "mvc2gen/xml.hpp"

// Model readers and writers.
//
// Source models come in two equivalent frontends:
//   - XMI: <uml:UMLPackage xmlns:uml="http://mvc2gen/uml" name="...">
//       with <class name parent?> children holding <attr name type/> and
//       <op name stereotype?/> elements; `parent` names another class and
//       is absent on roots.
//   - a small textual DSL (.uml files):
//       package NAME? { class NAME (parent NAME)? { member* } ... }
//       member := attr NAME : TYPE ; | op NAME ; | <<stereo>> op NAME ;
//               | crud ;
//       `crud` expands to Create, Delete, Retrieve, Update, the trailing
//       semicolons are optional, and // comments run to end of line.
//
// Target models serialize to the golden XMI layout: a root wrapping
// <ViewPackage>, <actionmappings> and <formbeans> in that order, with
// forward targets rendered as fragment paths. The writer is byte
// deterministic so golden files can be compared verbatim.

namespace mvc2gen::io {

inline constexpr std::string_view kPimNamespace = "http://mvc2gen/uml";
inline constexpr std::string_view kPsmNamespace = "http://mvc2gen/struts";
inline constexpr std::string_view kPimRootTag = "uml:UMLPackage";
inline constexpr std::string_view kPsmRootTag = "struts:StrutsModel";

pim::UmlModel parse_pim_xmi(const xml::Document& doc);
pim::UmlModel parse_pim_xmi_text(std::string_view text);

// Throws `parse-error` (with line:column), `duplicate-class` or
// `unknown-parent`.
pim::UmlModel parse_pim_dsl(std::string_view text);

// Requires a valid model (`invalid-model` otherwise).
xml::Document write_psm_xmi(const psm::StrutsModel& model);
std::string write_psm_xmi_text(const psm::StrutsModel& model);

struct PsmParseOptions {
  // With strict_forwards, an unresolvable forward fragment is a `bad-path`
  // error; without it the forward is kept dangling for validate_psm to
  // report.
  bool strict_forwards = true;
};

psm::StrutsModel parse_psm_xmi(const xml::Document& doc,
                               const PsmParseOptions& options = {});
psm::StrutsModel parse_psm_xmi_text(std::string_view text,
                                    const PsmParseOptions& options = {});

enum class DiffKind { Missing, Extra, AttrMismatch, Order };

std::string_view to_string(DiffKind kind);

struct Difference {
  std::string path; // fragment path of the affected element
  DiffKind kind = DiffKind::AttrMismatch;
  std::string expected;
  std::string actual;

  bool operator==(const Difference&) const = default;
};

// Empty iff the two models are structurally identical: same elements in
// the same order with the same attributes, forwards targeting
// corresponding views. Elements are compared positionally; containers
// that hold the same elements in a different order report Order entries.
using ModelDiff = std::vector<Difference>;

ModelDiff diff_psm(const psm::StrutsModel& a, const psm::StrutsModel& b);

} // namespace mvc2gen::io

#endif
