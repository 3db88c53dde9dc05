#ifndef MVC2GEN_CODEGEN_HPP
#define MVC2GEN_CODEGEN_HPP

#include <map>
#include <string>
#include <string_view>

#include "mvc2gen/psm.hpp"
#include "mvc2gen/xml.hpp"

// Deployment scaffolding derived from the target model: a struts-config
// descriptor plus one stub file per page, action and form. Stubs are
// deliberately thin -- a header comment naming the generating element and
// a TODO body -- the point is the file layout and the cross-references,
// not the code.

namespace mvc2gen::codegen {

inline constexpr std::string_view kDefaultPackage = "app.web";

// relative path -> file content
using GeneratedFileSet = std::map<std::string, std::string>;

// <struts-config> with <form-beans> (form-bean type = pkg.<Name>Bean) and
// <action-mappings>. Forward paths reference pages by URL
// ("/RetrieveCi.jsp"), not by model fragment. Requires a valid model.
xml::Document emit_struts_config(const psm::StrutsModel& model,
                                 std::string_view pkg = kDefaultPackage);

// Stub files: web/<page>.jsp per view, src/<pkg path>/<ActionType>.java per
// action, src/<pkg path>/<FormName>.java per form. Throws
// `invalid-package` unless pkg is a dot-separated identifier.
GeneratedFileSet emit_stub_files(const psm::StrutsModel& model,
                                 std::string_view pkg = kDefaultPackage);

} // namespace mvc2gen::codegen

#endif
