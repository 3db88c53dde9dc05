// mvc2gen -- batch driver for the PIM -> MVC2 controller-model pipeline.
//
// Exit codes: 0 success, 1 model validation failure, 2 parse failure,
// 3 I/O failure. Diagnostics go to stderr, summaries to stdout.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "mvc2gen/codegen.hpp"
#include "mvc2gen/io.hpp"
#include "mvc2gen/pim.hpp"
#include "mvc2gen/psm.hpp"
#include "mvc2gen/rules.hpp"

namespace {

namespace fs = std::filesystem;
using namespace mvc2gen;

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitParse = 2;
constexpr int kExitIo = 3;

int exit_code_for(const Error& e) {
  const std::string& code = e.code();
  if (code == "parse-error" || code == "xml-malformed" ||
      code == "schema-violation" || code == "unresolved-ref" ||
      code == "unknown-parent" || code == "duplicate-class" ||
      code == "bad-path" || code == "out-of-range")
    return kExitParse;
  if (code == "io-error")
    return kExitIo;
  return kExitInvalid;
}

void report(const Error& e) { std::cerr << "mvc2gen: " << e.what() << "\n"; }

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error("io-error", "cannot open \"" + path + "\" for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad())
    throw Error("io-error", "failed reading \"" + path + "\"");
  return buffer.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw Error("io-error", "cannot open \"" + path + "\" for writing");
  out << content;
  out.flush();
  if (!out)
    throw Error("io-error", "failed writing \"" + path + "\"");
}

enum class PimFormat { Dsl, Xmi };

PimFormat pim_format_for(const std::string& path, const std::string& override_) {
  if (override_ == "uml")
    return PimFormat::Dsl;
  if (override_ == "xmi")
    return PimFormat::Xmi;
  const std::string ext = fs::path(path).extension().string();
  if (ext == ".uml")
    return PimFormat::Dsl;
  if (ext == ".xmi")
    return PimFormat::Xmi;
  throw Error("parse-error", "cannot tell the format of \"" + path +
                                 "\" from its extension; pass --format");
}

pim::UmlModel load_pim(const std::string& path, const std::string& format) {
  const std::string text = read_file(path);
  return pim_format_for(path, format) == PimFormat::Dsl
             ? io::parse_pim_dsl(text)
             : io::parse_pim_xmi_text(text);
}

void print_violations(const Violations& violations) {
  for (const Violation& v : violations)
    std::cerr << v.path << " " << v.code << ": " << v.message << "\n";
}

int cmd_transform(const std::string& in, const std::string& out,
                  const std::string& format) {
  const pim::UmlModel source = load_pim(in, format);
  if (const Violations violations = pim::validate_pim(source);
      !violations.empty()) {
    print_violations(violations);
    return kExitInvalid;
  }
  const psm::StrutsModel target = rules::transform(source);
  write_file(out, io::write_psm_xmi_text(target));
  std::cout << "views=" << target.view_package.views.size()
            << " actions=" << target.action_mapping.actions.size()
            << " forms=" << target.form_bean.forms.size() << "\n";
  return kExitOk;
}

int cmd_validate(const std::string& in) {
  const std::string text = read_file(in);
  const std::size_t first = text.find_first_not_of(" \t\r\n");
  Violations violations;
  if (first != std::string::npos && text[first] == '<') {
    const xml::Document doc = xml::parse(text);
    if (doc.root.tag == io::kPimRootTag || doc.root.tag == "UMLPackage") {
      violations = pim::validate_pim(io::parse_pim_xmi(doc));
    } else if (doc.root.tag == io::kPsmRootTag || doc.root.tag == "StrutsModel") {
      // Keep unresolvable forwards so the validator can name them.
      violations = psm::validate_psm(
          io::parse_psm_xmi(doc, io::PsmParseOptions{.strict_forwards = false}));
    } else {
      throw Error("schema-violation",
                  "<" + doc.root.tag + "> is neither a PIM nor a PSM document");
    }
  } else {
    violations = pim::validate_pim(io::parse_pim_dsl(text));
  }
  if (violations.empty()) {
    std::cout << "OK\n";
    return kExitOk;
  }
  print_violations(violations);
  return kExitInvalid;
}

int cmd_diff(const std::string& a_path, const std::string& b_path) {
  const psm::StrutsModel a = io::parse_psm_xmi_text(read_file(a_path));
  const psm::StrutsModel b = io::parse_psm_xmi_text(read_file(b_path));
  const io::ModelDiff diff = io::diff_psm(a, b);
  for (const io::Difference& d : diff)
    std::cout << d.path << " " << io::to_string(d.kind) << " expected="
              << (d.expected.empty() ? "-" : d.expected)
              << " actual=" << (d.actual.empty() ? "-" : d.actual) << "\n";
  return diff.empty() ? kExitOk : kExitInvalid;
}

int cmd_codegen(const std::string& in, const std::string& outdir,
                const std::string& pkg) {
  const psm::StrutsModel model = io::parse_psm_xmi_text(read_file(in));
  const xml::Document config = codegen::emit_struts_config(model, pkg);
  const codegen::GeneratedFileSet stubs = codegen::emit_stub_files(model, pkg);

  std::error_code ec;
  fs::create_directories(outdir, ec);
  if (ec)
    throw Error("io-error", "cannot create \"" + outdir + "\": " + ec.message());

  write_file((fs::path(outdir) / "struts-config.xml").string(),
             xml::serialize(config));
  for (const auto& [relative, content] : stubs) {
    const fs::path path = fs::path(outdir) / relative;
    fs::create_directories(path.parent_path(), ec);
    if (ec)
      throw Error("io-error",
                  "cannot create \"" + path.parent_path().string() + "\"");
    write_file(path.string(), content);
  }
  std::cout << "files=" << stubs.size() + 1 << "\n";
  return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"UML CRUD model to MVC2 web controller model transformer"};
  app.require_subcommand(1);

  std::string in, out, format, pkg(codegen::kDefaultPackage);
  std::string diff_a, diff_b;

  CLI::App* transform = app.add_subcommand(
      "transform", "Transform a PIM (.uml or .xmi) into a PSM XMI file");
  transform->add_option("--in", in, "input model")->required();
  transform->add_option("--out", out, "output XMI file")->required();
  transform->add_option("--format", format, "input format override")
      ->check(CLI::IsMember({"uml", "xmi"}));

  CLI::App* validate =
      app.add_subcommand("validate", "Check a PIM or PSM file for violations");
  validate->add_option("--in", in, "input model")->required();

  CLI::App* diff =
      app.add_subcommand("diff", "Structurally compare two PSM XMI files");
  diff->add_option("a", diff_a, "first PSM file")->required();
  diff->add_option("b", diff_b, "second PSM file")->required();

  CLI::App* codegen_cmd = app.add_subcommand(
      "codegen", "Scaffold struts-config.xml and stub files from a PSM");
  codegen_cmd->add_option("--in", in, "input PSM XMI")->required();
  codegen_cmd->add_option("--out", out, "output directory")->required();
  codegen_cmd->add_option("--package", pkg, "Java package for stubs");

  CLI11_PARSE(app, argc, argv);

  try {
    if (transform->parsed())
      return cmd_transform(in, out, format);
    if (validate->parsed())
      return cmd_validate(in);
    if (diff->parsed())
      return cmd_diff(diff_a, diff_b);
    if (codegen_cmd->parsed())
      return cmd_codegen(in, out, pkg);
  } catch (const Error& e) {
    report(e);
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "mvc2gen: " << e.what() << "\n";
    return kExitInvalid;
  }
  return kExitOk;
}
