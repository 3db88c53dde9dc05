#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "mvc2gen/pim.hpp"
#include "support/model_gen.hpp"

// End-to-end checks against the installed binary: exit codes, stream
// separation and the summary format are part of the tool contract.

namespace {

namespace fs = std::filesystem;

const std::string kCli = MVC2GEN_CLI_PATH;
const std::string kFixtures = MVC2GEN_FIXTURE_DIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "mvc2gen_cli_tests";
  fs::create_directories(dir);
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path dir = scratch_dir();
  const fs::path out_file = dir / "stdout.txt";
  const fs::path err_file = dir / "stderr.txt";
  const std::string command = kCli + " " + args + " >" + out_file.string() +
                              " 2>" + err_file.string();
  const int status = std::system(command.c_str());
  RunResult result;
  result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

// Renders a model as DSL text, spelling every operation out so shuffled
// declaration orders survive.
std::string to_dsl(const mvc2gen::pim::UmlModel& model) {
  std::string out = "package";
  if (!model.package.name.empty())
    out += " " + model.package.name;
  out += " {\n";
  for (const auto& cls : model.package.classifiers) {
    out += "  class " + cls.name;
    if (cls.opposite.type != mvc2gen::pim::kVoidTypeName)
      out += " parent " + cls.opposite.type;
    out += " {";
    for (const auto& op : cls.operations)
      out += " op " + op.name + ";";
    out += " }\n";
  }
  out += "}\n";
  return out;
}

} // namespace

TEST_CASE("transform writes the golden document and a summary") {
  const fs::path out = scratch_dir() / "chain_out.xmi";
  const RunResult result =
      run("transform --in " + fixture("chain.uml") + " --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out == "views=9 actions=12 forms=17\n");
  CHECK(result.err.empty());
  CHECK(slurp(out) == slurp(fixture("golden_psm.xmi")));
}

TEST_CASE("transform accepts the XMI frontend and agrees byte for byte") {
  const fs::path out = scratch_dir() / "chain_from_xmi.xmi";
  const RunResult result =
      run("transform --in " + fixture("chain.xmi") + " --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(slurp(out) == slurp(fixture("golden_psm.xmi")));
}

TEST_CASE("transform runs are byte-identical") {
  const fs::path first = scratch_dir() / "repeat1.xmi";
  const fs::path second = scratch_dir() / "repeat2.xmi";
  run("transform --in " + fixture("chain.uml") + " --out " + first.string());
  run("transform --in " + fixture("chain.uml") + " --out " + second.string());
  CHECK(slurp(first) == slurp(second));
}

TEST_CASE("transform of the empty package reports zero counts") {
  const fs::path out = scratch_dir() / "empty_out.xmi";
  const RunResult result =
      run("transform --in " + fixture("empty.uml") + " --out " + out.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out == "views=0 actions=0 forms=0\n");
}

TEST_CASE("transform exit codes distinguish failure classes") {
  const std::string out = (scratch_dir() / "never.xmi").string();
  CHECK(run("transform --in " + fixture("cycle.uml") + " --out " + out)
            .exit_code == 1);
  CHECK(run("transform --in " + fixture("bad_syntax.uml") + " --out " + out)
            .exit_code == 2);
  CHECK(run("transform --in " + fixture("no_such_file.uml") + " --out " + out)
            .exit_code == 3);

  const RunResult cycle =
      run("transform --in " + fixture("cycle.uml") + " --out " + out);
  CHECK(cycle.err.find("cycle") != std::string::npos);
  CHECK(cycle.out.empty());
}

TEST_CASE("the format flag overrides the file extension") {
  const fs::path renamed = scratch_dir() / "chain_without_extension";
  fs::copy_file(fixture("chain.uml"), renamed,
                fs::copy_options::overwrite_existing);
  const fs::path out = scratch_dir() / "override_out.xmi";
  CHECK(run("transform --in " + renamed.string() + " --out " + out.string())
            .exit_code == 2);
  const RunResult forced = run("transform --format uml --in " +
                               renamed.string() + " --out " + out.string());
  CHECK(forced.exit_code == 0);
}

TEST_CASE("validate accepts both model kinds") {
  const RunResult pim = run("validate --in " + fixture("chain.uml"));
  CHECK(pim.exit_code == 0);
  CHECK(pim.out == "OK\n");
  CHECK(run("validate --in " + fixture("chain.xmi")).exit_code == 0);
  CHECK(run("validate --in " + fixture("golden_psm.xmi")).exit_code == 0);
}

TEST_CASE("validate lists violations one per line") {
  const RunResult cycle = run("validate --in " + fixture("cycle.uml"));
  CHECK(cycle.exit_code == 1);
  CHECK(cycle.err.find("cycle") != std::string::npos);

  const RunResult dangling = run("validate --in " + fixture("dangling_psm.xmi"));
  CHECK(dangling.exit_code == 1);
  CHECK(dangling.err.find("dangling-forward") != std::string::npos);
}

TEST_CASE("validate rejects unparseable input with exit 2") {
  CHECK(run("validate --in " + fixture("garbage.txt")).exit_code == 2);
  CHECK(run("validate --in " + fixture("bad_syntax.uml")).exit_code == 2);
}

TEST_CASE("diff compares a file against itself as empty") {
  const RunResult result = run("diff " + fixture("golden_psm.xmi") + " " +
                               fixture("golden_psm.xmi"));
  CHECK(result.exit_code == 0);
  CHECK(result.out.empty());
}

TEST_CASE("diff accepts transform output against the golden file") {
  const fs::path out = scratch_dir() / "diff_subject.xmi";
  run("transform --in " + fixture("chain.uml") + " --out " + out.string());
  CHECK(run("diff " + out.string() + " " + fixture("golden_psm.xmi"))
            .exit_code == 0);
}

TEST_CASE("diff reports differences line by line") {
  const fs::path single = scratch_dir() / "single.xmi";
  run("transform --in " + fixture("single.uml") + " --out " + single.string());
  const RunResult result =
      run("diff " + fixture("golden_psm.xmi") + " " + single.string());
  CHECK(result.exit_code == 1);
  CHECK(result.out.find("/0/@view.0") != std::string::npos);
  CHECK(result.out.find("attr-mismatch") != std::string::npos);
  CHECK(result.out.find("missing") != std::string::npos);
}

TEST_CASE("diff fails with exit 2 when an input does not parse") {
  CHECK(run("diff " + fixture("golden_psm.xmi") + " " + fixture("garbage.txt"))
            .exit_code == 2);
  CHECK(run("diff " + fixture("golden_psm.xmi") + " " +
            fixture("dangling_psm.xmi"))
            .exit_code == 2);
}

TEST_CASE("codegen writes the config plus one stub per element") {
  const fs::path outdir = scratch_dir() / "gen";
  fs::remove_all(outdir);
  const RunResult result = run("codegen --in " + fixture("golden_psm.xmi") +
                               " --out " + outdir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out == "files=39\n");

  std::size_t on_disk = 0;
  for (const auto& entry : fs::recursive_directory_iterator(outdir))
    if (entry.is_regular_file())
      ++on_disk;
  CHECK(on_disk == 39);
  CHECK(fs::exists(outdir / "struts-config.xml"));
  CHECK(fs::exists(outdir / "web/RetrieveCi.jsp"));
  CHECK(fs::exists(outdir / "src/app/web/DeleteCkAction.java"));

  const std::string config = slurp(outdir / "struts-config.xml");
  CHECK(config.find("<forward name=\"Success\" path=\"/RetrieveCi.jsp\"/>") !=
        std::string::npos);
}

TEST_CASE("codegen honors the package flag") {
  const fs::path outdir = scratch_dir() / "gen_pkg";
  fs::remove_all(outdir);
  const RunResult result =
      run("codegen --in " + fixture("golden_psm.xmi") + " --out " +
          outdir.string() + " --package org.example");
  CHECK(result.exit_code == 0);
  CHECK(fs::exists(outdir / "src/org/example/CreateCiAction.java"));
}

TEST_CASE("codegen of an empty model writes only the config") {
  const fs::path outdir = scratch_dir() / "gen_empty";
  fs::remove_all(outdir);
  const RunResult result = run("codegen --in " + fixture("empty_psm.xmi") +
                               " --out " + outdir.string());
  CHECK(result.exit_code == 0);
  CHECK(result.out == "files=1\n");
}

TEST_CASE("transform output always validates (pipeline closure)") {
  std::mt19937 rng(99);
  for (int round = 0; round < 10; ++round) {
    const fs::path in = scratch_dir() / "random.uml";
    const fs::path out = scratch_dir() / "random_psm.xmi";
    std::ofstream(in) << to_dsl(testsupport::random_crud_forest(rng));
    CHECK(run("transform --in " + in.string() + " --out " + out.string())
              .exit_code == 0);
    CHECK(run("validate --in " + out.string()).exit_code == 0);
  }
}

TEST_CASE("codegen fails with exit 3 when the output dir is unwritable") {
  const fs::path blocker = scratch_dir() / "blocker";
  std::ofstream(blocker).put('x'); // a plain file where a directory must go
  const RunResult result =
      run("codegen --in " + fixture("golden_psm.xmi") + " --out " +
          (blocker / "sub").string());
  CHECK(result.exit_code == 3);
}
