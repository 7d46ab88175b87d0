#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lasem/fixtures.hpp"
#include "lasem/serialize.hpp"
#include "test_util.hpp"

using namespace lasem;

namespace {

struct CliResult {
  int exit_code = -1;
  std::string output;  // stdout only
};

CliResult run_cli(const std::string& args, bool prepend_binary = true) {
  const std::string command =
      (prepend_binary ? std::string(LASEM_CLI_PATH) + " " + args : args) +
      " 2>/dev/null";
  FILE* pipe = popen(command.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CliResult result;
  char buffer[4096];
  std::size_t read = 0;
  while ((read = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
    result.output.append(buffer, read);
  }
  const int status = pclose(pipe);
  result.exit_code = WEXITSTATUS(status);
  return result;
}

std::filesystem::path scratch_dir() {
  const auto dir = std::filesystem::temp_directory_path() / "lasem_cli_tests";
  std::filesystem::create_directories(dir);
  return dir;
}

std::string write_fixture_file(const std::string& id) {
  const Fixture fix = fixture(id);
  const auto path = scratch_dir() / (id + ".json");
  std::ofstream stream(path, std::ios::binary);
  stream << serialize_config({fix.universe, fix.config});
  return path.string();
}

std::string write_text(const std::string& name, const std::string& text) {
  const auto path = scratch_dir() / name;
  std::ofstream stream(path, std::ios::binary);
  stream << text;
  return path.string();
}

}  // namespace

TEST_CASE("validate exits 0 on a valid document") {
  const auto result = run_cli("validate " + write_fixture_file("fg_loop"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"ok\": true") != std::string::npos);
}

TEST_CASE("validate accepts a configuration without layers") {
  const auto path = write_text("empty.json",
                               R"({"services": [], "ports": [],
                                   "layers": [], "attachment": []})");
  CHECK(run_cli("validate " + path).exit_code == 0);
}

TEST_CASE("syntax and schema problems exit 2") {
  const auto broken = write_text("broken.json", "{ nope");
  CHECK(run_cli("validate " + broken).exit_code == 2);

  const auto extra = write_text("extra.json",
                                R"({"services": [], "ports": [],
                                    "layers": [], "attachment": [],
                                    "bogus": 0})");
  CHECK(run_cli("validate " + extra).exit_code == 2);
}

TEST_CASE("constraint violations exit 2 and block analysis") {
  const auto invalid = write_text("incompatible.json", R"({
    "services": ["A", "B"],
    "ports": [{"id": "i", "direction": "in", "type": ["A"]},
              {"id": "o", "direction": "out", "type": ["A", "B"]}],
    "layers": [{"name": "l", "inputs": ["i"], "outputs": ["o"],
                "behavior": [{"input": {"i": "A"}, "outputs": []}]}],
    "attachment": [{"input": "i", "output": "o"}]
  })");
  CHECK(run_cli("validate " + invalid).exit_code == 2);
  const auto analysis = run_cli("syndep " + invalid);
  CHECK(analysis.exit_code == 2);
  CHECK(analysis.output.find("incompatible attachment") != std::string::npos);
}

TEST_CASE("eval reproduces the worked example") {
  const auto path = write_fixture_file("fg_loop");
  const auto result =
      run_cli("eval " + path + " --layer l_f --input i0=B,i1=D");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"o0\": \"C\"") != std::string::npos);
  CHECK(result.output.find("\"o0p\": \"X\"") != std::string::npos);
}

TEST_CASE("eval rejects a wrong input domain with exit 2") {
  const auto path = write_fixture_file("fg_loop");
  CHECK(run_cli("eval " + path + " --layer l_f --input i0=B").exit_code == 2);
  CHECK(run_cli("eval " + path + " --layer nope --input i0=B,i1=D")
            .exit_code == 2);
}

TEST_CASE("oversized state spaces exit 3") {
  // One layer with 21 two-typed outputs: 2^21 closure valuations.
  Model model;
  model.universe.add_service("A");
  model.universe.add_service("B");
  BehaviorTable wide;
  for (int i = 0; i < 21; ++i) {
    const PortId id = "o" + std::to_string(i + 10);
    model.universe.add_port(id, PortDirection::output, {"A", "B"});
    wide.output_ports.insert(id);
  }
  wide.rows.emplace(Valuation{}, std::set<Valuation>{});
  model.config.add_layer(make_layer("wide", std::move(wide)));
  const auto path = write_text("wide.json", serialize_config(model));
  CHECK(run_cli("eval " + path + " --layer wide --input \"\"").exit_code == 3);
}

TEST_CASE("semdep obeys the table budget") {
  const auto path = write_fixture_file("fg_loop");
  const auto full = run_cli("semdep " + path);
  CHECK(full.exit_code == 0);
  CHECK(full.output.find("\"skipped\": []") != std::string::npos);

  const auto skipped = run_cli("semdep " + path + " --budget 16");
  CHECK(skipped.exit_code == 3);
  CHECK(skipped.output.find("\"tables\": 256") != std::string::npos);
}

TEST_CASE("check passes on the worked example and fails on the boundary") {
  CHECK(run_cli("check " + write_fixture_file("fg_loop")).exit_code == 0);

  // A portless layer is usable but immune to updates: the containment
  // theorem for usable configurations genuinely fails there.
  const auto boundary = write_text("portless.json", R"({
    "services": [],
    "ports": [],
    "layers": [{"name": "l", "inputs": [], "outputs": [],
                "behavior": [{"input": {}, "outputs": [{}]}]}],
    "attachment": []
  })");
  const auto result = run_cli("check " + boundary);
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("\"theorem1\": \"failed\"") != std::string::npos);
  CHECK(result.output.find("\"theorem2\": \"passed\"") != std::string::npos);
}

TEST_CASE("check reports the non-usable counterexample without failing") {
  const auto result =
      run_cli("check " + write_fixture_file("empty_type_self_loop"));
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"usable\": false") != std::string::npos);
  CHECK(result.output.find("\"theorem2\": \"passed\"") != std::string::npos);
  CHECK(result.output.find("\"rt_closure_in_semantic\": false") !=
        std::string::npos);
}

TEST_CASE("check exits 3 when only budget skips remain") {
  const auto path = write_fixture_file("fg_loop");
  CHECK(run_cli("check " + path + " --budget 16").exit_code == 3);
}

TEST_CASE("LASEM_BUDGET sets the default table budget") {
  const auto path = write_fixture_file("fg_loop");
  CHECK(run_cli("env LASEM_BUDGET=16 " + std::string(LASEM_CLI_PATH) +
                " check " + path,
                /*prepend_binary=*/false)
            .exit_code == 3);
  // An explicit flag wins over the environment.
  CHECK(run_cli("env LASEM_BUDGET=16 " + std::string(LASEM_CLI_PATH) +
                " check " + path + " --budget 4096",
                /*prepend_binary=*/false)
            .exit_code == 0);
}

TEST_CASE("closure rejects unknown layers with exit 2") {
  const auto path = write_fixture_file("fg_loop");
  CHECK(run_cli("closure " + path + " --layer nope").exit_code == 2);
  const auto good = run_cli("closure " + path + " --layer l_f");
  CHECK(good.exit_code == 0);
  CHECK(good.output.find("\"o1\"") == std::string::npos);
  CHECK(good.output.find("\"o1p\"") != std::string::npos);
}

TEST_CASE("dot emits a digraph") {
  const auto path = write_fixture_file("three_chain");
  const auto result = run_cli("dot " + path + " --relation sem");
  CHECK(result.exit_code == 0);
  CHECK(result.output.rfind("digraph layered {", 0) == 0);
  CHECK(result.output.find("\"l\" -> \"lpp\";") != std::string::npos);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto path = write_fixture_file("fg_loop");
  const std::vector<std::string> invocations = {
      "check " + path,
      "semdep " + path,
      "fixtures",
      "eval " + path + " --layer l_g --input i0=B,i1=D",
      "fuzz --seeds 5",
  };
  for (const auto& args : invocations) {
    CHECK(run_cli(args).output == run_cli(args).output);
  }
}

TEST_CASE("emitted fixture files validate and match the library serializer") {
  const auto dir = (scratch_dir() / "emitted").string();
  const auto listing = run_cli("fixtures --emit " + dir);
  REQUIRE(listing.exit_code == 0);

  for (const auto& id : fixture_ids()) {
    std::string name;
    for (char c : id) {
      if (c == '(') {
        name.push_back('_');
      } else if (c != ')') {
        name.push_back(c);
      }
    }
    const auto path = (std::filesystem::path(dir) / (name + ".json")).string();
    CHECK(run_cli("validate " + path).exit_code == 0);

    std::ifstream stream(path, std::ios::binary);
    std::ostringstream content;
    content << stream.rdbuf();
    const Fixture fix = fixture(id);
    CHECK(content.str() == serialize_config({fix.universe, fix.config}));
  }
}

TEST_CASE("fuzz reports zero violations on the default population") {
  const auto result = run_cli("fuzz --seeds 25 --bounds 3,2,2,4");
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("\"violations\": []") != std::string::npos);
}

TEST_CASE("missing files and unknown flags exit 2") {
  CHECK(run_cli("validate /nonexistent/nope.json").exit_code == 2);
  CHECK(run_cli("bogus-subcommand").exit_code == 2);
  CHECK(run_cli("dot somefile --relation nope").exit_code == 2);
}
