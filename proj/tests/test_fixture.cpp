#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "varscope/analysis.hpp"
#include "varscope/layout.hpp"

using namespace varscope;

namespace {

const std::vector<std::string> kFindFlags{"FEATURE_FIND_EXEC",  "FEATURE_FIND_MTIME", "FEATURE_FIND_PERM",
                                          "FEATURE_FIND_PRINT0", "FEATURE_FIND_TYPE", "FEATURE_FIND_XDEV"};

/// Entities that only exist with FEATURE_FIND_EXEC or FEATURE_FIND_XDEV,
/// audited by hand against the fixture source.
const std::set<std::string> kExecOrXdev{
    "coreutils/find.c!fn!func_exec",          "coreutils/find.c!var!exec_argv",
    "coreutils/find.c!struct!exec_args",      "coreutils/find.c!fn!func_xdev",
    "coreutils/find.c!var!xdev_dev",          "coreutils/find.c!fn!exec_on_same_dev",
    "libbb/recursive_action.c!fn!same_device", "libbb/recursive_action.c!var!xdev_count",
    "libbb/xfuncs.c!fn!spawn_and_wait",        "libbb/xfuncs.c!var!spawn_count",
};

/// Entities present in every configuration.
const std::set<std::string> kUnconditional{
    "coreutils/find.c!tu!find.c",
    "coreutils/find.c!enum!action_kind",
    "coreutils/find.c!fn!file_action",
    "coreutils/find.c!fn!find_main",
    "coreutils/find.c!fn!find_usage",
    "coreutils/find.c!fn!func_name",
    "coreutils/find.c!fn!func_print",
    "coreutils/find.c!struct!action",
    "coreutils/find.c!struct!anon_struct_coreutils_find_c_35",
    "coreutils/find.c!struct!globals",
    "coreutils/find.c!var!G",
    "coreutils/find.c!var!find_depth",
    "coreutils/find.c!var!find_limits",
    "libbb/recursive_action.c!tu!recursive_action.c",
    "libbb/recursive_action.c!fn!recursive_action",
    "libbb/recursive_action.c!fn!true_action",
    "libbb/recursive_action.c!var!walk_depth",
    "libbb/xfuncs.c!tu!xfuncs.c",
    "libbb/xfuncs.c!fn!bb_error_msg",
    "libbb/xfuncs.c!fn!bb_show_usage",
    "libbb/xfuncs.c!fn!xstat",
};

AnalysisOptions fixture_options() {
  AnalysisOptions opts;
  opts.scan.include_paths = {"include"};
  opts.input_root = "mini_spl";
  opts.timestamp = 0;
  return opts;
}

const VariabilityModel& fixture() {
  static const VariabilityModel model = [] {
    DirectoryTree tree(VARSCOPE_FIXTURE_DIR);
    return analyze(tree, fixture_options());
  }();
  return model;
}

std::set<std::string> included(const Configuration& config) {
  const auto& m = fixture();
  const auto map = evaluate_configuration(m, config);
  std::set<std::string> out;
  for (std::size_t i = 0; i < m.entities.size(); ++i)
    if (map.entities[i]) out.insert(m.entities[i].id);
  return out;
}

std::set<std::string> all_ids() {
  std::set<std::string> out;
  for (const auto& e : fixture().entities) out.insert(e.id);
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void check_golden(const std::string& name, const std::string& actual) {
  const std::filesystem::path path = std::filesystem::path(VARSCOPE_GOLDEN_DIR) / name;
  if (std::getenv("VARSCOPE_UPDATE_GOLDEN")) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream(path, std::ios::binary) << actual;
  }
  REQUIRE_MESSAGE(std::filesystem::exists(path), "missing golden " << path);
  CHECK(read_file(path) == actual);
}

}  // namespace

TEST_CASE("fixture inventory") {
  const auto& m = fixture();
  CHECK(m.unit_count() == 3);
  CHECK(m.features == kFindFlags);
  CHECK(m.diagnostics.empty());
  for (const auto& id : kExecOrXdev) CHECK_MESSAGE(m.find(id), id);
  for (const auto& id : kUnconditional) {
    REQUIRE_MESSAGE(m.find(id), id);
    CHECK(m.find(id)->pc.is_true());
  }
}

TEST_CASE("all find features enabled includes every entity") {
  CHECK(included(Configuration::enabling(kFindFlags)) == all_ids());
}

TEST_CASE("all but EXEC and XDEV excludes exactly the audited list") {
  Configuration config;
  for (const auto& f : kFindFlags)
    if (f != "FEATURE_FIND_EXEC" && f != "FEATURE_FIND_XDEV") config.enable(f);
  const auto in = included(config);
  std::set<std::string> out;
  for (const auto& id : all_ids())
    if (!in.count(id)) out.insert(id);
  CHECK(out == kExecOrXdev);
  const auto diff = diff_configurations(fixture(), Configuration::enabling(kFindFlags), config);
  CHECK(std::set<std::string>(diff.only_in_a.begin(), diff.only_in_a.end()) == kExecOrXdev);
  CHECK(diff.only_in_b.empty());
}

TEST_CASE("all find features disabled leaves the unconditional entities") {
  CHECK(included(Configuration{}) == kUnconditional);
}

TEST_CASE("every guarded entity depends on a find feature") {
  for (const auto& e : fixture().entities) {
    if (e.pc.is_true()) continue;
    bool mentions = false;
    for (const auto& a : e.pc.atoms()) mentions |= a.rfind("FEATURE_FIND_", 0) == 0;
    CHECK_MESSAGE(mentions, e.id);
  }
}

TEST_CASE("impact of a single feature") {
  const auto impact = feature_impact(fixture(), "FEATURE_FIND_PRINT0");
  CHECK(impact.entities == std::vector<std::string>{"coreutils/find.c!fn!func_print0", "coreutils/find.c!var!print0_sep"});
  CHECK(impact.total_units == 3);
}

TEST_CASE("golden model") {
  auto model = fixture();
  model.meta.tool_version.clear();  // the golden outlives version bumps
  check_golden("mini_spl.model.json", model_to_json(model));
}

TEST_CASE("golden layout") { check_golden("mini_spl.layout.json", layout_to_json(compute_layout(fixture()))); }

TEST_CASE("analysis is deterministic") {
  DirectoryTree tree(VARSCOPE_FIXTURE_DIR);
  const auto again = analyze(tree, fixture_options());
  CHECK(model_to_json(again) == model_to_json(fixture()));
  CHECK(layout_to_json(compute_layout(again)) == layout_to_json(compute_layout(fixture())));
}
