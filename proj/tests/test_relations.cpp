#include <doctest.h>

#include <algorithm>

#include "varscope/analysis.hpp"

using namespace varscope;

namespace {

const PresenceCondition A = PresenceCondition::atom("A");
const PresenceCondition B = PresenceCondition::atom("B");

VariabilityModel model_of(std::map<std::string, std::string> files) {
  MemoryTree tree(std::move(files));
  return analyze(tree);
}

std::vector<const Relation*> find(const VariabilityModel& m, RelationKind kind, std::string_view source,
                                  std::string_view target) {
  std::vector<const Relation*> out;
  for (const auto& r : m.relations)
    if (r.kind == kind && r.source == source && r.target == target) out.push_back(&r);
  return out;
}

bool has(const VariabilityModel& m, RelationKind kind, std::string_view source, std::string_view target) {
  return !find(m, kind, source, target).empty();
}

}  // namespace

TEST_CASE("a call to a known function has a site") {
  const auto m = model_of({{"a.c", "int obj_load(const char *p) { return 0; }\nvoid run(void)\n{\n  obj_load(path);\n}\n"}});
  const auto calls = find(m, RelationKind::Calls, "a.c!fn!run", "a.c!fn!obj_load");
  REQUIRE(calls.size() == 1);
  REQUIRE(calls[0]->sites.size() == 1);
  CHECK(calls[0]->sites[0] == SourceLocation{"a.c", 4});
  CHECK(calls[0]->pc.is_true());
}

TEST_CASE("nested calls give two edges") {
  const auto m = model_of({{"a.c", "int f(int x) { return x; }\nint g(int x) { return x; }\nint h(int x) { return f(g(x)); }\n"}});
  CHECK(has(m, RelationKind::Calls, "a.c!fn!h", "a.c!fn!f"));
  CHECK(has(m, RelationKind::Calls, "a.c!fn!h", "a.c!fn!g"));
}

TEST_CASE("call site pc conjoins caller, site and callee") {
  const auto m = model_of({{"a.c",
                            "void callee(void) { }\n"
                            "#if A\n"
                            "void caller(void)\n"
                            "{\n"
                            "#if B\n"
                            "  callee();\n"
                            "#endif\n"
                            "}\n"
                            "#endif\n"}});
  const auto calls = find(m, RelationKind::Calls, "a.c!fn!caller", "a.c!fn!callee");
  REQUIRE(calls.size() == 1);
  CHECK(calls[0]->pc == (A && B));
}

TEST_CASE("keywords and unknown names are not calls") {
  const auto m = model_of({{"a.c", "int f(int x) { if (x) return sizeof(x); while (0) { } return printf(\"\"); }\n"}});
  for (const auto& r : m.relations) CHECK(r.kind != RelationKind::Calls);
}

TEST_CASE("cross-unit calls, static visibility and same-unit precedence") {
  const auto m = model_of({{"a.c", "void shared(void) { }\nstatic void hidden(void) { }\n"},
                           {"b.c", "void use(void) { shared(); hidden(); }\n"},
                           {"c.c", "void shared(void) { }\nvoid use_local(void) { shared(); }\n"}});
  CHECK(has(m, RelationKind::Calls, "b.c!fn!use", "a.c!fn!shared"));
  CHECK_FALSE(has(m, RelationKind::Calls, "b.c!fn!use", "a.c!fn!hidden"));
  CHECK(has(m, RelationKind::Calls, "c.c!fn!use_local", "c.c!fn!shared"));
  CHECK_FALSE(has(m, RelationKind::Calls, "c.c!fn!use_local", "a.c!fn!shared"));
}

TEST_CASE("reads, writes and compound assignment") {
  const auto m = model_of({{"a.c",
                            "int counter;\n"
                            "void reset(void) { counter = 0; }\n"
                            "int next(void) { int x; x = counter + 1; return x; }\n"
                            "void bump(void) { counter += 2; }\n"
                            "void inc(void) { counter++; }\n"}});
  const std::string c = "a.c!var!counter";
  CHECK(has(m, RelationKind::Writes, "a.c!fn!reset", c));
  CHECK_FALSE(has(m, RelationKind::Reads, "a.c!fn!reset", c));
  CHECK(has(m, RelationKind::Reads, "a.c!fn!next", c));
  CHECK_FALSE(has(m, RelationKind::Writes, "a.c!fn!next", c));
  CHECK(has(m, RelationKind::Reads, "a.c!fn!bump", c));
  CHECK(has(m, RelationKind::Writes, "a.c!fn!bump", c));
  CHECK(has(m, RelationKind::Writes, "a.c!fn!inc", c));
}

TEST_CASE("subscripts and dereferences write the base") {
  const auto m = model_of({{"a.c", "int table[4];\nint *ptr;\nvoid f(void) { table[1] = 2; *ptr = 3; }\n"}});
  CHECK(has(m, RelationKind::Writes, "a.c!fn!f", "a.c!var!table"));
  CHECK(has(m, RelationKind::Writes, "a.c!fn!f", "a.c!var!ptr"));
}

TEST_CASE("locals and parameters shadow globals") {
  const auto m = model_of({{"a.c", "int g;\nint h;\nvoid f(int g) { int h = 1; g = h; }\n"}});
  CHECK_FALSE(has(m, RelationKind::Writes, "a.c!fn!f", "a.c!var!g"));
  CHECK_FALSE(has(m, RelationKind::Reads, "a.c!fn!f", "a.c!var!h"));
}

TEST_CASE("relations with unsatisfiable pcs are dropped") {
  const auto m = model_of({{"a.c",
                            "#if A\nint only_a;\n#endif\n"
                            "#if !A\nvoid f(void) { only_a = 1; }\n#endif\n"}});
  for (const auto& r : m.relations) CHECK(r.kind == RelationKind::Contains);
  CHECK(std::any_of(m.diagnostics.begin(), m.diagnostics.end(),
                    [](const Diagnostic& d) { return d.code == "UnsatisfiableRelation"; }));
}

TEST_CASE("relation endpoints exist and contains edges form a forest") {
  const auto m = model_of({{"a.c", "struct s { struct t { int x; } in; };\nint v;\nvoid f(void) { v = 1; }\n"},
                           {"b.c", "void g(void) { f(); }\n"}});
  std::map<std::string, int> contained;
  for (const auto& r : m.relations) {
    REQUIRE(m.find(r.source));
    REQUIRE(m.find(r.target));
    CHECK(satisfiable(r.pc));
    if (r.kind == RelationKind::Contains) ++contained[r.target];
  }
  for (const auto& e : m.entities) {
    if (e.kind == EntityKind::TranslationUnit) {
      CHECK(contained.count(e.id) == 0);
      continue;
    }
    CHECK(contained[e.id] == 1);
    CHECK(has(m, RelationKind::Contains, e.parent, e.id));
  }
}
