#include <doctest.h>

#include <algorithm>

#include "slices.hpp"
#include "varscope/extractor.hpp"

using namespace varscope;

namespace {

const PresenceCondition A = PresenceCondition::atom("A");
const PresenceCondition B = PresenceCondition::atom("B");

struct Extracted {
  UnitScan scan;
  std::vector<ExtractedEntity> entities;
  std::vector<std::string> ids;
  Diagnostics diags;
};

Extracted extract(const std::string& source, const std::string& path = "t.c") {
  MemoryTree tree(std::map<std::string, std::string>{{path, source}});
  Extracted e;
  e.scan = scan_unit(tree, path);
  e.entities = extract_entities(e.scan, e.diags);
  e.ids = assign_ids(path, e.entities);
  return e;
}

const ExtractedEntity* named(const Extracted& e, std::string_view name) {
  for (const auto& x : e.entities)
    if (x.name == name) return &x;
  return nullptr;
}

}  // namespace

TEST_CASE("static global at file scope") {
  const auto e = extract("static int counter;\n");
  REQUIRE(e.entities.size() == 1);
  CHECK(e.entities[0].kind == EntityKind::GlobalVariable);
  CHECK(e.entities[0].name == "counter");
  CHECK(e.entities[0].pc.is_true());
  CHECK(e.entities[0].is_static);
  CHECK(e.ids[0] == "t.c!var!counter");
}

TEST_CASE("function definitions, prototypes and typedefs") {
  const auto e = extract(
      "typedef int myint;\n"
      "int proto(int a);\n"
      "int a, *b, c[3] = {1, 2, 3};\n"
      "static int f(int x, char **argv)\n"
      "{\n"
      "  int local = x;\n"
      "\n"
      "  return local;\n"
      "}\n");
  std::vector<std::string> names;
  for (const auto& x : e.entities) names.push_back(x.name);
  CHECK(names == std::vector<std::string>{"a", "b", "c", "f"});
  const auto* f = named(e, "f");
  REQUIRE(f);
  CHECK(f->kind == EntityKind::Function);
  CHECK(f->start_line == 4);
  CHECK(f->end_line == 9);
  CHECK(f->loc == 5);
  REQUIRE(f->bodies.size() == 1);
  CHECK(e.scan.tokens[f->bodies[0].open].token.text == "{");
  CHECK(e.scan.tokens[f->bodies[0].close].token.text == "}");
}

TEST_CASE("composites, nested and anonymous") {
  const auto e = extract(
      "struct outer {\n"
      "  union inner { int i; float f; } u;\n"
      "  struct { int x; } anon;\n"
      "};\n"
      "enum color { RED, GREEN };\n"
      "struct outer instance;\n");
  const auto* outer = named(e, "outer");
  const auto* inner = named(e, "inner");
  const auto* color = named(e, "color");
  REQUIRE(outer);
  REQUIRE(inner);
  REQUIRE(color);
  CHECK(outer->kind == EntityKind::Struct);
  CHECK(inner->kind == EntityKind::Union);
  CHECK(color->kind == EntityKind::Enum);
  CHECK(e.entities[static_cast<std::size_t>(inner->parent)].name == "outer");
  const auto anon = anonymous_name(EntityKind::Struct, "t.c", 3);
  CHECK(anon == "anon_struct_t_c_3");
  const auto* a = named(e, anon);
  REQUIRE(a);
  CHECK(e.entities[static_cast<std::size_t>(a->parent)].name == "outer");
  CHECK(named(e, "instance"));
  CHECK(named(e, "RED") == nullptr);
}

TEST_CASE("same function in both branches gets two entities") {
  const auto e = extract("#if A\nint f(void) { return 1; }\n#else\nint f(void) { return 0; }\n#endif\n");
  REQUIRE(e.entities.size() == 2);
  CHECK(e.entities[0].pc == A);
  CHECK(e.entities[1].pc == !A);
  CHECK(e.ids[0] == "t.c!fn!f@branch0");
  CHECK(e.ids[1] == "t.c!fn!f@branch1");
}

TEST_CASE("a header split across branches") {
  const auto e = extract(
      "#if A\n"
      "int g(int x)\n"
      "#else\n"
      "int g(long x)\n"
      "#endif\n"
      "{\n"
      "  return 0;\n"
      "}\n");
  REQUIRE(e.entities.size() == 2);
  CHECK(e.entities[0].pc == A);
  CHECK(e.entities[1].pc == !A);
  for (const auto& x : e.entities) CHECK(x.end_line == 8);
}

TEST_CASE("an optional specifier splits the entity per branch") {
  const auto e = extract("#ifdef A\nstatic\n#endif\nint v;\n");
  REQUIRE(e.entities.size() == 2);
  CHECK_FALSE(satisfiable(e.entities[0].pc && e.entities[1].pc));
  CHECK(is_tautology(e.entities[0].pc || e.entities[1].pc));
  CHECK(e.ids[0] == "t.c!var!v@branch0");
  CHECK(e.ids[1] == "t.c!var!v@branch1");
  CHECK(e.entities[0].is_static != e.entities[1].is_static);
}

TEST_CASE("nested pcs and conditional members") {
  const auto e = extract("#if A\n#if B\nint both;\n#endif\nint only_a;\n#endif\n");
  REQUIRE(e.entities.size() == 2);
  CHECK(named(e, "both")->pc == (A && B));
  CHECK(named(e, "only_a")->pc == A);
}

TEST_CASE("unbalanced braces skip the tail") {
  const auto e = extract("int ok;\nint f(void) {\n  if (x) {\n}\n");
  CHECK(e.diags.contains("SkippedTail"));
  CHECK(named(e, "ok"));
}

TEST_CASE("K&R definitions are reported") {
  const auto e = extract("int old(a, b)\n  int a; int b;\n{\n  return a;\n}\nint after;\n");
  CHECK(e.diags.contains("KnRDefinition"));
  CHECK(named(e, "after"));
}

TEST_CASE("count_loc skips blank lines") {
  const auto e = extract("int f(void)\n{\n\n  /* c */\n  return 0;\n}\n");
  CHECK(count_loc(e.scan, 1, 6) == 4);
  CHECK(named(e, "f")->loc == 4);
}

TEST_CASE("loc is stable under sibling reordering") {
  const std::string f = "int f(int a)\n{\n  a++;\n  return a;\n}\n";
  const std::string g = "#ifdef A\nint g;\n#endif\nvoid h(void) {\n}\n";
  const auto e1 = extract(f + g);
  const auto e2 = extract(g + f);
  for (const auto* name : {"f", "g", "h"}) {
    REQUIRE(named(e1, name));
    REQUIRE(named(e2, name));
    CHECK(named(e1, name)->loc == named(e2, name)->loc);
    CHECK(named(e1, name)->pc == named(e2, name)->pc);
  }
}

TEST_CASE("entities split by slice equivalence against the oracle") {
  const std::string source =
      "#if A\nint f(void) { return 1; }\n#else\nint f(void) { return 0; }\n#endif\n"
      "#ifdef B\nstruct s { int x; };\n#endif\n";
  const auto e = extract(source);
  for (int mask = 0; mask < 4; ++mask) {
    std::set<std::string> enabled;
    Configuration config;
    if (mask & 1) enabled.insert("A"), config.enable("A");
    if (mask & 2) enabled.insert("B"), config.enable("B");
    std::set<slices::Key> ours;
    for (const auto& x : e.entities)
      if (evaluate(x.pc, config)) ours.insert({x.kind, x.name, x.start_line, x.end_line});
    CHECK(ours == slices::oracle_entities(source, enabled));
  }
}

TEST_CASE("sibling function spans are disjoint") {
  const auto e = extract("int a(void) { return 0; }\nint b(void)\n{\n  return 1;\n}\nint c(void) { return 2; }\n");
  std::vector<const ExtractedEntity*> fns;
  for (const auto& x : e.entities)
    if (x.kind == EntityKind::Function) fns.push_back(&x);
  REQUIRE(fns.size() == 3);
  for (std::size_t i = 1; i < fns.size(); ++i) CHECK(fns[i - 1]->end_line < fns[i]->start_line);
}
