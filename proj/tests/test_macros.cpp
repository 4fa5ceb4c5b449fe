#include <doctest.h>

#include "varscope/macros.hpp"

using namespace varscope;

namespace {

const PresenceCondition kDesktop = PresenceCondition::atom("CONFIG_DESKTOP");

void define(MacroTable& table, std::string_view text, const PresenceCondition& pc = {}) {
  Diagnostics diags;
  REQUIRE(define_directive(table, text, pc, {"t.c", 1}, diags));
}

/// Tokens present under `config`, spelled with single spaces.
std::string slice(const std::vector<PcToken>& toks, const Configuration& config = Configuration{}) {
  std::string out;
  for (const auto& t : toks) {
    if (!evaluate(t.pc, config)) continue;
    if (!out.empty()) out += ' ';
    out += t.token.text;
  }
  return out;
}

std::vector<PcToken> expand(const MacroTable& table, std::string_view text, Diagnostics& diags,
                            const PresenceCondition& context = {}) {
  MacroExpander expander(table, diags, "t.c");
  return expander.expand(tokenize(text, 1, 1), context);
}

Configuration desktop_on() {
  Configuration c;
  c.enable("CONFIG_DESKTOP");
  return c;
}

void define_desktop_variants(MacroTable& table) {
  define(table, "IF_DESKTOP(...) __VA_ARGS__", kDesktop);
  define(table, "IF_DESKTOP(...)", !kDesktop);
}

}  // namespace

TEST_CASE("object and function-like definitions") {
  MacroTable table;
  define(table, "MAX 10");
  define(table, "F (x)");
  define(table, "G(x, y) x##y");
  define(table, "V(fmt, args...) fmt args");
  const auto* max = table.active_definition("MAX", Configuration{});
  REQUIRE(max);
  CHECK_FALSE(max->function_like);
  CHECK(max->pc.is_true());
  const auto* f = table.active_definition("F", Configuration{});
  REQUIRE(f);
  CHECK_FALSE(f->function_like);
  CHECK(spell(f->body) == "(x)");
  const auto* g = table.active_definition("G", Configuration{});
  REQUIRE(g);
  CHECK(g->function_like);
  CHECK(g->parameters == std::vector<std::string>{"x", "y"});
  const auto* v = table.active_definition("V", Configuration{});
  REQUIRE(v);
  CHECK(v->variadic);
  CHECK(v->variadic_name() == "args");
  CHECK(table.concrete_names() == std::set<std::string>{"F", "G", "MAX", "V"});
}

TEST_CASE("malformed defines are reported and ignored") {
  MacroTable table;
  Diagnostics diags;
  CHECK_FALSE(define_directive(table, "", {}, {"t.c", 3}, diags));
  CHECK_FALSE(define_directive(table, "123 x", {}, {"t.c", 4}, diags));
  CHECK_FALSE(define_directive(table, "F(a, a) a", {}, {"t.c", 5}, diags));
  CHECK(diags.count("MalformedDefine") == 3);
  CHECK(table.names().empty());
}

TEST_CASE("complementary variants and active_definition") {
  MacroTable table;
  define_desktop_variants(table);
  const auto* on = table.active_definition("IF_DESKTOP", desktop_on());
  REQUIRE(on);
  CHECK(spell(on->body) == "__VA_ARGS__");
  const auto* off = table.active_definition("IF_DESKTOP", Configuration{});
  REQUIRE(off);
  CHECK(off->body.empty());
  CHECK(table.active_definition("NEVER", Configuration{}) == nullptr);
  CHECK(table.concrete_names().empty());

  const auto alts = table.alternatives("IF_DESKTOP", PresenceCondition{});
  REQUIRE(alts.size() == 2);
  CHECK_FALSE(satisfiable(alts[0].condition && alts[1].condition));
  CHECK(is_tautology(alts[0].condition || alts[1].condition));
  CHECK(table.alternatives("IF_DESKTOP", kDesktop).size() == 1);
}

TEST_CASE("undef erases earlier definitions where it holds") {
  MacroTable table;
  define(table, "X 1");
  table.undefine("X", kDesktop, {"t.c", 2});
  CHECK(table.active_definition("X", Configuration{}) != nullptr);
  CHECK(table.active_definition("X", desktop_on()) == nullptr);
  const auto alts = table.alternatives("X", PresenceCondition{});
  REQUIRE(alts.size() == 2);
  int undefined = 0;
  for (const auto& a : alts) undefined += a.state == MacroAlternative::State::Undefined;
  CHECK(undefined == 1);
  CHECK(table.alternatives("NOPE", PresenceCondition{}).front().state == MacroAlternative::State::Free);
}

TEST_CASE("later definitions shadow earlier ones") {
  MacroTable table;
  define(table, "N 1");
  define(table, "N 2", kDesktop);
  CHECK(spell(table.active_definition("N", Configuration{})->body) == "1");
  CHECK(spell(table.active_definition("N", desktop_on())->body) == "2");
}

TEST_CASE("plain expansion") {
  MacroTable table;
  define(table, "MAX 10");
  define(table, "F(x, y) x##y");
  define(table, "STR(x) #x");
  define(table, "CALL(f, ...) f(__VA_ARGS__)");
  define(table, "TWICE(x) x + x");
  Diagnostics diags;
  CHECK(slice(expand(table, "MAX + 1", diags)) == "10 + 1");
  CHECK(slice(expand(table, "F(a, b)", diags)) == "ab");
  CHECK(slice(expand(table, "STR(a  +  b)", diags)) == "\"a + b\"");
  CHECK(slice(expand(table, "CALL(g, 1, 2)", diags)) == "g ( 1 , 2 )");
  CHECK(slice(expand(table, "TWICE(MAX)", diags)) == "10 + 10");
  CHECK(slice(expand(table, "F", diags)) == "F");
  CHECK(slice(expand(table, "__LINE__ __FILE__", diags)) == "0 \"__FILE__\"");
  CHECK(diags.empty());
}

TEST_CASE("self reference is painted blue and terminates") {
  MacroTable table;
  define(table, "foo foo + 1");
  define(table, "a b");
  define(table, "b a");
  define(table, "f(x) f(x)");
  Diagnostics diags;
  CHECK(slice(expand(table, "foo", diags)) == "foo + 1");
  CHECK(slice(expand(table, "a", diags)) == "a");
  CHECK(slice(expand(table, "f(1)", diags)) == "f ( 1 )");
}

TEST_CASE("expansion depth cap") {
  MacroTable table;
  // a chain longer than the cap
  for (int i = 0; i < 300; ++i) define(table, "M" + std::to_string(i) + " M" + std::to_string(i + 1));
  Diagnostics diags;
  const auto out = expand(table, "M0", diags);
  CHECK(diags.contains("ExpansionDepthExceeded"));
  CHECK_FALSE(out.empty());
}

TEST_CASE("argument count mismatch leaves the invocation") {
  MacroTable table;
  define(table, "TWO(a, b) a b");
  Diagnostics diags;
  CHECK(slice(expand(table, "TWO(1)", diags)) == "TWO ( 1 )");
  CHECK(diags.contains("ArgumentCountMismatch"));
}

TEST_CASE("variational expansion tags tokens with the variant pc") {
  MacroTable table;
  define_desktop_variants(table);
  Diagnostics diags;
  const auto out = expand(table, "x; IF_DESKTOP(runtime_check();) y;", diags);
  CHECK(slice(out, desktop_on()) == "x ; runtime_check ( ) ; y ;");
  CHECK(slice(out, Configuration{}) == "x ; y ;");
  for (const auto& t : out)
    if (t.token.text == "runtime_check") CHECK(t.pc == kDesktop);
}

TEST_CASE("variational object macros inside a context") {
  MacroTable table;
  define(table, "ENABLE_DESKTOP 1", kDesktop);
  define(table, "ENABLE_DESKTOP 0", !kDesktop);
  Diagnostics diags;
  const auto out = expand(table, "int v = ENABLE_DESKTOP;", diags);
  CHECK(slice(out, desktop_on()) == "int v = 1 ;");
  CHECK(slice(out, Configuration{}) == "int v = 0 ;");
  // In a context that already decides the variant no split happens.
  const auto narrowed = expand(table, "ENABLE_DESKTOP", diags, kDesktop);
  REQUIRE(narrowed.size() == 1);
  CHECK(narrowed[0].token.text == "1");
}

TEST_CASE("condition parser splits by macro variant") {
  MacroTable table;
  define(table, "ENABLE_DESKTOP 1", kDesktop);
  define(table, "ENABLE_DESKTOP 0", !kDesktop);
  Diagnostics diags;
  ConditionParser parser(table, diags);
  const auto pc = parser.parse("ENABLE_DESKTOP", {}, {"t.c", 1});
  CHECK(evaluate(pc, desktop_on()));
  CHECK_FALSE(evaluate(pc, Configuration{}));
  CHECK(atoms(pc) == std::set<std::string>{"CONFIG_DESKTOP"});
  CHECK(diags.empty());
}

TEST_CASE("defined operands are never expanded") {
  MacroTable table;
  define(table, "ALIAS OTHER");
  Diagnostics diags;
  ConditionParser parser(table, diags);
  CHECK(parser.parse("defined(ALIAS)", {}, {"t.c", 1}).is_true());
  CHECK(parser.parse("defined OTHER", {}, {"t.c", 2}) == PresenceCondition::atom("OTHER"));
}

TEST_CASE("unparseable conditions become opaque atoms") {
  MacroTable table;
  Diagnostics diags;
  ConditionParser parser(table, diags);
  const auto pc = parser.parse("A &&", {}, {"t.c", 7});
  REQUIRE(pc.kind() == PresenceCondition::Kind::Atom);
  CHECK(is_parse_error_atom(pc.name()));
  CHECK(diags.contains("ParseError"));
  const auto second = parser.parse("FUNC(1)", {}, {"t.c", 8});
  CHECK(second != pc);
}

TEST_CASE("property: expansion is deterministic") {
  MacroTable table;
  define_desktop_variants(table);
  define(table, "ENABLE_DESKTOP 1", kDesktop);
  define(table, "ENABLE_DESKTOP 0", !kDesktop);
  define(table, "CAT(a, b) a##b");
  const std::string text = "IF_DESKTOP(CAT(x, y)) + ENABLE_DESKTOP * IF_DESKTOP(1, 2, 3)";
  Diagnostics d1;
  Diagnostics d2;
  const auto a = expand(table, text, d1);
  const auto b = expand(table, text, d2);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].token.text == b[i].token.text);
    CHECK(a[i].pc == b[i].pc);
  }
}
