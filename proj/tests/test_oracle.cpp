#include <doctest.h>

#include "c_generator.hpp"
#include "cpp_oracle.hpp"
#include "slices.hpp"

namespace {

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (const char ch : text) {
    if (ch == '\n') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

}  // namespace

TEST_CASE("oracle evaluator") {
  const std::map<std::string, std::string> macros{{"LEVEL", "3"}, {"ZERO", "0"}};
  CHECK(oracle::evaluate("1 + 2 * 3", macros) == 7);
  CHECK(oracle::evaluate("(1 + 2) * 3", macros) == 9);
  CHECK(oracle::evaluate("LEVEL >= 2 && !ZERO", macros) == 1);
  CHECK(oracle::evaluate("defined(LEVEL) && defined ZERO", macros) == 1);
  CHECK(oracle::evaluate("defined(NOPE) || UNDEFINED", macros) == 0);
  CHECK(oracle::evaluate("LEVEL == 3 ? 10 : 20", macros) == 10);
  CHECK(oracle::evaluate("-1 < 0", macros) == 1);
  CHECK_THROWS(oracle::evaluate("1 +", macros));
}

TEST_CASE("oracle keeps line numbering") {
  const std::string src = "a\n#if X\nb\n#else\nc\n#endif\nd\n";
  const auto on = split_lines(oracle::preprocess(src, {"X"}));
  const auto off = split_lines(oracle::preprocess(src, {}));
  REQUIRE(on.size() == 7);
  REQUIRE(off.size() == 7);
  CHECK(on == std::vector<std::string>{"a", "", "b", "", "", "", "d"});
  CHECK(off == std::vector<std::string>{"a", "", "", "", "c", "", "d"});
}

TEST_CASE("oracle tracks defines and undefs") {
  const std::string src =
      "#define LEVEL 2\n#if LEVEL > 1\nhi\n#endif\n#undef LEVEL\n#ifdef LEVEL\ngone\n#endif\n"
      "#ifdef X\n#define Y\n#endif\n#ifdef Y\ny\n#endif\n";
  const auto off = split_lines(oracle::preprocess(src, {}));
  CHECK(off[2] == "hi");
  CHECK(off[6].empty());
  CHECK(off[12].empty());
  const auto on = split_lines(oracle::preprocess(src, {"X"}));
  CHECK(on[12] == "y");
  CHECK(on[0] == "#define LEVEL 2");
}

TEST_CASE("oracle elif chains") {
  const std::string src = "#if A\na\n#elif B\nb\n#elif 1\nc\n#else\nd\n#endif\n";
  CHECK(split_lines(oracle::preprocess(src, {"A", "B"}))[1] == "a");
  CHECK(split_lines(oracle::preprocess(src, {"B"}))[3] == "b");
  CHECK(split_lines(oracle::preprocess(src, {}))[5] == "c");
  CHECK(split_lines(oracle::preprocess(src, {}))[7].empty());
}

TEST_CASE("generator is deterministic and uses its flags") {
  gen::CGenerator a(42);
  gen::CGenerator b(42);
  const auto fa = a.generate();
  const auto fb = b.generate();
  CHECK(fa.text == fb.text);
  CHECK(fa.flags.size() == 8);
  CHECK(fa.text.find("#if") != std::string::npos);
  gen::CGenerator c(43);
  CHECK(c.generate().text != fa.text);
}

TEST_CASE("the harness detects mismatches") {
  // Comparing against the wrong configuration has to disagree somewhere.
  std::size_t disagreements = 0;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    gen::CGenerator g(seed);
    const auto file = g.generate();
    std::set<std::string> all(file.flags.begin(), file.flags.end());
    if (slices::oracle_entities(file.text, all) != slices::oracle_entities(file.text, {})) ++disagreements;
  }
  CHECK(disagreements > 0);
}

TEST_CASE("a small slice run agrees") {
  const auto report = slices::check(1, 10);
  CHECK(report.files == 10);
  CHECK(report.configurations == 10 * 256);
  CHECK_MESSAGE(report.agreeing == report.configurations, report.first_mismatch);
}
