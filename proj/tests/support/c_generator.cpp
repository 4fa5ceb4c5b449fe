#include "c_generator.hpp"

namespace gen {

namespace {

std::string tabs(int n) { return std::string(static_cast<std::size_t>(n), '\t'); }

}  // namespace

CGenerator::CGenerator(std::uint64_t seed, CGenOptions options) : rng_(seed), options_(options) {
  for (int i = 0; i < options_.flag_count; ++i) flags_.push_back("FLAG_" + std::to_string(i));
}

int CGenerator::pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

bool CGenerator::chance(double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_) < p; }

const std::string& CGenerator::flag() { return flags_[static_cast<std::size_t>(pick(0, options_.flag_count - 1))]; }

std::string CGenerator::fresh(const char* prefix) { return prefix + std::to_string(counter_++); }

std::string CGenerator::condition() {
  switch (pick(0, 13)) {
    case 0: return "defined(" + flag() + ")";
    case 1: return "defined " + flag();
    case 2: return flag();
    case 3: return "!defined(" + flag() + ")";
    case 4: return "defined(" + flag() + ") && defined(" + flag() + ")";
    case 5: return flag() + " || " + flag();
    case 6: return "!(" + flag() + " && " + flag() + ")";
    case 7: return "(defined " + flag() + " || defined " + flag() + ") && !defined " + flag();
    case 8:
      if (has_level_) return "LEVEL > 1 && defined(" + flag() + ")";
      return "defined(" + flag() + ") /* level */";
    case 9:
      if (has_x_) return "HAS_X";
      return "!" + flag();
    case 10:
      if (has_x_) return "defined(HAS_X) || " + flag();
      return flag() + " && !" + flag();
    case 11: return flag() + " ? " + flag() + " : " + flag();
    case 12: return flag() + " + " + flag() + " >= 2";
    default: return "(" + flag() + " || " + flag() + ") && (" + flag() + " || !" + flag() + ")";
  }
}

std::string CGenerator::opening() {
  switch (pick(0, 5)) {
    case 0: return "#ifdef " + flag();
    case 1: return "#ifndef " + flag();
    case 2: return "# if " + condition();
    default: return "#if " + condition();
  }
}

std::string CGenerator::comment() {
  switch (pick(0, 5)) {
    case 0: return " /* note { */";
    case 1: return " // trailing ; }";
    default: return "";
  }
}

void CGenerator::preamble(Lines& out) {
  if (chance(0.6)) {
    has_level_ = true;
    out.push_back("#define LEVEL " + std::to_string(pick(0, 3)));
  }
  if (chance(0.7)) {
    has_type_ = true;
    out.push_back("#if " + condition());
    out.push_back("#define VAL_T long");
    if (chance(0.5)) {
      out.push_back("#elif " + condition());
      out.push_back("#define VAL_T short");
    }
    out.push_back("#else");
    out.push_back("#define VAL_T int");
    out.push_back("#endif");
  }
  if (chance(0.7)) {
    has_maker_ = true;
    out.push_back(opening());
    out.push_back("#define MAKE_ENTITY(n) static int n(void) { return 1; }");
    out.push_back("#else");
    out.push_back("#define MAKE_ENTITY(n) \\");
    out.push_back("\tstatic long n;");
    out.push_back("#endif");
  }
  if (chance(0.6)) {
    has_x_ = true;
    out.push_back(opening());
    out.push_back("#define HAS_X 1");
    out.push_back("#endif");
  }
  if (has_level_ && chance(0.3)) {
    out.push_back("#ifdef " + flag());
    out.push_back("#undef LEVEL");
    out.push_back("#define LEVEL 5");
    out.push_back("#endif");
  }
  out.push_back("");
}

void CGenerator::items(Lines& out, int depth, int count) {
  for (int i = 0; i < count; ++i) item(out, depth);
}

void CGenerator::item(Lines& out, int depth) {
  const int k = pick(0, 13);
  switch (k) {
    case 0:
    case 1: variable(out); break;
    case 2:
    case 3: function(out, depth); break;
    case 4: composite(out, depth, 0, true); break;
    case 5: split_specifiers(out); break;
    case 6: alternative_headers(out, depth); break;
    case 7: split_ending(out, depth); break;
    case 8:
      if (has_maker_) {
        out.push_back("MAKE_ENTITY(" + fresh("m") + ")");
        break;
      }
      variable(out);
      break;
    case 9: out.push_back("typedef " + std::string(has_type_ ? "VAL_T " : "int ") + fresh("t") + "_t;"); break;
    case 10: out.push_back("int " + fresh("proto") + "(int a, char *b);" + comment()); break;
    default:
      if (depth < options_.max_depth)
        group(out, depth, false, 0);
      else
        variable(out);
  }
  if (chance(0.3)) out.push_back("");
}

void CGenerator::group(Lines& out, int depth, bool statements, int indent) {
  auto content = [&] {
    if (statements)
      body(out, depth + 1, indent, pick(0, 3));
    else
      items(out, depth + 1, pick(0, 3));
  };
  out.push_back(opening());
  content();
  for (int n = pick(0, 2); n > 0; --n) {
    out.push_back("#elif " + condition());
    content();
  }
  if (chance(0.5)) {
    out.push_back("#else" + std::string(chance(0.3) ? " /* other */" : ""));
    content();
  }
  out.push_back("#endif");
}

void CGenerator::variable(Lines& out) {
  const auto name = fresh("g");
  globals_.push_back(name);
  switch (pick(0, 6)) {
    case 0: out.push_back("static int " + name + ";" + comment()); break;
    case 1: out.push_back("int " + name + " = " + std::to_string(pick(0, 9)) + ";"); break;
    case 2: out.push_back(std::string(has_type_ ? "VAL_T " : "long ") + name + ";"); break;
    case 3: {
      const auto second = fresh("g");
      globals_.push_back(second);
      out.push_back("int " + name + ", *" + second + ";");
      break;
    }
    case 4: out.push_back("const char *" + name + " = \"{ not a brace; /* nor a comment */\";"); break;
    case 5: out.push_back("int " + name + "[4] = { 1, 2, 3, 4 };"); break;
    default:
      out.push_back("static struct {");
      out.push_back("\tint x;");
      out.push_back("} " + name + ";");
  }
}

void CGenerator::function(Lines& out, int depth) {
  const auto name = fresh("f");
  out.push_back(std::string(chance(0.5) ? "static " : "") + "int " + name + "(int a)" + comment());
  out.push_back("{");
  body(out, depth, 1, pick(1, 4));
  out.push_back("\treturn a;");
  out.push_back("}");
  functions_.push_back(name);
}

void CGenerator::composite(Lines& out, int depth, int indent, bool top) {
  const auto t = tabs(indent);
  const int kind = pick(0, 2);
  if (kind == 2) {
    const auto name = fresh("e");
    out.push_back(t + "enum " + name + " {");
    out.push_back(t + "\t" + name + "_A,");
    if (depth < options_.max_depth && chance(0.6)) {
      out.push_back(opening());
      out.push_back(t + "\t" + name + "_B,");
      out.push_back("#endif");
    }
    out.push_back(t + "\t" + name + "_C" + std::string(chance(0.5) ? "," : ""));
    out.push_back(t + "}" + std::string(top ? ";" : " " + fresh("fld") + ";"));
    return;
  }
  const auto name = fresh(kind == 0 ? "s" : "u");
  out.push_back(t + (kind == 0 ? "struct " : "union ") + name + " {");
  out.push_back(t + "\tint a;");
  if (depth < options_.max_depth && chance(0.6)) {
    out.push_back(opening());
    out.push_back(t + "\tlong b;" + comment());
    if (chance(0.5)) composite(out, depth + 1, indent + 1, false);
    if (chance(0.3)) {
      out.push_back("#else");
      out.push_back(t + "\tshort b;");
    }
    out.push_back("#endif");
  }
  if (indent < 2 && chance(0.3)) {
    out.push_back(t + "\tstruct {");
    out.push_back(t + "\t\tint q;");
    out.push_back(t + "\t} " + fresh("anon") + ";");
  }
  out.push_back(t + "}" + std::string(top ? ";" : " " + fresh("fld") + ";"));
}

void CGenerator::split_specifiers(Lines& out) {
  const auto name = fresh("g");
  globals_.push_back(name);
  switch (pick(0, 2)) {
    case 0:
      out.push_back("#ifdef " + flag());
      out.push_back("static");
      out.push_back("#endif");
      out.push_back("int " + name + " = 1;");
      break;
    case 1:
      out.push_back("#if " + condition());
      out.push_back("unsigned long");
      out.push_back("#else");
      out.push_back("int");
      out.push_back("#endif");
      out.push_back(name + ";");
      break;
    default:
      out.push_back("int " + name);
      out.push_back("#if " + condition());
      out.push_back("\t= 3");
      out.push_back("#endif");
      out.push_back("\t;");
  }
}

void CGenerator::alternative_headers(Lines& out, int depth) {
  const auto name = fresh("f");
  out.push_back("#if " + condition());
  out.push_back("static int " + name + "(int a)");
  if (chance(0.5)) {
    out.push_back("#elif " + condition());
    out.push_back("int " + name + "(int a, int b)");
  }
  out.push_back("#else");
  out.push_back("long " + name + "(void)");
  out.push_back("#endif");
  out.push_back("{");
  body(out, depth, 1, pick(0, 3));
  out.push_back("\treturn 0;");
  out.push_back("}");
  functions_.push_back(name);
}

void CGenerator::split_ending(Lines& out, int depth) {
  const auto name = fresh(chance(0.5) ? "f" : "s");
  if (name[0] == 's') {
    out.push_back("struct " + name + " {");
    out.push_back("\tint a;");
    out.push_back("#if " + condition());
    out.push_back("};");
    out.push_back("#else");
    out.push_back("\tint b;");
    out.push_back("};");
    out.push_back("#endif");
    return;
  }
  out.push_back("int " + name + "(int a)");
  out.push_back("{");
  body(out, depth, 1, pick(0, 2));
  out.push_back(opening());
  out.push_back("\treturn 1;");
  out.push_back("}");
  out.push_back("#else");
  out.push_back("\treturn 2;");
  out.push_back("}");
  out.push_back("#endif");
  functions_.push_back(name);
}

void CGenerator::body(Lines& out, int depth, int indent, int count) {
  for (int i = 0; i < count; ++i) statement(out, depth, indent);
}

void CGenerator::statement(Lines& out, int depth, int indent) {
  const auto t = tabs(indent);
  switch (pick(0, 9)) {
    case 0:
      if (!globals_.empty()) {
        const auto& g = globals_[static_cast<std::size_t>(pick(0, static_cast<int>(globals_.size()) - 1))];
        out.push_back(t + "a = a + (int)sizeof(" + g + ");" + comment());
        break;
      }
      [[fallthrough]];
    case 1:
      if (!functions_.empty()) {
        const auto& f = functions_[static_cast<std::size_t>(pick(0, static_cast<int>(functions_.size()) - 1))];
        out.push_back(t + "a += " + f + "(a);");
        break;
      }
      [[fallthrough]];
    case 2: out.push_back(t + "int " + fresh("loc") + " = a * 2;"); break;
    case 3:
      out.push_back(t + "if (a > " + std::to_string(pick(0, 5)) + ") {");
      body(out, depth, indent + 1, pick(0, 2));
      out.push_back(t + "}");
      break;
    case 4:
      out.push_back(t + "for (int i = 0; i < 3; i++) { a++; }");
      break;
    case 5:
      if (depth < options_.max_depth) {
        out.push_back(opening());
        out.push_back(t + "if (a) {");
        out.push_back("#else");
        out.push_back(t + "{");
        out.push_back("#endif");
        body(out, depth + 1, indent + 1, pick(0, 2));
        out.push_back(t + "}");
        break;
      }
      [[fallthrough]];
    case 6:
      if (depth < options_.max_depth) {
        group(out, depth, true, indent);
        break;
      }
      [[fallthrough]];
    default: out.push_back(t + "a = a - 1;");
  }
}

GeneratedC CGenerator::generate() {
  Lines out;
  out.push_back("/* generated */");
  preamble(out);
  items(out, 0, options_.top_items);
  GeneratedC g;
  for (const auto& l : out) g.text += l + "\n";
  g.flags = flags_;
  return g;
}

}  // namespace gen
