#include "varscope/scanner.hpp"

#include "varscope/text.hpp"

namespace varscope {

namespace {

bool is_trigraph_char(char c) {
  switch (c) {
    case '=': case '/': case '\'': case '(': case ')': case '!': case '<': case '>': case '-':
      return true;
    default:
      return false;
  }
}

class Splicer {
 public:
  Splicer(std::string_view src, Diagnostics& diags, const std::string& file, int file_id)
      : src_(src), diags_(diags), file_(file), file_id_(file_id) {}

  std::vector<LogicalLine> run() {
    enum class Mode { Code, String, Block, LineComment } mode = Mode::Code;
    char quote = 0;
    int comment_line = 0;
    bool trigraph_reported = false;
    std::size_t i = 0;
    const auto n = src_.size();
    while (i < n) {
      const char c = src_[i];
      // Splices apply everywhere, including inside comments and literals.
      if (c == '\\') {
        std::size_t k = i + 1;
        if (k < n && src_[k] == '\r') ++k;
        if (k < n && src_[k] == '\n') {
          ++physical_;
          i = k + 1;
          continue;
        }
        if (k >= n && (k == i + 1 || src_[k - 1] == '\r')) {  // backslash at end of file
          i = n;
          continue;
        }
      }
      if (c == '\r' && i + 1 < n && src_[i + 1] == '\n') {
        ++i;
        continue;
      }
      if (c == '\n') {
        switch (mode) {
          case Mode::Block:
            ++physical_;
            ++i;
            continue;
          case Mode::String:
          case Mode::LineComment:
            if (mode == Mode::LineComment) text_ += ' ';
            mode = Mode::Code;
            break;
          case Mode::Code:
            break;
        }
        end_line();
        ++physical_;
        start_ = physical_;
        trigraph_reported = false;
        ++i;
        continue;
      }
      switch (mode) {
        case Mode::Code:
          if (c == '/' && peek(i + 1) == '*') {
            mode = Mode::Block;
            comment_line = physical_;
            i += 2;
            continue;
          }
          if (c == '/' && peek(i + 1) == '/') {
            mode = Mode::LineComment;
            i += 2;
            continue;
          }
          if (c == '"' || c == '\'') {
            mode = Mode::String;
            quote = c;
          } else if (c == '?' && peek(i + 1) == '?' && is_trigraph_char(peek(i + 2)) && !trigraph_reported) {
            diags_.warn("Trigraph", {file_, physical_}, "trigraphs are not supported; left as written");
            trigraph_reported = true;
          }
          text_ += c;
          ++i;
          break;
        case Mode::String:
          text_ += c;
          if (c == '\\' && i + 1 < n && src_[i + 1] != '\n' && src_[i + 1] != '\r') {
            text_ += src_[i + 1];
            i += 2;
            continue;
          }
          if (c == quote) mode = Mode::Code;
          ++i;
          break;
        case Mode::Block:
          if (c == '*' && peek(i + 1) == '/') {
            text_ += ' ';
            mode = Mode::Code;
            i += 2;
            continue;
          }
          ++i;
          break;
        case Mode::LineComment:
          ++i;
          break;
      }
    }
    if (mode == Mode::Block) {
      diags_.warn("UnterminatedComment", {file_, comment_line}, "comment opened here is not closed before end of file");
      text_ += ' ';
    } else if (mode == Mode::LineComment) {
      text_ += ' ';
    }
    // A trailing partial line (no final newline) is still a line.
    if (!text_.empty() || (n > 0 && src_.back() != '\n' && start_ <= physical_)) end_line();
    return std::move(lines_);
  }

 private:
  char peek(std::size_t i) const { return i < src_.size() ? src_[i] : '\0'; }

  void end_line() {
    lines_.push_back(LogicalLine{file_id_, {start_, physical_}, std::move(text_)});
    text_.clear();
  }

  std::string_view src_;
  Diagnostics& diags_;
  const std::string& file_;
  int file_id_;
  int physical_ = 1;
  int start_ = 1;
  std::string text_;
  std::vector<LogicalLine> lines_;
};

DirectiveKind directive_kind(std::string_view keyword) {
  if (keyword == "if") return DirectiveKind::If;
  if (keyword == "ifdef") return DirectiveKind::Ifdef;
  if (keyword == "ifndef") return DirectiveKind::Ifndef;
  if (keyword == "elif" || keyword == "elifdef" || keyword == "elifndef") return DirectiveKind::Elif;
  if (keyword == "else") return DirectiveKind::Else;
  if (keyword == "endif") return DirectiveKind::Endif;
  if (keyword == "define") return DirectiveKind::Define;
  if (keyword == "undef") return DirectiveKind::Undef;
  if (keyword == "include" || keyword == "include_next" || keyword == "import") return DirectiveKind::Include;
  return DirectiveKind::Other;
}

}  // namespace

std::vector<LogicalLine> splice_and_strip(std::string_view raw_bytes, Diagnostics& diags, const std::string& file,
                                          int file_id) {
  const auto decoded = text::decode_source(raw_bytes);
  return Splicer(decoded, diags, file, file_id).run();
}

std::string_view to_string(DirectiveKind kind) {
  switch (kind) {
    case DirectiveKind::If: return "if";
    case DirectiveKind::Ifdef: return "ifdef";
    case DirectiveKind::Ifndef: return "ifndef";
    case DirectiveKind::Elif: return "elif";
    case DirectiveKind::Else: return "else";
    case DirectiveKind::Endif: return "endif";
    case DirectiveKind::Define: return "define";
    case DirectiveKind::Undef: return "undef";
    case DirectiveKind::Include: return "include";
    case DirectiveKind::Other: return "other";
  }
  return "other";
}

std::vector<ScanItem> scan_directives(const std::vector<LogicalLine>& lines) {
  std::vector<ScanItem> out;
  out.reserve(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    std::string_view s = text::trim(lines[i].text);
    if (s.empty() || s.front() != '#') {
      out.push_back(ScanItem{i, std::nullopt});
      continue;
    }
    s.remove_prefix(1);
    s = text::trim(s);
    std::size_t k = 0;
    while (k < s.size() && text::is_ident_char(s[k])) ++k;
    Directive d;
    d.keyword = std::string(s.substr(0, k));
    d.argument = std::string(text::trim(s.substr(k)));
    d.kind = directive_kind(d.keyword);
    d.line = i;
    if (d.keyword == "elifdef") d.argument = "defined(" + d.argument + ")";
    if (d.keyword == "elifndef") d.argument = "!defined(" + d.argument + ")";
    out.push_back(ScanItem{i, std::move(d)});
  }
  return out;
}

bool is_blank_line(const LogicalLine& line) { return text::is_blank(line.text); }

}  // namespace varscope
