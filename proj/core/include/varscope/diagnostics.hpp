#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace varscope {

enum class Severity { Note, Warning, Error };

std::string_view to_string(Severity severity);
Severity severity_from_string(std::string_view text);

struct SourceLocation {
  std::string file;
  int line = 0;

  friend bool operator==(const SourceLocation&, const SourceLocation&) = default;
  friend auto operator<=>(const SourceLocation&, const SourceLocation&) = default;
};

/// A non-fatal analysis finding. `code` is a stable CamelCase identifier
/// such as "UnbalancedEndif" or "IncludeCycle".
struct Diagnostic {
  Severity severity = Severity::Warning;
  std::string code;
  SourceLocation where;
  std::string message;

  friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

std::string format(const Diagnostic& diagnostic);

class Diagnostics {
 public:
  void report(Severity severity, std::string code, SourceLocation where, std::string message);
  void warn(std::string code, SourceLocation where, std::string message) {
    report(Severity::Warning, std::move(code), std::move(where), std::move(message));
  }
  void note(std::string code, SourceLocation where, std::string message) {
    report(Severity::Note, std::move(code), std::move(where), std::move(message));
  }

  void append(const Diagnostics& other);

  const std::vector<Diagnostic>& items() const { return items_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  std::size_t count(std::string_view code) const;
  bool contains(std::string_view code) const { return count(code) > 0; }

 private:
  std::vector<Diagnostic> items_;
};

/// Base for errors that abort an operation. Carries the same stable code
/// vocabulary as Diagnostic.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message)
      : std::runtime_error(message), code_(std::move(code)) {}

  const std::string& code() const noexcept { return code_; }

 private:
  std::string code_;
};

}  // namespace varscope
