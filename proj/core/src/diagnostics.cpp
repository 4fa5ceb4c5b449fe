#include "varscope/diagnostics.hpp"

#include <algorithm>

namespace varscope {

std::string_view to_string(Severity severity) {
  switch (severity) {
    case Severity::Note:
      return "note";
    case Severity::Warning:
      return "warning";
    case Severity::Error:
      return "error";
  }
  return "warning";
}

Severity severity_from_string(std::string_view text) {
  if (text == "note") return Severity::Note;
  if (text == "error") return Severity::Error;
  return Severity::Warning;
}

std::string format(const Diagnostic& d) {
  std::string out;
  if (!d.where.file.empty()) {
    out += d.where.file;
    if (d.where.line > 0) out += ":" + std::to_string(d.where.line);
    out += ": ";
  }
  out += to_string(d.severity);
  out += ": ";
  out += d.message;
  out += " [" + d.code + "]";
  return out;
}

void Diagnostics::report(Severity severity, std::string code, SourceLocation where,
                         std::string message) {
  items_.push_back({severity, std::move(code), std::move(where), std::move(message)});
}

void Diagnostics::append(const Diagnostics& other) {
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

std::size_t Diagnostics::count(std::string_view code) const {
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [&](const Diagnostic& d) { return d.code == code; }));
}

}  // namespace varscope
