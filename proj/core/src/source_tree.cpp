#include "varscope/source_tree.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>
#include <system_error>

namespace fs = std::filesystem;

namespace varscope {

bool is_absolute_path(std::string_view path) { return !path.empty() && path.front() == '/'; }

std::string normalize_path(std::string_view path) {
  const bool absolute = is_absolute_path(path);
  std::vector<std::string_view> parts;
  std::size_t i = 0;
  while (i <= path.size()) {
    const auto slash = path.find('/', i);
    const auto end = slash == std::string_view::npos ? path.size() : slash;
    const auto part = path.substr(i, end - i);
    if (part.empty() || part == ".") {
      // skip
    } else if (part == "..") {
      if (!parts.empty() && parts.back() != "..")
        parts.pop_back();
      else if (!absolute)
        parts.push_back(part);
    } else {
      parts.push_back(part);
    }
    if (slash == std::string_view::npos) break;
    i = slash + 1;
  }
  std::string out = absolute ? "/" : "";
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (k) out += '/';
    out += parts[k];
  }
  if (out.empty()) out = absolute ? "/" : "";
  return out;
}

std::string parent_path(std::string_view path) {
  const auto slash = path.rfind('/');
  if (slash == std::string_view::npos) return {};
  if (slash == 0) return "/";
  return std::string(path.substr(0, slash));
}

std::string join_path(std::string_view dir, std::string_view name) {
  if (is_absolute_path(name) || dir.empty()) return normalize_path(name);
  std::string s(dir);
  s += '/';
  s += name;
  return normalize_path(s);
}

std::string base_name(std::string_view path) {
  const auto slash = path.rfind('/');
  return std::string(slash == std::string_view::npos ? path : path.substr(slash + 1));
}

DirectoryTree::DirectoryTree(fs::path root) : root_(std::move(root)) {}

fs::path DirectoryTree::resolve(const std::string& path) const {
  if (is_absolute_path(path)) return fs::path(path);
  return root_ / fs::path(path);
}

std::optional<std::string> DirectoryTree::read(const std::string& path) const {
  std::ifstream in(resolve(path), std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  if (in.bad()) return std::nullopt;
  return ss.str();
}

bool DirectoryTree::is_file(const std::string& path) const {
  std::error_code ec;
  return fs::is_regular_file(resolve(path), ec);
}

std::vector<std::string> DirectoryTree::files() const {
  std::vector<std::string> out;
  std::error_code ec;
  fs::recursive_directory_iterator it(root_, fs::directory_options::skip_permission_denied, ec);
  if (ec) return out;
  for (const auto end = fs::recursive_directory_iterator(); it != end; it.increment(ec)) {
    if (ec) break;
    std::error_code fec;
    if (!it->is_regular_file(fec)) continue;
    out.push_back(fs::relative(it->path(), root_, fec).generic_string());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::string DirectoryTree::root() const { return root_.generic_string(); }

std::int64_t DirectoryTree::latest_mtime() const {
  std::int64_t latest = 0;
  for (const auto& f : files()) {
    std::error_code ec;
    const auto t = fs::last_write_time(resolve(f), ec);
    if (ec) continue;
    const auto sys = std::chrono::file_clock::to_sys(t);
    latest = std::max<std::int64_t>(
        latest, std::chrono::duration_cast<std::chrono::seconds>(sys.time_since_epoch()).count());
  }
  return latest;
}

std::optional<std::string> MemoryTree::read(const std::string& path) const {
  const auto it = files_.find(path);
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::string> MemoryTree::files() const {
  std::vector<std::string> out;
  for (const auto& [path, content] : files_)
    if (!is_absolute_path(path)) out.push_back(path);
  return out;
}

}  // namespace varscope
