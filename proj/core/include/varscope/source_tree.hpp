#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace varscope {

/// Read access to the files being analyzed. Paths are '/'-separated and
/// relative to the tree root; absolute paths name files outside the root
/// (include directories, system headers).
class SourceTree {
 public:
  virtual ~SourceTree() = default;

  virtual std::optional<std::string> read(const std::string& path) const = 0;
  virtual bool is_file(const std::string& path) const = 0;

  /// Relative paths of all files under the root, sorted.
  virtual std::vector<std::string> files() const = 0;

  /// Directory the relative paths are resolved against; empty for
  /// in-memory trees.
  virtual std::string root() const { return {}; }
};

class DirectoryTree final : public SourceTree {
 public:
  explicit DirectoryTree(std::filesystem::path root);

  std::optional<std::string> read(const std::string& path) const override;
  bool is_file(const std::string& path) const override;
  std::vector<std::string> files() const override;
  std::string root() const override;

  /// Latest modification time (seconds since the epoch) over files().
  std::int64_t latest_mtime() const;

 private:
  std::filesystem::path resolve(const std::string& path) const;
  std::filesystem::path root_;
};

class MemoryTree final : public SourceTree {
 public:
  MemoryTree() = default;
  explicit MemoryTree(std::map<std::string, std::string> files) : files_(std::move(files)) {}

  void add(std::string path, std::string content) { files_[std::move(path)] = std::move(content); }

  std::optional<std::string> read(const std::string& path) const override;
  bool is_file(const std::string& path) const override { return files_.count(path) > 0; }
  std::vector<std::string> files() const override;

 private:
  std::map<std::string, std::string> files_;
};

/// Lexical normalization: collapses "//", "." and "dir/.." components.
/// Leading ".." components of a relative path are kept.
std::string normalize_path(std::string_view path);

/// Directory part of `path` ("" for a bare file name).
std::string parent_path(std::string_view path);

/// `dir/name`, normalized; `name` is returned as is when absolute.
std::string join_path(std::string_view dir, std::string_view name);

bool is_absolute_path(std::string_view path);

std::string base_name(std::string_view path);

}  // namespace varscope
