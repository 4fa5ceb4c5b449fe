#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace httplib {
class Server;
}

namespace varscope::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitIo = 2;

/// Runs the tool as if invoked with `args` (without the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct AnalyzeRequest {
  std::filesystem::path input_root;
  std::vector<std::string> include_paths;
  std::vector<std::string> predefines;
  std::string include_mode = "project-only";
  std::filesystem::path output_dir;
};

int cmd_analyze(const AnalyzeRequest& request, std::ostream& out, std::ostream& err);
int cmd_features(const std::filesystem::path& model, std::ostream& out, std::ostream& err);
int cmd_eval(const std::filesystem::path& model, const std::vector<std::string>& enable, bool list, std::ostream& out,
             std::ostream& err);
int cmd_diff(const std::filesystem::path& model, const std::vector<std::string>& a, const std::vector<std::string>& b,
             std::ostream& out, std::ostream& err);
int cmd_impact(const std::filesystem::path& model, const std::string& feature, std::ostream& out, std::ostream& err);

struct ServeOptions {
  std::filesystem::path output_dir;
  std::optional<std::filesystem::path> source_root;  // defaults to the model's input root
  std::optional<std::filesystem::path> ui_dir;       // defaults to <output_dir>/ui when present
};

/// A read-only server over the analysis results. Throws varscope::Error
/// (InputNotFound, MalformedModelFile) when output_dir lacks the results.
std::unique_ptr<httplib::Server> make_server(const ServeOptions& options);

int cmd_serve(const ServeOptions& options, const std::string& host, int port, std::ostream& out, std::ostream& err);

/// Resolves `file` below `root`; nullopt when it would leave the root.
std::optional<std::filesystem::path> confine(const std::filesystem::path& root, const std::string& file);

}  // namespace varscope::cli
