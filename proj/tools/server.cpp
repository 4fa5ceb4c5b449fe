#include <fstream>
#include <ostream>
#include <sstream>

#include <httplib.h>

#include "cli.hpp"
#include "varscope/model.hpp"

namespace fs = std::filesystem;

namespace varscope::cli {

namespace {

constexpr const char* kPlaceholderPage = R"(<!doctype html>
<html>
<head><meta charset="utf-8"><title>varscope</title></head>
<body>
<h1>varscope</h1>
<p>No UI assets found. The analysis results are available at
<a href="/api/model">/api/model</a> and <a href="/api/layout">/api/layout</a>.</p>
</body>
</html>
)";

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("InputNotFound", "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool inside(const fs::path& root, const fs::path& path) {
  auto r = root.begin();
  auto p = path.begin();
  for (; r != root.end(); ++r, ++p) {
    if (r->empty()) continue;
    if (p == path.end() || *r != *p) return false;
  }
  return true;
}

}  // namespace

std::optional<fs::path> confine(const fs::path& root, const std::string& file) {
  if (file.empty() || file.front() == '/' || file.find('\0') != std::string::npos) return std::nullopt;
  const fs::path rel = fs::path(file).lexically_normal();
  for (const auto& part : rel)
    if (part == "..") return std::nullopt;
  std::error_code ec;
  const auto base = fs::weakly_canonical(root, ec);
  if (ec) return std::nullopt;
  const auto full = fs::weakly_canonical(base / rel, ec);
  if (ec || !inside(base, full)) return std::nullopt;
  return full;
}

std::unique_ptr<httplib::Server> make_server(const ServeOptions& options) {
  auto model_text = std::make_shared<const std::string>(slurp(options.output_dir / "model.json"));
  auto layout_text = std::make_shared<const std::string>(slurp(options.output_dir / "layout.json"));
  const auto model = model_from_json(*model_text);
  const fs::path source_root = options.source_root ? *options.source_root : fs::path(model.meta.input_root);

  auto server = std::make_unique<httplib::Server>();
  // The library default is SO_REUSEPORT, which lets a second server share a busy port.
  server->set_socket_options([](socket_t sock) {
    int yes = 1;
    setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, &yes, sizeof(yes));
  });
  server->Get("/api/model", [model_text](const httplib::Request&, httplib::Response& res) {
    res.set_content(*model_text, "application/json");
  });
  server->Get("/api/layout", [layout_text](const httplib::Request&, httplib::Response& res) {
    res.set_content(*layout_text, "application/json");
  });
  server->Get("/api/source", [source_root](const httplib::Request& req, httplib::Response& res) {
    if (!req.has_param("file")) {
      res.status = 400;
      res.set_content("missing 'file' parameter\n", "text/plain");
      return;
    }
    const auto path = confine(source_root, req.get_param_value("file"));
    if (!path) {
      res.status = 403;
      res.set_content("[SourceOutsideRoot] path leaves the source root\n", "text/plain");
      return;
    }
    std::error_code ec;
    if (!fs::is_regular_file(*path, ec)) {
      res.status = 404;
      res.set_content("no such file\n", "text/plain");
      return;
    }
    res.set_content(slurp(*path), "text/plain; charset=utf-8");
  });

  std::error_code ec;
  const fs::path ui = options.ui_dir ? *options.ui_dir : options.output_dir / "ui";
  if (!fs::is_directory(ui, ec) || !server->set_mount_point("/", ui.string())) {
    server->Get("/", [](const httplib::Request&, httplib::Response& res) {
      res.set_content(kPlaceholderPage, "text/html; charset=utf-8");
    });
  }
  return server;
}

int cmd_serve(const ServeOptions& options, const std::string& host, int port, std::ostream& out, std::ostream& err) {
  std::unique_ptr<httplib::Server> server;
  try {
    server = make_server(options);
  } catch (const Error& e) {
    err << "error: [" << e.code() << "] " << e.what() << "\n";
    return kExitIo;
  }
  const int bound = port == 0 ? server->bind_to_any_port(host) : (server->bind_to_port(host, port) ? port : -1);
  if (bound < 0) {
    err << "error: [PortInUse] cannot listen on " << host << ":" << port << "\n";
    return kExitIo;
  }
  out << "serving " << options.output_dir.string() << " at http://" << host << ":" << bound << "/" << std::endl;
  server->listen_after_bind();
  return kExitOk;
}

}  // namespace varscope::cli
