#include "cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "varscope/analysis.hpp"
#include "varscope/layout.hpp"
#include "varscope/model.hpp"

namespace fs = std::filesystem;

namespace varscope::cli {

namespace {

std::int64_t analysis_timestamp(const DirectoryTree& tree) {
  if (const char* epoch = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(epoch, &end, 10);
    if (end != epoch && *end == '\0') return v;
  }
  return tree.latest_mtime();
}

/// Splits comma-separated flag lists: `--enable A,B --enable C`.
std::vector<std::string> flag_names(const std::vector<std::string>& raw) {
  std::vector<std::string> out;
  for (const auto& r : raw) {
    std::stringstream ss(r);
    std::string name;
    while (std::getline(ss, name, ','))
      if (!name.empty()) out.push_back(name);
  }
  return out;
}

void report_unknown(const VariabilityModel& model, const std::vector<std::string>& names, std::ostream& err) {
  for (const auto& n : names)
    if (!std::binary_search(model.features.begin(), model.features.end(), n))
      err << "warning: [UnknownFeature] " << n << " does not occur in the model; ignored\n";
}

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: [" << e.code() << "] " << e.what() << "\n";
    return e.code() == "UnknownFeature" ? kExitFailure : kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitIo;
  }
}

void print_ids(const std::vector<std::string>& ids, std::ostream& out) {
  for (const auto& id : ids) out << "  " << id << "\n";
}

}  // namespace

int cmd_analyze(const AnalyzeRequest& request, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    std::error_code ec;
    if (!fs::is_directory(request.input_root, ec))
      throw Error("InputNotFound", "input root " + request.input_root.string() + " is not a readable directory");
    fs::directory_iterator probe(request.input_root, ec);
    if (ec) throw Error("InputNotFound", "cannot read " + request.input_root.string() + ": " + ec.message());

    const auto root = fs::absolute(request.input_root).lexically_normal();
    DirectoryTree tree(root);
    AnalysisOptions options;
    options.scan.include_paths = request.include_paths;
    options.scan.predefines = request.predefines;
    options.scan.include_mode = include_mode_from_string(request.include_mode);
    options.input_root = root.generic_string();
    if (options.input_root.size() > 1 && options.input_root.back() == '/') options.input_root.pop_back();
    options.timestamp = analysis_timestamp(tree);

    const auto model = analyze(tree, options);
    const auto layout = compute_layout(model);

    fs::create_directories(request.output_dir, ec);
    if (ec) throw Error("OutputError", "cannot create " + request.output_dir.string() + ": " + ec.message());
    save_model(model, request.output_dir / "model.json");
    save_layout(layout, request.output_dir / "layout.json");

    for (const auto& d : model.diagnostics) err << format(d) << "\n";
    out << model.unit_count() << " translation units, " << model.entities.size() << " entities, "
        << model.relations.size() << " relations, " << model.features.size() << " features, "
        << model.diagnostics.size() << " diagnostics\n";
    out << "wrote " << (request.output_dir / "model.json").string() << " and "
        << (request.output_dir / "layout.json").string() << "\n";
    return kExitOk;
  });
}

int cmd_features(const fs::path& model_path, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = load_model(model_path);
    for (const auto& f : model.features) out << f << "\n";
    return kExitOk;
  });
}

int cmd_eval(const fs::path& model_path, const std::vector<std::string>& enable, bool list, std::ostream& out,
             std::ostream& err) {
  return guarded(err, [&] {
    const auto model = load_model(model_path);
    const auto names = flag_names(enable);
    report_unknown(model, names, err);
    const auto map = evaluate_configuration(model, Configuration::enabling(names));
    const auto included = map.included_count();
    out << "included: " << included << "\n";
    out << "excluded: " << model.entities.size() - included << "\n";
    if (list)
      for (std::size_t i = 0; i < model.entities.size(); ++i)
        out << (map.entities[i] ? "+ " : "- ") << model.entities[i].id << "\n";
    return kExitOk;
  });
}

int cmd_diff(const fs::path& model_path, const std::vector<std::string>& a, const std::vector<std::string>& b,
             std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = load_model(model_path);
    const auto names_a = flag_names(a);
    const auto names_b = flag_names(b);
    report_unknown(model, names_a, err);
    report_unknown(model, names_b, err);
    const auto d = diff_configurations(model, Configuration::enabling(names_a), Configuration::enabling(names_b));
    out << "only in A (" << d.only_in_a.size() << "):\n";
    print_ids(d.only_in_a, out);
    out << "only in B (" << d.only_in_b.size() << "):\n";
    print_ids(d.only_in_b, out);
    out << "in both (" << d.in_both.size() << "):\n";
    print_ids(d.in_both, out);
    return kExitOk;
  });
}

int cmd_impact(const fs::path& model_path, const std::string& feature, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto model = load_model(model_path);
    const auto impact = feature_impact(model, feature);
    std::ostringstream pct;
    pct << std::fixed << std::setprecision(1) << impact.percent();
    out << feature << ": " << impact.translation_units.size() << " / " << impact.total_units << " (" << pct.str()
        << "%) translation units\n";
    out << "entities (" << impact.entities.size() << "):\n";
    print_ids(impact.entities, out);
    return kExitOk;
  });
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Variability analysis of unpreprocessed C code", "varscope"};
  app.require_subcommand(1);
  app.set_version_flag("--version", tool_version());

  AnalyzeRequest analyze_req;
  std::string output_dir;
  auto* analyze_cmd = app.add_subcommand("analyze", "Analyze a source tree and write model.json and layout.json");
  analyze_cmd->add_option("input_root", analyze_req.input_root, "Directory with the C sources")->required();
  analyze_cmd->add_option("-I,--include", analyze_req.include_paths, "Include directory (repeatable)");
  analyze_cmd->add_option("-D,--define", analyze_req.predefines, "Predefined macro NAME[=VALUE] (repeatable)");
  analyze_cmd->add_option("--include-mode", analyze_req.include_mode, "project-only or full")
      ->check(CLI::IsMember({"project-only", "full"}));
  analyze_cmd->add_option("-o,--output", output_dir, "Output directory (default: $VARSCOPE_OUTPUT, else .)");

  std::string model_path;
  auto* features_cmd = app.add_subcommand("features", "List the feature flags of a model");
  features_cmd->add_option("model", model_path, "model.json")->required();

  std::vector<std::string> enable;
  bool list = false;
  auto* eval_cmd = app.add_subcommand("eval", "Count entities included by a configuration");
  eval_cmd->add_option("model", model_path, "model.json")->required();
  eval_cmd->add_option("-e,--enable", enable, "Enabled feature (repeatable, comma-separated); others are disabled");
  eval_cmd->add_flag("--list", list, "List entity ids prefixed by + (included) or - (excluded)");

  std::vector<std::string> config_a;
  std::vector<std::string> config_b;
  auto* diff_cmd = app.add_subcommand("diff", "Compare the entities of two configurations");
  diff_cmd->add_option("model", model_path, "model.json")->required();
  diff_cmd->add_option("-a,--a", config_a, "Feature enabled in configuration A (repeatable, comma-separated)");
  diff_cmd->add_option("-b,--b", config_b, "Feature enabled in configuration B (repeatable, comma-separated)");

  std::string feature;
  auto* impact_cmd = app.add_subcommand("impact", "Translation units and entities affected by a feature");
  impact_cmd->add_option("model", model_path, "model.json")->required();
  impact_cmd->add_option("feature", feature, "Feature name")->required();

  ServeOptions serve_opts;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string source_root;
  std::string ui_dir;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the model, layout, sources and UI over HTTP");
  serve_cmd->add_option("output_dir", output_dir, "Directory with model.json and layout.json (default: $VARSCOPE_OUTPUT)");
  serve_cmd->add_option("-p,--port", port, "Port")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--host", host, "Address to bind");
  serve_cmd->add_option("--source-root", source_root, "Source directory (default: the model's input root)");
  serve_cmd->add_option("--ui", ui_dir, "UI asset directory (default: <output_dir>/ui)");

  app.footer("Environment: VARSCOPE_OUTPUT is the output directory when none is given.");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitIo;
  }

  auto fallback_output = [&]() -> std::string {
    if (!output_dir.empty()) return output_dir;
    if (const char* env = std::getenv("VARSCOPE_OUTPUT"); env && *env) return env;
    return ".";
  };

  if (analyze_cmd->parsed()) {
    analyze_req.output_dir = fallback_output();
    return cmd_analyze(analyze_req, out, err);
  }
  if (features_cmd->parsed()) return cmd_features(model_path, out, err);
  if (eval_cmd->parsed()) return cmd_eval(model_path, enable, list, out, err);
  if (diff_cmd->parsed()) return cmd_diff(model_path, config_a, config_b, out, err);
  if (impact_cmd->parsed()) return cmd_impact(model_path, feature, out, err);
  if (serve_cmd->parsed()) {
    serve_opts.output_dir = fallback_output();
    if (!source_root.empty()) serve_opts.source_root = source_root;
    if (!ui_dir.empty()) serve_opts.ui_dir = ui_dir;
    return cmd_serve(serve_opts, host, port, out, err);
  }
  return kExitIo;
}

}  // namespace varscope::cli
