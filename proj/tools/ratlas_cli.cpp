#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratlas/analysis.hpp"

using namespace ratlas;

namespace {

struct Flags {
  std::string input;
  std::string config;
  std::string tasks = "diagram";
  std::vector<std::string> rects;
  double tol_freq = 1e-9;
  double tol_coeff = 1e-9;
  double tol_root = 1e-9;
  std::string out_dir = ".";
  bool validate_only = false;
};

rootfind::SearchRect parse_rect_flag(const std::string& s) {
  std::vector<double> v;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const std::size_t next = s.find(',', pos);
    const std::string item = s.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    try {
      std::size_t used = 0;
      v.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw_input("--rect: '" + s + "' is not re_min,re_max,im_min,im_max");
    }
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3]))
    throw_input("--rect: '" + s + "' is not re_min,re_max,im_min,im_max");
  return rootfind::SearchRect::from_bounds(v[0], v[1], v[2], v[3]);
}

int run(const std::string& kind, const Flags& f) {
  try {
    analysis::AnalysisConfig cfg;
    bool have_input = false;
    if (!f.input.empty()) {
      cfg.input = analysis::parse_input(io::read_json_file(f.input), kind);
      have_input = true;
    }
    cfg.tasks = analysis::parse_tasks(f.tasks);
    for (const auto& r : f.rects) cfg.search.push_back(parse_rect_flag(r));
    cfg.tol = {f.tol_freq, f.tol_coeff, f.tol_root};
    cfg.out_dir = f.out_dir;
    if (!f.config.empty()) {
      const auto j = io::read_json_file(f.config);
      have_input = have_input || j.contains("input");
      cfg = analysis::apply_config_file(j, kind, cfg);
    }
    if (!have_input) throw_input("input: provide --input or an 'input' key in --config");

    const auto diags = analysis::validate(cfg);
    for (const auto& d : diags)
      std::fprintf(stderr, "%s: %s: %s\n", d.level == analysis::Diagnostic::Level::Error ? "error" : "warning",
                   d.field.c_str(), d.message.c_str());
    for (const auto& d : diags)
      if (d.level == analysis::Diagnostic::Level::Error) return analysis::exit_code(ErrorKind::Input);
    if (f.validate_only) return 0;
    const auto report = analysis::run(cfg);
    analysis::write_report(report, cfg.out_dir);
    return 0;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return analysis::exit_code(e.kind());
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonance analysis for point interactions, quantum graphs and layered crystals"};
  app.require_subcommand(1);

  Flags flags;
  std::string chosen;
  for (const auto& [name, kind, help] : std::vector<std::tuple<std::string, std::string, std::string>>{
           {"analyze-points", "points", "point interactions in R^3"},
           {"analyze-graph", "graph", "quantum graph with leads"},
           {"analyze-crystal", "crystal", "one-dimensional layered crystal"}}) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--input", flags.input, "input JSON file");
    sub->add_option("--config", flags.config, "config JSON; its keys override the flags");
    sub->add_option("--tasks", flags.tasks, "comma list of diagram,resonances,density,chains,structure")
        ->capture_default_str();
    sub->add_option("--rect", flags.rects, "search rectangle re_min,re_max,im_min,im_max (repeatable)")
        ->allow_extra_args(false);
    sub->add_option("--tol-freq", flags.tol_freq, "frequency merge tolerance")->capture_default_str();
    sub->add_option("--tol-coeff", flags.tol_coeff, "coefficient cancellation tolerance")->capture_default_str();
    sub->add_option("--tol-root", flags.tol_root, "root tolerance")->capture_default_str();
    sub->add_option("--out-dir", flags.out_dir, "output directory")->capture_default_str();
    sub->add_flag("--validate", flags.validate_only, "only print diagnostics");
    sub->callback([&chosen, kind = kind] { chosen = kind; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : analysis::exit_code(ErrorKind::Input);
  }
  return run(chosen, flags);
}
