#pragma once

#include <map>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "ratlas/io.hpp"

namespace ratlas::analysis {

enum class Task { Diagram, Resonances, Density, Chains, Structure };

const char* task_name(Task t);
/// Throws Error(Input) for unknown names.
Task parse_task(const std::string& name);
/// Comma-separated list.
std::set<Task> parse_tasks(const std::string& list);

struct Tolerances {
  double freq = 1e-9;
  double coeff = 1e-9;
  double root = 1e-9;
};

using Input = std::variant<geometry::PointConfig, qgraph::GraphSpec, crystal::CrystalSpec>;

struct AnalysisConfig {
  Input input;
  std::vector<rootfind::SearchRect> search;
  Tolerances tol;
  std::set<Task> tasks;
  std::string out_dir = ".";
};

struct Diagnostic {
  enum class Level { Warning, Error };
  Level level = Level::Warning;
  std::string field;
  std::string message;
};

/// Schema and invariant checks; never throws.
std::vector<Diagnostic> validate(const AnalysisConfig& config);

/// Summary JSON plus CSV tables keyed by file name.
struct Report {
  io::json summary;
  std::map<std::string, std::string> tables;
};

/// Runs the requested tasks in dependency order (expansion, diagram,
/// resonances, density and chains, structure). Throws Error on failure;
/// error diagnostics from validate become Error(Input).
Report run(const AnalysisConfig& config);

/// summary.json plus every table, into `dir` (created if missing).
void write_report(const Report& report, const std::string& dir);

/// 0 success, 2 input, 3 numerical, 4 tolerance.
int exit_code(ErrorKind kind);

/// Config file: {input: {...}, search: [{re, im}], tolerances: {freq,
/// coeff, root}, tasks: [...], out_dir}. Keys present here override `base`;
/// `kind` is "points", "graph" or "crystal".
AnalysisConfig apply_config_file(const io::json& j, const std::string& kind, AnalysisConfig base);

Input parse_input(const io::json& j, const std::string& kind);

}  // namespace ratlas::analysis
