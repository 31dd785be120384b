#include "ratlas/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace ratlas::analysis {

using io::json;

const char* task_name(Task t) {
  switch (t) {
    case Task::Diagram: return "diagram";
    case Task::Resonances: return "resonances";
    case Task::Density: return "density";
    case Task::Chains: return "chains";
    case Task::Structure: return "structure";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::Diagram, Task::Resonances, Task::Density, Task::Chains, Task::Structure})
    if (name == task_name(t)) return t;
  throw_input("tasks: unknown task '" + name + "'");
}

std::set<Task> parse_tasks(const std::string& list) {
  std::set<Task> out;
  std::stringstream ss(list);
  for (std::string item; std::getline(ss, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.insert(parse_task(item));
  }
  return out;
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Input: return 2;
    case ErrorKind::Numerical: return 3;
    case ErrorKind::Tolerance: return 4;
  }
  return 1;
}

namespace {

void add(std::vector<Diagnostic>& out, Diagnostic::Level lv, std::string field, std::string msg) {
  out.push_back({lv, std::move(field), std::move(msg)});
}

// Ratios that reconstruct to p/q but not exactly: the analysis will treat
// them as commensurable, which may not be what the user meant.
void check_ratios(const std::vector<double>& lengths, const std::string& field, double tol,
                  std::vector<Diagnostic>& out) {
  for (std::size_t i = 0; i < lengths.size(); ++i)
    for (std::size_t j = i + 1; j < lengths.size(); ++j) {
      if (!(lengths[i] > 0.0) || !(lengths[j] > 0.0)) continue;
      const double x = lengths[j] / lengths[i];
      const auto pq = qgraph::rational_approx(x, 1000000, tol);
      if (!pq) continue;
      const double dev = std::abs(x - static_cast<double>(pq->first) / static_cast<double>(pq->second));
      if (dev > 1e-15 * std::max(1.0, std::abs(x)))
        add(out, Diagnostic::Level::Warning, field,
            "near-commensurable: ratio of entries " + std::to_string(j) + " and " + std::to_string(i) + " is " +
                io::format_double(x) + ", within " + io::format_double(dev) + " of " + std::to_string(pq->first) +
                "/" + std::to_string(pq->second));
    }
}

void validate_points(const geometry::PointConfig& c, std::vector<Diagnostic>& out) {
  const auto E = Diagnostic::Level::Error;
  if (c.centers.empty()) add(out, E, "centers", "at least one interaction center is required");
  if (c.strengths.size() != c.centers.size())
    add(out, E, "strengths", "expected " + std::to_string(c.centers.size()) + " entries, got " +
                                 std::to_string(c.strengths.size()));
  if (c.centers.size() > geometry::kMaxBruteForcePoints)
    add(out, E, "centers", std::to_string(c.centers.size()) + " centers exceed the cap of " +
                               std::to_string(geometry::kMaxBruteForcePoints));
  for (std::size_t j = 0; j < c.strengths.size(); ++j)
    if (!std::isfinite(c.strengths[j].real()) || !std::isfinite(c.strengths[j].imag()))
      add(out, E, "strengths[" + std::to_string(j) + "]", "not finite");
  for (std::size_t j = 0; j < c.centers.size(); ++j)
    for (double x : c.centers[j])
      if (!std::isfinite(x)) add(out, E, "centers[" + std::to_string(j) + "]", "non-finite coordinate");
  double diam = 0.0;
  for (std::size_t i = 0; i < c.centers.size(); ++i)
    for (std::size_t j = i + 1; j < c.centers.size(); ++j)
      diam = std::max(diam, geometry::distance(c.centers[i], c.centers[j]));
  for (std::size_t i = 0; i < c.centers.size(); ++i)
    for (std::size_t j = i + 1; j < c.centers.size(); ++j) {
      const double d = geometry::distance(c.centers[i], c.centers[j]);
      const std::string f = "centers[" + std::to_string(j) + "]";
      if (d <= 1e-12 * diam || d == 0.0)
        add(out, E, f, "duplicates centers[" + std::to_string(i) + "]");
      else if (d <= 1e-6 * diam)
        add(out, Diagnostic::Level::Warning, f,
            "nearly coincides with centers[" + std::to_string(i) + "] (distance " + io::format_double(d) + ")");
    }
}

void validate_graph(const qgraph::GraphSpec& g, std::vector<Diagnostic>& out) {
  try {
    qgraph::validate(g);
  } catch (const Error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    add(out, Diagnostic::Level::Error, colon == std::string::npos ? "graph" : msg.substr(0, colon),
        colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
  check_ratios(g.lengths(), "edges", 1e-9, out);
}

void validate_crystal(const crystal::CrystalSpec& c, std::vector<Diagnostic>& out) {
  try {
    crystal::validate(c);
    check_ratios(c.optical_lengths(), "breakpoints", 1e-9, out);
  } catch (const Error& e) {
    const std::string msg = e.what();
    const auto colon = msg.find(':');
    add(out, Diagnostic::Level::Error, colon == std::string::npos ? "crystal" : msg.substr(0, colon),
        colon == std::string::npos ? msg : msg.substr(colon + 2));
  }
}

bool needs_search(const std::set<Task>& t) {
  return t.count(Task::Resonances) || t.count(Task::Density) || t.count(Task::Chains);
}

}  // namespace

std::vector<Diagnostic> validate(const AnalysisConfig& config) {
  std::vector<Diagnostic> out;
  const auto E = Diagnostic::Level::Error;
  std::visit(
      [&](const auto& in) {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, geometry::PointConfig>)
          validate_points(in, out);
        else if constexpr (std::is_same_v<T, qgraph::GraphSpec>)
          validate_graph(in, out);
        else
          validate_crystal(in, out);
      },
      config.input);
  if (config.tasks.empty()) add(out, E, "tasks", "at least one task is required");
  if (!(config.tol.freq > 0.0)) add(out, E, "tolerances.freq", "must be positive");
  if (!(config.tol.coeff > 0.0)) add(out, E, "tolerances.coeff", "must be positive");
  if (!(config.tol.root > 0.0)) add(out, E, "tolerances.root", "must be positive");
  if (needs_search(config.tasks) && config.search.empty())
    add(out, E, "search", "the requested tasks need at least one search rectangle");
  for (std::size_t i = 0; i < config.search.size(); ++i) {
    const auto& r = config.search[i];
    if (!(r.half_re > 0.0) || !(r.half_im > 0.0) || !std::isfinite(r.center.real()) ||
        !std::isfinite(r.center.imag()))
      add(out, E, "search[" + std::to_string(i) + "]", "degenerate rectangle");
  }
  return out;
}

namespace {

struct Pipeline {
  const AnalysisConfig& cfg;
  Report rep;
  std::optional<ExpPoly> d;
  std::vector<exppoly::FrequencyReport> freq_report;
  std::optional<diagram::DistributionDiagram> diag;
  std::vector<rootfind::ResonanceMultiset> zeros;
  std::optional<crystal::CrystalReport> crystal_last;

  bool wants(Task t) const { return cfg.tasks.count(t) > 0; }

  rootfind::FindOptions find_options() const {
    rootfind::FindOptions o;
    o.tol = cfg.tol.root;
    return o;
  }

  void expansion() {
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, geometry::PointConfig>) {
            auto c = exppoly::characteristic_expansion(in, {cfg.tol.freq, cfg.tol.coeff});
            d = c.poly;
            freq_report = c.report;
          } else if constexpr (std::is_same_v<T, qgraph::GraphSpec>) {
            auto s = qgraph::symbolic_det(in, cfg.tol.freq, cfg.tol.coeff);
            freq_report = s.report;
            d = s.sum.to_zeta();
          } else {
            d = crystal::crystal_exppoly(in).to_zeta();
          }
        },
        cfg.input);
    json cancelled = json::array();
    for (const auto& f : freq_report)
      if (f.cancelled) cancelled.push_back(f.frequency);
    rep.summary["exppoly"] = io::to_json(*d);
    rep.summary["cancelled_frequencies"] = cancelled;
    rep.summary["effective_size"] = d->empty() ? 0.0 : exppoly::effective_size(*d);
  }

  void build_diagram() {
    if (d->empty()) throw_numerical("diagram: the characteristic function vanishes identically");
    diag = diagram::build_diagram(*d, {cfg.tol.coeff, 1e-7});
    json j = io::to_json(*diag);
    json mu = json::array(), r = json::array();
    for (const auto& s : diag->segments) {
      mu.push_back(s.mu);
      r.push_back(s.r);
    }
    j["mu"] = mu;
    j["r"] = r;
    json jumps = json::array();
    for (const auto& jp : diagram::density_jumps(*diag)) jumps.push_back({{"mu", jp.mu}, {"height", jp.height}});
    j["jumps"] = jumps;
    rep.summary["diagram"] = j;
  }

  rootfind::ResonanceMultiset search(const rootfind::SearchRect& rect) {
    return std::visit(
        [&](const auto& in) -> rootfind::ResonanceMultiset {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, geometry::PointConfig>) {
            const bool real = std::all_of(in.strengths.begin(), in.strengths.end(),
                                          [](cplx a) { return a.imag() == 0.0; });
            const bool symmetric = std::abs(rect.center.real()) <= 1e-12 * std::max(1.0, rect.half_re);
            if (real && symmetric)
              return density::find_zeros_mirrored(rootfind::exppoly_in_k(*d), rect.re_max(), rect.im_min(),
                                                  rect.im_max(), find_options());
            return rootfind::find_zeros(rootfind::exppoly_in_k(*d), rect, find_options());
          } else if constexpr (std::is_same_v<T, qgraph::GraphSpec>) {
            return qgraph::graph_resonances(in, rect, find_options());
          } else {
            crystal_last = crystal::crystal_resonances(in, rect, find_options());
            return crystal_last->zeros;
          }
        },
        cfg.input);
  }

  void resonances() {
    json arr = json::array();
    for (std::size_t i = 0; i < cfg.search.size(); ++i) {
      zeros.push_back(search(cfg.search[i]));
      const auto& z = zeros.back();
      const std::string name = "resonances_" + std::to_string(i + 1) + ".csv";
      rep.tables[name] = io::resonance_csv(z);
      arr.push_back({{"requested_region", io::to_json(cfg.search[i])},
                     {"region", io::to_json(z.region)},
                     {"total", z.total()},
                     {"distinct", z.zeros.size()},
                     {"residual_bound", z.residual_bound},
                     {"table", name}});
    }
    rep.summary["resonances"] = arr;
  }

  void densities() {
    json arr = json::array();
    const double W = d->empty() ? 0.0 : exppoly::effective_size(*d);
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      const auto& z = zeros[i];
      const double Rc = density::certified_radius(z);
      json j{{"region", io::to_json(z.region)}, {"certified_radius", Rc}, {"effective_size", W}};
      if (!(Rc > 0.0)) throw_input("density: search[" + std::to_string(i) + "] has no certified radius");
      const auto radii = density::geometric_grid(Rc / 8.0, Rc);
      std::vector<density::Sample> samples;
      density::Fit total;
      bool have_slopes = diag && std::any_of(diag->segments.begin(), diag->segments.end(),
                                             [](const diagram::Segment& s) { return s.mu > 0.0; });
      if (have_slopes) {
        auto ja = density::detect_jumps(z, *diag, radii);
        total = ja.total;
        samples = ja.samples;
        json jumps = json::array();
        for (const auto& jp : ja.jumps)
          jumps.push_back({{"mu", jp.location},
                           {"height", jp.height},
                           {"predicted_mu", jp.predicted_mu},
                           {"predicted_height", jp.predicted_height}});
        j["jumps"] = jumps;
        json fits = json::array();
        for (std::size_t g = 0; g < ja.mu_grid.size(); ++g)
          fits.push_back({{"mu", ja.mu_grid[g]}, {"slope", ja.fits[g].slope}, {"residual", ja.fits[g].residual}});
        j["log_fits"] = fits;
      } else {
        samples = density::log_profile(z, density::kMuInfinity, radii);
        total = density::fit_density(samples);
        j["jumps"] = json::array();
      }
      j["total"] = {{"slope", total.slope}, {"intercept", total.intercept}, {"residual", total.residual}};
      j["weyl_ratio"] = W > 0.0 ? total.slope * kPi / W : 0.0;
      const std::string name = "density_" + std::to_string(i + 1) + ".csv";
      rep.tables[name] = io::density_csv(samples);
      j["table"] = name;
      arr.push_back(j);
    }
    rep.summary["density"] = arr;
  }

  void chains() {
    json arr = json::array();
    double mu_min = INFINITY;
    for (const auto& s : diag->segments)
      if (s.mu > 0.0) mu_min = std::min(mu_min, s.mu);
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      const auto& z = zeros[i];
      const double Rc = std::max(std::abs(z.region.re_min()), std::abs(z.region.re_max()));
      const int t_last = std::isfinite(mu_min) ? static_cast<int>(std::ceil(Rc / (2.0 * kPi * mu_min))) + 2 : 0;
      const auto seqs = diagram::all_predicted(*diag, 1, std::max(1, t_last));
      const auto m = density::match_chains(z, seqs);
      json chs = json::array();
      std::string csv = "chain,t,pred_re,pred_im,found_re,found_im,residual\n";
      for (std::size_t c = 0; c < m.chains.size(); ++c) {
        const auto& ch = m.chains[c];
        json res = json::array();
        for (const auto& p : ch.matched) {
          res.push_back(p.residual);
          csv += std::to_string(c + 1) + "," + std::to_string(p.t) + "," + io::format_double(p.predicted.real()) + "," +
                 io::format_double(p.predicted.imag()) + "," + io::format_double(p.found.real()) + "," +
                 io::format_double(p.found.imag()) + "," + io::format_double(p.residual) + "\n";
        }
        chs.push_back({{"mu", ch.mu},
                       {"omega", io::to_json(ch.omega)},
                       {"sign", ch.sign == diagram::Sign::Plus ? "+" : "-"},
                       {"matched", ch.matched.size()},
                       {"smallest_t", ch.smallest_t},
                       {"unmatched_t", ch.unmatched_t},
                       {"residuals", res}});
      }
      json um = json::array();
      for (const auto& u : m.unmatched_zeros) um.push_back({{"k", io::to_json(u.location)}, {"multiplicity", u.multiplicity}});
      const std::string name = "chains_" + std::to_string(i + 1) + ".csv";
      rep.tables[name] = csv;
      arr.push_back({{"region", io::to_json(z.region)}, {"chains", chs}, {"unmatched_zeros", um}, {"table", name}});
      if (i == 0) rep.tables["predicted.csv"] = io::predicted_csv(*diag, 1, std::max(1, t_last));
    }
    rep.summary["chains"] = arr;
  }

  static json form_json(const qgraph::CommensurableForm& f) {
    json xi = json::array(), mult = json::array(), sp = json::array();
    for (const auto& x : f.xi) {
      xi.push_back(io::to_json(x.value));
      mult.push_back(x.multiplicity);
    }
    for (const auto& x : f.spurious) sp.push_back(io::to_json(x.value));
    json P = json::array();
    for (const cplx c : f.P.coeffs()) P.push_back(io::to_json(c));
    return {{"commensurable", true}, {"beta", f.beta},   {"b0", f.b0},          {"d", f.d},
            {"P", P},                {"xi", xi},         {"xi_multiplicity", mult}, {"spurious_xi", sp},
            {"embedded", f.has_embedded()}, {"min_modulus", f.xi.empty() ? 0.0 : f.min_modulus()}};
  }

  void structure() {
    json j;
    std::visit(
        [&](const auto& in) {
          using T = std::decay_t<decltype(in)>;
          if constexpr (std::is_same_v<T, geometry::PointConfig>) {
            const auto sizes = geometry::size_profile(in);
            j["sizes"] = sizes.sizes;
            j["diameter"] = sizes.diameter;
            const geometry::Tolerance tol{cfg.tol.freq};
            j["collinear"] = geometry::is_collinear(in);
            j["A6"] = geometry::check_A6(in, tol);
            const auto s = diagram::check_A3_A5(*d, sizes, cfg.tol.freq);
            j["A3"] = s.A3;
            j["A4"] = s.A4;
            j["A5"] = s.A5;
            json per = json::array();
            for (const auto& c : s.per_m)
              per.push_back({{"m", c.m}, {"size", c.size}, {"is_frequency", c.is_frequency}, {"degree", c.degree}});
            j["per_m"] = per;
            j["effective_size"] = exppoly::effective_size(*d);
            j["weyl_type"] = std::abs(exppoly::effective_size(*d) - sizes.sizes.back()) <= cfg.tol.freq * sizes.diameter;
            j["mu_M"] = diag->segments.empty() ? 0.0 : diag->segments.back().mu;
            j["r_narrow"] = diagram::r_narrow(*diag, sizes, cfg.tol.freq);
          } else if constexpr (std::is_same_v<T, qgraph::GraphSpec>) {
            const auto sd = qgraph::symbolic_det(in, cfg.tol.freq, cfg.tol.coeff);
            if (sd.sum.empty()) throw_numerical("structure: det A vanishes identically");
            if (sd.sum.constant_coefficients()) {
              try {
                j = form_json(qgraph::commensurable_reduce(sd.sum, cfg.tol.root));
              } catch (const Error& e) {
                if (e.kind() != ErrorKind::Numerical) throw;
                j["commensurable"] = false;
                j["commensurable_reason"] = e.what();
              }
            } else {
              j["commensurable"] = false;
              j["commensurable_reason"] = "polynomial coefficients";
            }
            const auto k = qgraph::classify_KSH(sd.sum);
            j["empty"] = k.empty;
            j["mu_max"] = k.mu_max;
            j["neutral_strip"] = k.neutral_strip;
            json logs = json::array();
            for (const auto& l : k.logarithmic) {
              json om = json::array();
              for (const auto& w : l.omegas) om.push_back(io::to_json(w.value));
              logs.push_back({{"mu", l.mu}, {"r", l.r}, {"omegas", om}});
            }
            j["logarithmic"] = logs;
          } else {
            const auto sum = crystal::crystal_exppoly(in);
            try {
              const auto f = qgraph::commensurable_reduce(sum, cfg.tol.root);
              j = form_json(f);
              j["no_real_resonances"] = f.xi.empty() || f.min_modulus() > 1.0 + f.tol;
            } catch (const Error& e) {
              if (e.kind() != ErrorKind::Numerical) throw;
              j["commensurable"] = false;
              j["commensurable_reason"] = e.what();
            }
            j["optical_lengths"] = in.optical_lengths();
            if (crystal_last) j["zeros_in_lower_half_plane"] = crystal_last->no_real_resonances;
          }
        },
        cfg.input);
    rep.summary["structure"] = j;
  }
};

}  // namespace

Report run(const AnalysisConfig& config) {
  const auto diags = validate(config);
  for (const auto& dg : diags)
    if (dg.level == Diagnostic::Level::Error) throw_input(dg.field + ": " + dg.message);

  Pipeline p{config, {}, {}, {}, {}, {}, {}};
  json& s = p.rep.summary;
  s["kind"] = std::visit(
      [](const auto& in) -> std::string {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, geometry::PointConfig>) return "points";
        else if constexpr (std::is_same_v<T, qgraph::GraphSpec>) return "graph";
        else return "crystal";
      },
      config.input);
  s["tolerances"] = {{"freq", config.tol.freq}, {"coeff", config.tol.coeff}, {"root", config.tol.root}};
  json search = json::array();
  for (const auto& r : config.search) search.push_back(io::to_json(r));
  s["search"] = search;
  json tasks = json::array();
  for (Task t : config.tasks) tasks.push_back(task_name(t));
  s["tasks"] = tasks;
  json warnings = json::array();
  for (const auto& dg : diags) warnings.push_back(dg.field + ": " + dg.message);
  s["warnings"] = warnings;

  p.expansion();
  const bool need_diag = p.wants(Task::Diagram) || p.wants(Task::Chains) || p.wants(Task::Density) ||
                         (p.wants(Task::Structure) && std::holds_alternative<geometry::PointConfig>(config.input));
  if (need_diag) p.build_diagram();
  if (p.wants(Task::Resonances) || p.wants(Task::Density) || p.wants(Task::Chains)) p.resonances();
  if (p.wants(Task::Density)) p.densities();
  if (p.wants(Task::Chains)) p.chains();
  if (p.wants(Task::Structure)) p.structure();
  return p.rep;
}

void write_report(const Report& report, const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw_input("out_dir: cannot create '" + dir + "' (" + ec.message() + ")");
  const std::filesystem::path base(dir);
  io::write_file((base / "summary.json").string(), report.summary.dump(2) + "\n");
  for (const auto& [name, content] : report.tables) io::write_file((base / name).string(), content);
}

Input parse_input(const json& j, const std::string& kind) {
  if (kind == "points") return io::parse_points(j);
  if (kind == "graph") return io::parse_graph(j);
  if (kind == "crystal") return io::parse_crystal(j);
  throw_input("kind: unknown input kind '" + kind + "'");
}

AnalysisConfig apply_config_file(const json& j, const std::string& kind, AnalysisConfig base) {
  if (!j.is_object()) throw_input("config: expected an object");
  if (j.contains("input")) base.input = parse_input(j["input"], kind);
  if (j.contains("search")) {
    if (!j["search"].is_array()) throw_input("search: expected an array");
    base.search.clear();
    for (std::size_t i = 0; i < j["search"].size(); ++i)
      base.search.push_back(io::parse_rect(j["search"][i], "search[" + std::to_string(i) + "]"));
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw_input("tolerances: expected an object");
    auto get = [&](const char* key, double& into) {
      if (!t.contains(key)) return;
      if (!t[key].is_number()) throw_input(std::string("tolerances.") + key + ": expected a number");
      into = t[key].get<double>();
    };
    get("freq", base.tol.freq);
    get("coeff", base.tol.coeff);
    get("root", base.tol.root);
  }
  if (j.contains("tasks")) {
    if (!j["tasks"].is_array()) throw_input("tasks: expected an array");
    base.tasks.clear();
    for (const auto& t : j["tasks"]) {
      if (!t.is_string()) throw_input("tasks: expected task names");
      base.tasks.insert(parse_task(t.get<std::string>()));
    }
  }
  if (j.contains("out_dir")) {
    if (!j["out_dir"].is_string()) throw_input("out_dir: expected a string");
    base.out_dir = j["out_dir"].get<std::string>();
  }
  return base;
}

}  // namespace ratlas::analysis
