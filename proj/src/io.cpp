#include "ratlas/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ratlas::io {

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }

json to_json(const ExpPoly& d) {
  json out = json::array();
  for (const auto& t : d.terms()) {
    json coeffs = json::array();
    for (const cplx c : t.poly.coeffs()) coeffs.push_back(to_json(c));
    out.push_back({{"frequency", t.frequency}, {"coeffs", coeffs}});
  }
  return out;
}

json to_json(const diagram::DistributionDiagram& diag) {
  json pts = json::array();
  for (const auto& p : diag.points)
    pts.push_back({{"beta", p.beta}, {"degree", p.degree}, {"leading", to_json(p.leading)}});
  json segs = json::array();
  for (const auto& s : diag.segments) {
    json om = json::array();
    for (const auto& w : s.omegas) om.push_back({{"value", to_json(w.value)}, {"multiplicity", w.multiplicity}});
    segs.push_back({{"mu", s.mu}, {"r", s.r}, {"omegas", om}, {"incident", s.incident}});
  }
  return {{"points", pts}, {"segments", segs}, {"M", diag.M()}};
}

json to_json(const rootfind::SearchRect& rect) {
  return {{"re", {rect.re_min(), rect.re_max()}}, {"im", {rect.im_min(), rect.im_max()}}};
}

namespace {

const json& member(const json& j, const std::string& key, const std::string& where) {
  if (!j.is_object()) throw_input(where + ": expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw_input(where + (where.empty() ? "" : ".") + key + ": missing");
  return *it;
}

double number(const json& j, const std::string& field) {
  if (!j.is_number()) throw_input(field + ": expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw_input(field + ": not finite");
  return v;
}

const json& array(const json& j, const std::string& field) {
  if (!j.is_array()) throw_input(field + ": expected an array");
  return j;
}

int vertex_ref(const json& j, const std::vector<std::string>& names, const std::string& field) {
  if (j.is_number_integer()) {
    const long long v = j.get<long long>();
    if (v < 0 || v >= static_cast<long long>(names.size())) throw_input(field + ": vertex index out of range");
    return static_cast<int>(v);
  }
  if (j.is_string()) {
    auto it = std::find(names.begin(), names.end(), j.get<std::string>());
    if (it == names.end()) throw_input(field + ": unknown vertex '" + j.get<std::string>() + "'");
    return static_cast<int>(it - names.begin());
  }
  throw_input(field + ": expected a vertex name or index");
}

}  // namespace

cplx parse_complex(const json& j, const std::string& field) {
  if (j.is_number()) return {number(j, field), 0.0};
  if (j.is_array() && j.size() == 2) return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
  throw_input(field + ": expected [re, im] or a number");
}

geometry::PointConfig parse_points(const json& j) {
  geometry::PointConfig c;
  const json& centers = array(member(j, "centers", ""), "centers");
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const std::string f = "centers[" + std::to_string(i) + "]";
    const json& p = array(centers[i], f);
    if (p.size() != 3) throw_input(f + ": expected three coordinates");
    c.centers.push_back({number(p[0], f + "[0]"), number(p[1], f + "[1]"), number(p[2], f + "[2]")});
  }
  const json& s = array(member(j, "strengths", ""), "strengths");
  for (std::size_t i = 0; i < s.size(); ++i) c.strengths.push_back(parse_complex(s[i], "strengths[" + std::to_string(i) + "]"));
  return c;
}

qgraph::GraphSpec parse_graph(const json& j) {
  qgraph::GraphSpec g;
  const json& vs = array(member(j, "vertices", ""), "vertices");
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i].is_string())
      g.vertices.push_back(vs[i].get<std::string>());
    else if (vs[i].is_number_integer())
      g.vertices.push_back(std::to_string(vs[i].get<long long>()));
    else
      throw_input("vertices[" + std::to_string(i) + "]: expected a name");
  }
  const json& es = array(member(j, "edges", ""), "edges");
  for (std::size_t i = 0; i < es.size(); ++i) {
    const std::string f = "edges[" + std::to_string(i) + "]";
    qgraph::Edge e;
    e.u = vertex_ref(member(es[i], "u", f), g.vertices, f + ".u");
    e.v = vertex_ref(member(es[i], "v", f), g.vertices, f + ".v");
    e.length = number(member(es[i], "length", f), f + ".length");
    g.edges.push_back(e);
  }
  if (j.contains("leads")) {
    const json& ls = array(j["leads"], "leads");
    for (std::size_t i = 0; i < ls.size(); ++i) {
      const std::string f = "leads[" + std::to_string(i) + "]";
      const int v = vertex_ref(member(ls[i], "v", f), g.vertices, f + ".v");
      long long count = 1;
      if (ls[i].contains("count")) {
        if (!ls[i]["count"].is_number_integer() || ls[i]["count"].get<long long>() < 0)
          throw_input(f + ".count: expected a nonnegative integer");
        count = ls[i]["count"].get<long long>();
      }
      for (long long c = 0; c < count; ++c) g.leads.push_back(v);
    }
  }
  if (j.contains("coupling")) {
    const json& cp = j["coupling"];
    if (cp.is_string()) {
      if (cp.get<std::string>() != "kirchhoff") throw_input("coupling: expected \"kirchhoff\" or an object");
    } else if (cp.is_object()) {
      for (auto it = cp.begin(); it != cp.end(); ++it) {
        const std::string f = "coupling." + it.key();
        const int v = vertex_ref(json(it.key()), g.vertices, f);
        if (it.value().is_string() && it.value().get<std::string>() == "kirchhoff") continue;
        const json& rows = array(it.value(), f);
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXcd u(n, n);
        for (Eigen::Index r = 0; r < n; ++r) {
          const std::string fr = f + "[" + std::to_string(r) + "]";
          const json& row = array(rows[r], fr);
          if (static_cast<Eigen::Index>(row.size()) != n) throw_input(fr + ": matrix must be square");
          for (Eigen::Index c = 0; c < n; ++c) u(r, c) = parse_complex(row[c], fr + "[" + std::to_string(c) + "]");
        }
        g.unitary[v] = u;
      }
    } else {
      throw_input("coupling: expected \"kirchhoff\" or an object");
    }
  }
  return g;
}

crystal::CrystalSpec parse_crystal(const json& j) {
  crystal::CrystalSpec c;
  const json& b = array(member(j, "breakpoints", ""), "breakpoints");
  for (std::size_t i = 0; i < b.size(); ++i) c.breakpoints.push_back(number(b[i], "breakpoints[" + std::to_string(i) + "]"));
  const json& p = array(member(j, "permittivities", ""), "permittivities");
  for (std::size_t i = 0; i < p.size(); ++i)
    c.permittivities.push_back(number(p[i], "permittivities[" + std::to_string(i) + "]"));
  return c;
}

rootfind::SearchRect parse_rect(const json& j, const std::string& field) {
  auto pair = [&](const char* key) {
    const json& a = array(member(j, key, field), field + "." + key);
    if (a.size() != 2) throw_input(field + "." + key + ": expected [min, max]");
    const double lo = number(a[0], field + "." + key + "[0]");
    const double hi = number(a[1], field + "." + key + "[1]");
    if (!(lo < hi)) throw_input(field + "." + key + ": min must be below max");
    return std::pair{lo, hi};
  };
  const auto [r0, r1] = pair("re");
  const auto [i0, i1] = pair("im");
  return rootfind::SearchRect::from_bounds(r0, r1, i0, i1);
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw_input(path + ": cannot open");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw_input(path + ": malformed JSON (" + e.what() + ")");
  }
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_input(path + ": cannot write");
  out << content;
  if (!out) throw_input(path + ": write failed");
}

std::string format_double(double x) {
  if (x == 0.0) return "0";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string resonance_csv(const rootfind::ResonanceMultiset& res) {
  auto zeros = res.zeros;
  std::sort(zeros.begin(), zeros.end(), [](const rootfind::Zero& a, const rootfind::Zero& b) {
    if (a.location.real() != b.location.real()) return a.location.real() < b.location.real();
    return a.location.imag() < b.location.imag();
  });
  std::string out = "re,im,multiplicity\n";
  for (const auto& z : zeros)
    out += format_double(z.location.real()) + "," + format_double(z.location.imag()) + "," +
           std::to_string(z.multiplicity) + "\n";
  return out;
}

std::string density_csv(std::vector<density::Sample> samples) {
  std::sort(samples.begin(), samples.end(), [](const density::Sample& a, const density::Sample& b) {
    if (a.mu != b.mu) return a.mu < b.mu;
    if (a.gamma != b.gamma) return a.gamma < b.gamma;
    return a.R < b.R;
  });
  samples.erase(std::unique(samples.begin(), samples.end(),
                            [](const density::Sample& a, const density::Sample& b) {
                              return a.mu == b.mu && a.gamma == b.gamma && a.R == b.R;
                            }),
                samples.end());
  std::string out = "mu,gamma,R,count\n";
  for (const auto& s : samples)
    out += (std::isinf(s.mu) ? std::string("inf") : format_double(s.mu)) + "," + format_double(s.gamma) + "," +
           format_double(s.R) + "," + std::to_string(s.count) + "\n";
  return out;
}

std::string predicted_csv(const diagram::DistributionDiagram& diag, int t_first, int t_last) {
  std::string out = "n,j,sign,t,re,im\n";
  for (std::size_t n = 0; n < diag.segments.size(); ++n) {
    const auto& s = diag.segments[n];
    if (!(s.mu > 0.0)) continue;
    for (std::size_t j = 0; j < s.omegas.size(); ++j)
      for (auto sg : {diagram::Sign::Plus, diagram::Sign::Minus})
        for (int t = t_first; t <= t_last; ++t) {
          const cplx k = diagram::predicted_k(s.mu, s.omegas[j].value, sg, t);
          out += std::to_string(n + 1) + "," + std::to_string(j + 1) + "," + (sg == diagram::Sign::Plus ? "+" : "-") +
                 "," + std::to_string(t) + "," + format_double(k.real()) + "," + format_double(k.imag()) + "\n";
        }
  }
  return out;
}

}  // namespace ratlas::io
