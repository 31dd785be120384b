#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "ratlas/crystal.hpp"
#include "ratlas/density.hpp"
#include "ratlas/diagram.hpp"
#include "ratlas/exppoly.hpp"
#include "ratlas/geometry.hpp"
#include "ratlas/qgraph.hpp"
#include "ratlas/rootfind.hpp"

namespace ratlas::io {

using json = nlohmann::json;

/// Complex numbers are always [re, im].
json to_json(cplx z);
json to_json(const ExpPoly& d);
json to_json(const diagram::DistributionDiagram& diag);
json to_json(const rootfind::SearchRect& rect);

/// Accepts [re, im] or a bare number. `field` names the value in errors.
cplx parse_complex(const json& j, const std::string& field);

/// {centers: [[x,y,z], ...], strengths: [[re,im] | number, ...]}
geometry::PointConfig parse_points(const json& j);
/// {vertices: [...], edges: [{u, v, length}], leads: [{v, count}],
///  coupling: "kirchhoff" | {vertex: [[[re,im], ...], ...]}}
/// Vertices may be referenced by name or by index.
qgraph::GraphSpec parse_graph(const json& j);
/// {breakpoints: [...], permittivities: [...]}
crystal::CrystalSpec parse_crystal(const json& j);
/// {re: [min, max], im: [min, max]}
rootfind::SearchRect parse_rect(const json& j, const std::string& field);

json read_json_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

/// %.17g; integral values keep no trailing decimals.
std::string format_double(double x);

/// re,im,multiplicity sorted by (re, im).
std::string resonance_csv(const rootfind::ResonanceMultiset& res);
/// mu,gamma,R,count sorted by (mu, gamma, R).
std::string density_csv(std::vector<density::Sample> samples);
/// n,j,sign,t,re,im for every positive-slope segment n (1-based), root j
/// (1-based), both signs and t in [t_first, t_last].
std::string predicted_csv(const diagram::DistributionDiagram& diag, int t_first, int t_last);

}  // namespace ratlas::io
