#include "ratlas/qgraph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "ratlas/detail/lu.hpp"

namespace ratlas::qgraph {

std::vector<double> GraphSpec::lengths() const {
  std::vector<double> out;
  for (const auto& e : edges) out.push_back(e.length);
  return out;
}

double unitarity_defect(const Eigen::MatrixXcd& u) {
  return (u.adjoint() * u - Eigen::MatrixXcd::Identity(u.rows(), u.cols())).norm();
}

namespace {

enum class EndKind { Start, End, Lead };

struct EdgeEnd {
  EndKind kind;
  int index;  // edge or lead index
};

std::vector<EdgeEnd> ends_at(const GraphSpec& g, int v) {
  std::vector<EdgeEnd> out;
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    if (g.edges[j].u == v) out.push_back({EndKind::Start, static_cast<int>(j)});
    if (g.edges[j].v == v) out.push_back({EndKind::End, static_cast<int>(j)});
  }
  for (std::size_t m = 0; m < g.leads.size(); ++m)
    if (g.leads[m] == v) out.push_back({EndKind::Lead, static_cast<int>(m)});
  return out;
}

}  // namespace

int degree(const GraphSpec& g, int vertex) { return static_cast<int>(ends_at(g, vertex).size()); }

void validate(const GraphSpec& g, double unitary_tol) {
  const int nv = static_cast<int>(g.vertices.size());
  if (nv == 0) throw_input("vertices: at least one vertex is required");
  for (std::size_t j = 0; j < g.edges.size(); ++j) {
    const auto& e = g.edges[j];
    const std::string where = "edges[" + std::to_string(j) + "]";
    if (e.u < 0 || e.u >= nv || e.v < 0 || e.v >= nv) throw_input(where + ": unknown vertex");
    if (!(e.length > 0.0) || !std::isfinite(e.length)) throw_input(where + ".length: must be positive");
  }
  for (std::size_t m = 0; m < g.leads.size(); ++m)
    if (g.leads[m] < 0 || g.leads[m] >= nv) throw_input("leads[" + std::to_string(m) + "]: unknown vertex");
  for (const auto& [v, u] : g.unitary) {
    const std::string where = "coupling[" + (v >= 0 && v < nv ? g.vertices[v] : std::to_string(v)) + "]";
    if (v < 0 || v >= nv) throw_input(where + ": unknown vertex");
    const int d = degree(g, v);
    if (u.rows() != d || u.cols() != d)
      throw_input(where + ": matrix must be " + std::to_string(d) + "x" + std::to_string(d) +
                  " (vertex degree)");
    const double defect = unitarity_defect(u);
    if (defect > unitary_tol)
      throw_input(where + ": not unitary, ||U*U - I|| = " + std::to_string(defect));
  }
}

Eigen::MatrixXcd assemble_A(const GraphSpec& g, cplx z, KirchhoffRows rows) {
  if (z == cplx{} && rows == KirchhoffRows::DividedByIk) throw_input("assemble_A: k = 0 is excluded");
  const auto n = static_cast<Eigen::Index>(g.dimension());
  const cplx i{0.0, 1.0};
  const std::size_t ne = g.edges.size();
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n, n);

  // Column/coefficient pairs for the value and the outgoing derivative
  // (divided by ik) at an end.
  using Row = std::vector<std::pair<Eigen::Index, cplx>>;
  auto value = [&](const EdgeEnd& e) -> Row {
    switch (e.kind) {
      case EndKind::Start: return {{2 * e.index, 1.0}, {2 * e.index + 1, 1.0}};
      case EndKind::End: {
        const cplx w = std::exp(i * z * g.edges[e.index].length);
        return {{2 * e.index, w}, {2 * e.index + 1, 1.0 / w}};
      }
      case EndKind::Lead: return {{static_cast<Eigen::Index>(2 * ne) + e.index, 1.0}};
    }
    return {};
  };
  auto slope = [&](const EdgeEnd& e) -> Row {
    switch (e.kind) {
      case EndKind::Start: return {{2 * e.index, 1.0}, {2 * e.index + 1, -1.0}};
      case EndKind::End: {
        const cplx w = std::exp(i * z * g.edges[e.index].length);
        return {{2 * e.index, -w}, {2 * e.index + 1, 1.0 / w}};
      }
      case EndKind::Lead: return {{static_cast<Eigen::Index>(2 * ne) + e.index, 1.0}};
    }
    return {};
  };

  Eigen::Index r = 0;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const auto ends = ends_at(g, v);
    if (ends.empty()) continue;
    if (auto it = g.unitary.find(v); it != g.unitary.end()) {
      const Eigen::MatrixXcd& u = it->second;
      const auto d = static_cast<Eigen::Index>(ends.size());
      const Eigen::MatrixXcd um = u - Eigen::MatrixXcd::Identity(d, d);
      const Eigen::MatrixXcd up = i * (u + Eigen::MatrixXcd::Identity(d, d)) * (i * z);
      for (Eigen::Index row = 0; row < d; ++row, ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
          for (auto [col, x] : value(ends[c])) a(r, col) += um(row, c) * x;
          for (auto [col, x] : slope(ends[c])) a(r, col) += up(row, c) * x;
        }
    } else {
      const Row first = value(ends[0]);
      for (std::size_t e = 1; e < ends.size(); ++e, ++r) {
        for (auto [col, x] : first) a(r, col) += x;
        for (auto [col, x] : value(ends[e])) a(r, col) -= x;
      }
      const cplx scale = rows == KirchhoffRows::DividedByIk ? cplx{1.0} : i * z;
      for (const auto& e : ends)
        for (auto [col, x] : slope(e)) a(r, col) += scale * x;
      ++r;
    }
  }
  return a;
}

cplx numeric_det(const GraphSpec& g, cplx z) { return detail::lu_determinant(assemble_A(g, z)); }

std::vector<std::vector<symbolic::Sum>> symbolic_matrix(const GraphSpec& g) {
  using symbolic::Key;
  using symbolic::Sum;
  const std::size_t n = g.dimension();
  const std::size_t ne = g.edges.size();
  if (n > kMaxSymbolicDimension)
    throw_input("symbolic_det: dimension " + std::to_string(n) + " exceeds the cap of " +
                std::to_string(kMaxSymbolicDimension));
  std::vector<std::vector<Sum>> a(n, std::vector<Sum>(n));

  auto key = [&](int edge, int power) {
    Key k(ne, 0);
    if (edge >= 0) k[edge] = power;
    return k;
  };
  const cplx i{0.0, 1.0};
  // (column, coefficient polynomial in z, key) triples.
  struct Piece {
    std::size_t col;
    cplx c;
    Key k;
  };
  auto value = [&](const EdgeEnd& e) -> std::vector<Piece> {
    switch (e.kind) {
      case EndKind::Start: return {{2u * e.index, 1.0, key(-1, 0)}, {2u * e.index + 1, 1.0, key(-1, 0)}};
      case EndKind::End: return {{2u * e.index, 1.0, key(e.index, 1)}, {2u * e.index + 1, 1.0, key(e.index, -1)}};
      case EndKind::Lead: return {{2 * ne + e.index, 1.0, key(-1, 0)}};
    }
    return {};
  };
  auto slope = [&](const EdgeEnd& e) -> std::vector<Piece> {
    switch (e.kind) {
      case EndKind::Start: return {{2u * e.index, 1.0, key(-1, 0)}, {2u * e.index + 1, -1.0, key(-1, 0)}};
      case EndKind::End: return {{2u * e.index, -1.0, key(e.index, 1)}, {2u * e.index + 1, 1.0, key(e.index, -1)}};
      case EndKind::Lead: return {{2 * ne + e.index, 1.0, key(-1, 0)}};
    }
    return {};
  };
  auto put = [&](std::size_t r, const Piece& p, const Polynomial& factor) {
    a[r][p.col] += Sum::monomial(factor * p.c, p.k);
  };

  std::size_t r = 0;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const auto ends = ends_at(g, v);
    if (ends.empty()) continue;
    if (auto it = g.unitary.find(v); it != g.unitary.end()) {
      const Eigen::MatrixXcd& u = it->second;
      const auto d = static_cast<Eigen::Index>(ends.size());
      const Eigen::MatrixXcd um = u - Eigen::MatrixXcd::Identity(d, d);
      const Eigen::MatrixXcd up = i * (u + Eigen::MatrixXcd::Identity(d, d));
      for (Eigen::Index row = 0; row < d; ++row, ++r)
        for (Eigen::Index c = 0; c < d; ++c) {
          for (const auto& p : value(ends[c])) put(r, p, Polynomial::constant(um(row, c)));
          // Psi' = i z times the divided slope.
          for (const auto& p : slope(ends[c])) put(r, p, Polynomial({0.0, up(row, c) * i}));
        }
    } else {
      for (std::size_t e = 1; e < ends.size(); ++e, ++r) {
        for (const auto& p : value(ends[0])) put(r, p, Polynomial::constant(1.0));
        for (const auto& p : value(ends[e])) put(r, p, Polynomial::constant(-1.0));
      }
      for (const auto& e : ends)
        for (const auto& p : slope(e)) put(r, p, Polynomial::constant(1.0));
      ++r;
    }
  }
  return a;
}

SymbolicDet symbolic_det(const GraphSpec& g, double freq_tol, double coeff_tol) {
  validate(g);
  const symbolic::Sum det = symbolic::determinant(symbolic_matrix(g));
  const auto lengths = g.lengths();
  const double scale = lengths.empty() ? 1.0 : *std::max_element(lengths.begin(), lengths.end());
  // Graph entries are O(1) (unit exponentials, U entries, powers of z), so a
  // coefficient is also judged against the largest same-degree magnitude in
  // the whole determinant: rank-deficient U +- I blocks leave ~1e-16 residues
  // whose own contribution bound is just as small.
  std::vector<double> global;
  for (const auto& [key, e] : det.terms()) {
    if (e.bound.size() > global.size()) global.resize(e.bound.size(), 0.0);
    for (std::size_t k = 0; k < e.bound.size(); ++k) global[k] = std::max(global[k], e.bound[k]);
  }
  std::vector<exppoly::RawTerm> raw;
  for (const auto& [key, e] : det.terms()) {
    double b = 0.0;
    for (std::size_t j = 0; j < key.size(); ++j) b += key[j] * lengths[j];
    std::vector<double> mag(e.bound.size());
    for (std::size_t k = 0; k < mag.size(); ++k) mag[k] = std::max(e.bound[k], global[k]);
    raw.push_back({b, e.poly, std::move(mag)});
  }
  exppoly::Canonical c = exppoly::canonicalize(std::move(raw), freq_tol * scale, coeff_tol);
  return {ExpSum(std::move(c.poly)), std::move(c.report)};
}

std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den, double tol) {
  if (!std::isfinite(x)) return std::nullopt;
  // Convergents h/k of the continued fraction of x.
  long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  double y = x;
  for (int it = 0; it < 64; ++it) {
    const double a = std::floor(y);
    if (std::abs(a) > 1e15) break;
    const auto ai = static_cast<long long>(a);
    const long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1;
    h1 = h2;
    k0 = k1;
    k1 = k2;
    if (std::abs(x - static_cast<double>(h1) / static_cast<double>(k1)) <= tol * std::max(1.0, std::abs(x)))
      return std::make_pair(h1, k1);
    const double frac = y - a;
    if (frac == 0.0) break;
    y = 1.0 / frac;
  }
  return std::nullopt;
}

bool CommensurableForm::has_embedded() const {
  return std::any_of(xi.begin(), xi.end(), [&](const Xi& x) { return std::abs(std::abs(x.value) - 1.0) <= std::max(tol, 1e-8);
  });
}

double CommensurableForm::min_modulus() const {
  double m = INFINITY;
  for (const auto& x : xi) m = std::min(m, std::abs(x.value));
  return m;
}

CommensurableForm commensurable_reduce(const ExpSum& f, double tol) {
  if (f.empty()) throw_numerical("commensurable_reduce: identically zero determinant");
  if (!f.constant_coefficients())
    throw_numerical("commensurable_reduce: unsupported, coefficients depend on z (numeric path only)");
  const auto& terms = f.terms().terms();
  CommensurableForm form;
  form.tol = tol;
  form.b0 = terms.front().frequency;
  form.d.push_back(0);
  if (terms.size() == 1) {
    form.P = Polynomial::constant(terms.front().poly[0]);
    return form;
  }

  const double delta1 = terms[1].frequency - form.b0;
  std::vector<std::pair<long long, long long>> ratios;
  long long lcm = 1;
  for (std::size_t l = 1; l < terms.size(); ++l) {
    const double x = (terms[l].frequency - form.b0) / delta1;
    const auto pq = rational_approx(x, 1000000, tol);
    if (!pq)
      throw_numerical("commensurable_reduce: incommensurable frequencies (ratio " + std::to_string(x) +
                      " has no rational form with denominator <= 1e6)");
    ratios.push_back(*pq);
    lcm = std::lcm(lcm, pq->second);
    if (lcm > 1000000) throw_numerical("commensurable_reduce: incommensurable frequencies (denominator cap)");
  }
  std::vector<long long> n;
  long long g = 0;
  for (const auto& [p, q] : ratios) {
    n.push_back(p * (lcm / q));
    g = std::gcd(g, n.back());
  }
  form.beta = delta1 * static_cast<double>(g) / static_cast<double>(lcm);
  for (long long v : n) form.d.push_back(static_cast<int>(v / g));

  // Continued fractions at tolerance tol reconstruct any ratio with a
  // denominator near tol^-1/2; such a degree is noise, not structure.
  if (form.d.back() > kMaxLatticeDegree)
    throw_numerical("commensurable_reduce: incommensurable frequencies (P would have degree " +
                    std::to_string(form.d.back()) + " > " + std::to_string(kMaxLatticeDegree) + ")");
  std::vector<cplx> coeffs(static_cast<std::size_t>(form.d.back()) + 1, cplx{});
  for (std::size_t l = 0; l < terms.size(); ++l) coeffs[form.d[l]] += terms[l].poly[0];
  form.P = Polynomial(std::move(coeffs));

  for (const auto& r : cluster_roots(polynomial_roots(form.P))) {
    const Xi x{r.value, r.multiplicity};
    (std::abs(x.value) >= 1.0 - tol ? form.xi : form.spurious).push_back(x);
  }
  return form;
}

std::vector<LatticePoint> lattice(const CommensurableForm& form, const rootfind::SearchRect& rect) {
  std::vector<LatticePoint> out;
  if (!(form.beta > 0.0)) return out;
  for (std::size_t j = 0; j < form.xi.size(); ++j) {
    const cplx xi = form.xi[j].value;
    const double im = -std::log(std::abs(xi)) / form.beta;
    const double re0 = arg_branch(xi) / form.beta;
    const double step = 2.0 * kPi / form.beta;
    const auto t_lo = static_cast<long long>(std::ceil((rect.re_min() - re0) / step));
    const auto t_hi = static_cast<long long>(std::floor((rect.re_max() - re0) / step));
    for (long long t = t_lo; t <= t_hi; ++t) {
      const cplx k{re0 + step * static_cast<double>(t), im};
      if (rect.contains(k)) out.push_back({k, form.xi[j].multiplicity, static_cast<int>(t), j});
    }
  }
  std::sort(out.begin(), out.end(), [](const LatticePoint& a, const LatticePoint& b) {
    return a.k.real() != b.k.real() ? a.k.real() < b.k.real() : a.k.imag() < b.k.imag();
  });
  return out;
}

StructureReport classify_KSH(const ExpSum& f) {
  StructureReport rep;
  if (f.size() <= 1) return rep;
  rep.empty = false;
  rep.diagram = diagram::build_diagram(f.to_zeta());
  rep.mu_max = 0.0;
  for (const auto& s : rep.diagram.segments) {
    if (s.mu < 0.0)
      throw_numerical("classify_KSH: segment with slope " + std::to_string(s.mu) +
                      " implies infinitely many zeros in the upper half-plane");
    if (s.mu == 0.0) {
      rep.neutral_strip = true;
    } else {
      rep.logarithmic.push_back({s.mu, s.r, s.omegas});
      rep.mu_max = std::max(rep.mu_max, s.mu);
    }
  }
  return rep;
}

rootfind::ResonanceMultiset graph_resonances(const GraphSpec& g, const rootfind::SearchRect& rect,
                                             rootfind::FindOptions opts) {
  validate(g);
  double total = 0.0;
  for (const auto& e : g.edges) total += e.length;
  // Undivided rows keep det entire at the origin; its zero there is then
  // removed with the puncture.
  auto f = rootfind::make_function(
      [g](cplx z) { return detail::lu_determinant(assemble_A(g, z, KirchhoffRows::Undivided)); },
      {}, std::max(1.0, 2.0 * total));
  rootfind::ResonanceMultiset res = rootfind::find_zeros(f, rect, opts);
  std::erase_if(res.zeros, [](const rootfind::Zero& z) { return std::abs(z.location) <= 1e-6; });
  return res;
}

}  // namespace ratlas::qgraph
