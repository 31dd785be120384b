#include "ratlas/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ratlas::diagram {

namespace {

// Height of p above (positive) or below the line through a and b.
double excess(const DiagramPoint& a, const DiagramPoint& b, const DiagramPoint& p) {
  const double slope = (b.degree - a.degree) / (b.beta - a.beta);
  return p.degree - (a.degree + slope * (p.beta - a.beta));
}

}  // namespace

DistributionDiagram build_diagram(const ExpPoly& d, DiagramOptions opts) {
  if (d.empty()) throw_input("build_diagram: empty exponential polynomial");
  DistributionDiagram diag;
  for (const auto& t : d.terms()) diag.points.push_back({t.frequency, t.poly.degree(), t.poly.leading()});
  const auto& pts = diag.points;
  const int n = static_cast<int>(pts.size());

  auto slack = [&](int a, int b) {
    return opts.incidence_tol * std::max(1, std::abs(pts[b].degree - pts[a].degree));
  };

  // Andrew's monotone chain, upper envelope only; near-collinear middle
  // points are popped so they never become vertices.
  std::vector<int> hull;
  for (int p = 0; p < n; ++p) {
    while (hull.size() >= 2) {
      const int a = hull[hull.size() - 2], b = hull.back();
      if (excess(pts[a], pts[p], pts[b]) <= slack(a, p))
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  }

  for (std::size_t h = 0; h + 1 < hull.size(); ++h) {
    Segment s;
    s.left = hull[h];
    s.right = hull[h + 1];
    const DiagramPoint& a = pts[s.left];
    const DiagramPoint& b = pts[s.right];
    s.mu = (b.degree - a.degree) / (b.beta - a.beta);
    s.r = std::abs(b.degree - a.degree);
    for (int p = s.left; p <= s.right; ++p)
      if (p == s.left || p == s.right || std::abs(excess(a, b, pts[p])) <= slack(s.left, s.right))
        s.incident.push_back(p);

    std::vector<cplx> q(static_cast<std::size_t>(s.r) + 1, cplx{});
    for (int p : s.incident) q[static_cast<std::size_t>(std::abs(pts[p].degree - a.degree))] += pts[p].leading;
    s.q = Polynomial(std::move(q));
    if (s.q.degree() >= 1) s.omegas = cluster_roots(polynomial_roots(s.q), opts.root_cluster_tol);
    diag.segments.push_back(std::move(s));
  }
  return diag;
}

cplx predicted_k(double mu, cplx omega, Sign sign, int t) {
  const double pm = sign == Sign::Plus ? 1.0 : -1.0;
  const cplx i{0.0, 1.0};
  const cplx k_over_mu = pm * 2.0 * kPi * t - i * std::log(static_cast<double>(t)) - pm * kPi / 2.0 -
                         i * std::log(2.0 * kPi * mu) + i * log_branch(omega);
  return mu * k_over_mu;
}

PredictedSequence predicted_resonances(double mu, cplx omega, Sign sign, int t_first, int t_last) {
  if (omega == cplx{}) throw_input("predicted_resonances: omega must be nonzero");
  if (!(mu > 0.0)) throw_input("predicted_resonances: mu must be positive");
  if (t_first < 1) throw_input("predicted_resonances: t must be a positive integer");
  PredictedSequence seq{mu, omega, sign, {}};
  for (int t = t_first; t <= t_last; ++t) seq.terms.push_back({t, predicted_k(mu, omega, sign, t)});
  return seq;
}

std::vector<PredictedSequence> all_predicted(const DistributionDiagram& diag, int t_first,
                                             int t_last) {
  std::vector<PredictedSequence> out;
  for (const auto& s : diag.segments) {
    if (!(s.mu > 0.0)) continue;
    for (const auto& w : s.omegas)
      for (Sign sg : {Sign::Plus, Sign::Minus})
        for (int rep = 0; rep < w.multiplicity; ++rep)
          out.push_back(predicted_resonances(s.mu, w.value, sg, t_first, t_last));
  }
  return out;
}

std::vector<Jump> density_jumps(const DistributionDiagram& diag) {
  std::vector<Jump> out;
  for (const auto& s : diag.segments)
    out.push_back({s.mu, (diag.points[s.right].beta - diag.points[s.left].beta) / kPi});
  return out;
}

int r_narrow(const DistributionDiagram& diag, const geometry::SizeProfile& sizes, double tol) {
  if (diag.segments.empty()) throw_input("r_narrow: diagram has no segments");
  const int n = static_cast<int>(sizes.n());
  const double slack = tol * sizes.diameter;

  auto on_polyline = [&](double beta, int degree) {
    for (const auto& s : diag.segments)
      for (int p : s.incident)
        if (std::abs(diag.points[p].beta - beta) <= slack && diag.points[p].degree == degree)
          return true;
    return false;
  };

  int best = 0;
  for (int m = 2; m <= n; ++m)
    if (std::abs(sizes.sizes[m] - m * sizes.diameter) <= slack * m && on_polyline(-sizes.sizes[m], n - m))
      best = m;

  const int r_last = diag.segments.back().r;
  if (best != r_last)
    throw_tolerance("r_narrow: size characterization gives " + std::to_string(best) +
                    " but the last segment has r = " + std::to_string(r_last));
  return best;
}

StructureReport check_A3_A5(const ExpPoly& d, const geometry::SizeProfile& sizes, double tol) {
  StructureReport rep;
  const int n = static_cast<int>(sizes.n());
  const double slack = tol * std::max(sizes.diameter, 1e-300);
  rep.A3 = true;
  rep.A5 = true;
  for (int m = 0; m <= n; ++m) {
    if (m == 1) continue;
    SizeCheck c;
    c.m = m;
    c.size = sizes.sizes[m];
    const Polynomial p = d.at(-c.size, slack);
    c.is_frequency = !p.is_zero();
    c.degree = p.degree();
    c.degree_ok = c.is_frequency && c.degree == n - m;
    rep.A5 = rep.A5 && c.degree_ok;
    if (m >= 3) rep.A3 = rep.A3 && c.degree_ok;
    rep.per_m.push_back(c);
  }
  rep.A4 = n < 2 || geometry::check_A4(sizes, {tol});
  return rep;
}

double strip_coordinate(cplx k, double mu) {
  const cplx zeta = cplx{0.0, -1.0} * k;
  return (zeta + mu * log_branch(zeta)).real();
}

bool strip_membership(cplx k, double mu, double w) {
  if (w < 0.0) throw_input("strip_membership: w must be nonnegative");
  return std::abs(strip_coordinate(k, mu)) <= w;
}

double fit_strip_width(const std::vector<cplx>& ks, double mu) {
  if (ks.empty()) return 0.0;
  double lo = INFINITY, hi = -INFINITY, big = 0.0;
  for (const cplx k : ks) {
    const double v = strip_coordinate(k, mu);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
    big = std::max(big, std::abs(v));
  }
  return big + (hi - lo);
}

}  // namespace ratlas::diagram
