#include "ratlas/density.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

namespace ratlas::density {

double certified_radius(const ResonanceMultiset& res) {
  return std::max(std::abs(res.region.re_min()), std::abs(res.region.re_max()));
}

namespace {

void require_certified(const ResonanceMultiset& res, double R) {
  if (!(R >= 0.0)) throw_input("R must be nonnegative");
  if (R > certified_radius(res) * (1.0 + 1e-9))
    throw_input("R = " + std::to_string(R) + " exceeds the certified radius " +
                std::to_string(certified_radius(res)));
}

int count_where(const ResonanceMultiset& res, double mu, double gamma, double R) {
  require_certified(res, R);
  int n = 0;
  for (const auto& z : res.zeros) {
    const cplx k = z.location;
    if (std::abs(k) > R) continue;
    if (mu != kMuInfinity && k.imag() < -mu * std::log(std::abs(k.real()) + 1.0) - gamma) continue;
    n += z.multiplicity;
  }
  return n;
}

}  // namespace

int count_ball(const ResonanceMultiset& res, double R) { return count_where(res, kMuInfinity, 0.0, R); }

int count_log(const ResonanceMultiset& res, double mu, double R) { return count_where(res, mu, 0.0, R); }

int count_strip(const ResonanceMultiset& res, double mu, double gamma, double R) {
  return count_where(res, mu, gamma, R);
}

Fit fit_density(const std::vector<Sample>& samples) {
  std::set<double> radii;
  for (const auto& s : samples) radii.insert(s.R);
  if (radii.size() < 5) throw_input("fit_density: need at least 5 distinct radii");
  if (*radii.begin() <= 0.0 || *radii.rbegin() < 4.0 * *radii.begin())
    throw_input("fit_density: radii must span a factor of at least 4");

  const double n = static_cast<double>(samples.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& s : samples) {
    sx += s.R;
    sy += s.count;
    sxx += s.R * s.R;
    sxy += s.R * s.count;
  }
  Fit f;
  f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  f.intercept = (sy - f.slope * sx) / n;
  double ss = 0;
  for (const auto& s : samples) {
    const double e = s.count - (f.slope * s.R + f.intercept);
    ss += e * e;
  }
  f.residual = std::sqrt(ss / n);
  return f;
}

std::vector<double> geometric_grid(double R_min, double R_max, double ratio) {
  if (!(R_min > 0.0) || !(R_max >= R_min) || !(ratio > 1.0)) throw_input("geometric_grid: bad bounds");
  std::vector<double> out;
  for (double R = R_min; R < R_max * (1.0 - 1e-12); R *= ratio) out.push_back(R);
  out.push_back(R_max);
  return out;
}

std::vector<Sample> strip_profile(const ResonanceMultiset& res, double mu, double gamma,
                                  const std::vector<double>& radii) {
  std::vector<Sample> out;
  for (double R : radii) out.push_back({mu, gamma, R, count_strip(res, mu, gamma, R)});
  return out;
}

std::vector<Sample> log_profile(const ResonanceMultiset& res, double mu, const std::vector<double>& radii) {
  return strip_profile(res, mu, 0.0, radii);
}

JumpAnalysis detect_jumps(const ResonanceMultiset& res, const diagram::DistributionDiagram& diag,
                          const std::vector<double>& radii) {
  JumpAnalysis out;
  std::vector<double> slopes;
  for (const auto& s : diag.segments)
    if (s.mu > 0.0) slopes.push_back(s.mu);
  std::sort(slopes.begin(), slopes.end());

  std::vector<double> grid;
  for (double m : slopes) {
    grid.push_back(0.8 * m);
    grid.push_back(m);
    grid.push_back(1.2 * m);
  }
  for (std::size_t i = 0; i + 1 < slopes.size(); ++i) grid.push_back(0.5 * (slopes[i] + slopes[i + 1]));
  if (!slopes.empty()) grid.push_back(0.5 * slopes.front());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  out.mu_grid = grid;

  for (double m : grid) {
    auto s = log_profile(res, m, radii);
    out.fits.push_back(fit_density(s));
    out.samples.insert(out.samples.end(), s.begin(), s.end());
  }
  auto total = log_profile(res, kMuInfinity, radii);
  out.total = fit_density(total);
  out.samples.insert(out.samples.end(), total.begin(), total.end());

  const double threshold = 0.1 * out.total.slope;
  for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
    const double rise = out.fits[i + 1].slope - out.fits[i].slope;
    if (rise < threshold) continue;
    DetectedJump j;
    j.mu_below = grid[i];
    j.mu_above = grid[i + 1];
    j.location = 0.5 * (grid[i] + grid[i + 1]);
    j.height = rise;
    double best = INFINITY;
    for (const auto& seg : diag.segments) {
      if (!(seg.mu > 0.0)) continue;
      const double dist = std::abs(std::log(seg.mu / j.location));
      if (dist < best) {
        best = dist;
        j.predicted_mu = seg.mu;
        j.predicted_height = (diag.points[seg.right].beta - diag.points[seg.left].beta) / kPi;
      }
    }
    out.jumps.push_back(j);
  }
  return out;
}

namespace {

struct Candidate {
  double dist;
  std::size_t chain;
  std::size_t term;
  std::size_t zero;
};

double radius_for(double c, int t) { return c / std::log(t + std::exp(1.0)); }

void assign(const ResonanceMultiset& res, const std::vector<diagram::PredictedSequence>& seqs,
            MatchReport& rep) {
  std::vector<Candidate> cands;
  for (std::size_t c = 0; c < seqs.size(); ++c)
    for (std::size_t t = 0; t < seqs[c].terms.size(); ++t) {
      const auto& term = seqs[c].terms[t];
      if (!res.region.contains(term.k)) continue;
      const double rad = radius_for(rep.chains[c].radius_constant, term.t);
      for (std::size_t z = 0; z < res.zeros.size(); ++z) {
        const double d = std::abs(res.zeros[z].location - term.k);
        if (d <= rad) cands.push_back({d, c, t, z});
      }
    }
  std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
    if (a.dist != b.dist) return a.dist < b.dist;
    if (a.chain != b.chain) return a.chain < b.chain;
    if (a.term != b.term) return a.term < b.term;
    return a.zero < b.zero;
  });

  std::vector<int> left;
  for (const auto& z : res.zeros) left.push_back(z.multiplicity);
  std::vector<std::vector<bool>> done(seqs.size());
  for (std::size_t c = 0; c < seqs.size(); ++c) done[c].assign(seqs[c].terms.size(), false);

  for (auto& ch : rep.chains) {
    ch.matched.clear();
    ch.unmatched_t.clear();
  }
  for (const auto& cd : cands) {
    if (done[cd.chain][cd.term] || left[cd.zero] == 0) continue;
    done[cd.chain][cd.term] = true;
    --left[cd.zero];
    const auto& term = seqs[cd.chain].terms[cd.term];
    rep.chains[cd.chain].matched.push_back({term.t, term.k, res.zeros[cd.zero].location, cd.dist});
  }
  for (std::size_t c = 0; c < seqs.size(); ++c) {
    auto& ch = rep.chains[c];
    std::sort(ch.matched.begin(), ch.matched.end(), [](const ChainPoint& a, const ChainPoint& b) { return a.t < b.t; });
    for (std::size_t t = 0; t < seqs[c].terms.size(); ++t)
      if (!done[c][t] && res.region.contains(seqs[c].terms[t].k)) ch.unmatched_t.push_back(seqs[c].terms[t].t);
    ch.smallest_t = ch.matched.empty() ? 0 : ch.matched.front().t;
  }
  rep.unmatched_zeros.clear();
  for (std::size_t z = 0; z < res.zeros.size(); ++z)
    if (left[z] > 0) rep.unmatched_zeros.push_back({res.zeros[z].location, left[z]});
}

}  // namespace

MatchReport match_chains(const ResonanceMultiset& res, const std::vector<diagram::PredictedSequence>& seqs) {
  MatchReport rep;
  for (const auto& s : seqs) {
    ChainMatch ch;
    ch.mu = s.mu;
    ch.omega = s.omega;
    ch.sign = s.sign;
    ch.radius_constant = kPi * s.mu;
    rep.chains.push_back(ch);
  }
  assign(res, seqs, rep);

  for (auto& ch : rep.chains) {
    if (ch.matched.empty()) continue;
    double c = 0.0;
    for (const auto& p : ch.matched) c = std::max(c, p.residual * std::log(p.t + std::exp(1.0)));
    ch.radius_constant = std::min(kPi * ch.mu, 3.0 * c);
  }
  assign(res, seqs, rep);
  return rep;
}

ResonanceMultiset find_zeros_mirrored(const rootfind::AnalyticFunction& f, double re_max, double im_min,
                                      double im_max, rootfind::FindOptions opts) {
  if (!(re_max > 0.0)) throw_input("find_zeros_mirrored: re_max must be positive");
  const double delta = std::min(0.01, 0.1 * re_max);
  const auto half = rootfind::find_zeros(f, rootfind::SearchRect::from_bounds(-delta, re_max, im_min, im_max), opts);

  ResonanceMultiset out;
  out.region = rootfind::SearchRect::from_bounds(-half.region.re_max(), half.region.re_max(),
                                                 half.region.im_min(), half.region.im_max());
  out.residual_bound = half.residual_bound;
  for (const auto& z : half.zeros) {
    const double axis_tol = 1e-7 * std::max(1.0, std::abs(z.location));
    if (z.location.real() < -axis_tol) continue;
    if (z.location.real() <= axis_tol) {
      out.zeros.push_back({{0.0, z.location.imag()}, z.multiplicity});
    } else {
      out.zeros.push_back(z);
      out.zeros.push_back({-std::conj(z.location), z.multiplicity});
    }
  }
  std::sort(out.zeros.begin(), out.zeros.end(), [](const rootfind::Zero& a, const rootfind::Zero& b) {
    return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                  : a.location.imag() < b.location.imag();
  });
  return out;
}

}  // namespace ratlas::density
