#pragma once

#include <limits>
#include <vector>

#include "ratlas/diagram.hpp"
#include "ratlas/rootfind.hpp"

namespace ratlas::density {

using rootfind::ResonanceMultiset;

/// mu = +infinity: count_log degenerates to count_ball.
inline constexpr double kMuInfinity = std::numeric_limits<double>::infinity();

/// Largest radius the region vouches for: the farther vertical edge. The
/// vertical extent is assumed to contain the strip of zeros.
double certified_radius(const ResonanceMultiset& res);

int count_ball(const ResonanceMultiset& res, double R);
/// #{k : -mu ln(|Re k| + 1) <= Im k, |k| <= R}
int count_log(const ResonanceMultiset& res, double mu, double R);
/// #{k : -mu ln(|Re k| + 1) - gamma <= Im k, |k| <= R}
int count_strip(const ResonanceMultiset& res, double mu, double gamma, double R);

struct Sample {
  double mu = 0.0;
  double gamma = 0.0;
  double R = 0.0;
  int count = 0;
};

struct Fit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< root-mean-square deviation
};

/// Least-squares line count = slope R + intercept. Needs >= 5 distinct
/// radii spanning a factor >= 4.
Fit fit_density(const std::vector<Sample>& samples);

/// R_min, 1.3 R_min, ... up to R_max (R_max appended if missed).
std::vector<double> geometric_grid(double R_min, double R_max, double ratio = 1.3);

std::vector<Sample> log_profile(const ResonanceMultiset& res, double mu, const std::vector<double>& radii);
std::vector<Sample> strip_profile(const ResonanceMultiset& res, double mu, double gamma,
                                  const std::vector<double>& radii);

struct DetectedJump {
  double mu_below = 0.0;  ///< last grid value before the jump
  double mu_above = 0.0;  ///< first grid value after
  double location = 0.0;  ///< midpoint estimate
  double height = 0.0;    ///< increase of the fitted density
  double predicted_mu = 0.0;
  double predicted_height = 0.0;
};

struct JumpAnalysis {
  std::vector<double> mu_grid;
  std::vector<Fit> fits;  ///< one per grid value
  Fit total;              ///< mu = +infinity
  std::vector<DetectedJump> jumps;
  std::vector<Sample> samples;
};

/// Fitted log densities on the grid {0.8, 1, 1.2} x mu_n plus midpoints
/// between consecutive slopes; a jump is an increase of at least
/// 0.1 x total density between neighbouring grid values.
JumpAnalysis detect_jumps(const ResonanceMultiset& res, const diagram::DistributionDiagram& diag,
                          const std::vector<double>& radii);

struct ChainPoint {
  int t = 0;
  cplx predicted;
  cplx found;
  double residual = 0.0;
};

struct ChainMatch {
  double mu = 0.0;
  cplx omega;
  diagram::Sign sign = diagram::Sign::Plus;
  double radius_constant = 0.0;  ///< c in the radius c / ln(t + e)
  std::vector<ChainPoint> matched;
  std::vector<int> unmatched_t;
  int smallest_t = 0;  ///< 0 when nothing matched
};

struct MatchReport {
  std::vector<ChainMatch> chains;
  std::vector<rootfind::Zero> unmatched_zeros;  ///< remaining multiplicity
};

/// Greedy nearest-neighbour assignment of zeros to predicted terms lying in
/// the certified region, radius c / ln(t + e) with c = pi mu, then refitted
/// once as 3 max(residual ln(t + e)) (capped at pi mu).
MatchReport match_chains(const ResonanceMultiset& res, const std::vector<diagram::PredictedSequence>& seqs);

/// Zeros of f over [-re_max, re_max] x [im_min, im_max] for functions with
/// the mirror symmetry k -> -conj(k): searches [-delta, re_max] only.
ResonanceMultiset find_zeros_mirrored(const rootfind::AnalyticFunction& f, double re_max, double im_min,
                                      double im_max, rootfind::FindOptions opts = {});

}  // namespace ratlas::density
