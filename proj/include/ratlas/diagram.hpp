#pragma once

#include <vector>

#include "ratlas/common.hpp"
#include "ratlas/exppoly.hpp"
#include "ratlas/geometry.hpp"
#include "ratlas/polynomial.hpp"

namespace ratlas::diagram {

/// Point (beta, deg P_beta) of an exponential polynomial.
struct DiagramPoint {
  double beta = 0.0;
  int degree = 0;
  cplx leading;  ///< leading coefficient of P_beta
};

/// One edge of the upper concave envelope. `incident` lists every point on
/// the edge (endpoints and collinear interior points), left to right.
struct Segment {
  int left = 0;   ///< index into DistributionDiagram::points
  int right = 0;
  double mu = 0.0;
  int r = 0;
  std::vector<int> incident;
  Polynomial q;
  std::vector<RootWithMultiplicity> omegas;
};

struct DistributionDiagram {
  std::vector<DiagramPoint> points;  ///< increasing beta
  std::vector<Segment> segments;     ///< left to right, slopes decreasing

  int M() const { return static_cast<int>(segments.size()); }
};

struct DiagramOptions {
  double incidence_tol = 1e-9;  ///< degree-axis slack for collinear points
  double root_cluster_tol = 1e-7;
};

DistributionDiagram build_diagram(const ExpPoly& d, DiagramOptions opts = {});

enum class Sign { Plus, Minus };

struct PredictedTerm {
  int t = 0;
  cplx k;
};

struct PredictedSequence {
  double mu = 0.0;
  cplx omega;
  Sign sign = Sign::Plus;
  std::vector<PredictedTerm> terms;
};

/// k/mu = ±2 pi t - i Ln t ∓ pi/2 - i Ln(2 pi mu) + i Ln omega, t in
/// [t_first, t_last].
cplx predicted_k(double mu, cplx omega, Sign sign, int t);
PredictedSequence predicted_resonances(double mu, cplx omega, Sign sign, int t_first, int t_last);

/// Both signs for every root of every segment with positive slope.
std::vector<PredictedSequence> all_predicted(const DistributionDiagram& diag, int t_first,
                                             int t_last);

struct Jump {
  double mu = 0.0;
  double height = 0.0;  ///< (beta_right - beta_left) / pi = r / (pi mu)
};

std::vector<Jump> density_jumps(const DistributionDiagram& diag);

/// Largest m in [2, N] with Size_m = m diam and (-Size_m, N - m) on the
/// polyline. Throws Error(Tolerance) if this differs from r of the last
/// segment.
int r_narrow(const DistributionDiagram& diag, const geometry::SizeProfile& sizes,
             double tol = 1e-9);

struct SizeCheck {
  int m = 0;
  double size = 0.0;
  bool is_frequency = false;
  int degree = -1;
  bool degree_ok = false;  ///< degree == N - m
};

struct StructureReport {
  bool A3 = false;  ///< checks for 3 <= m <= N
  bool A4 = false;
  bool A5 = false;  ///< checks for m = 0 and 2 <= m <= N
  std::vector<SizeCheck> per_m;
};

StructureReport check_A3_A5(const ExpPoly& d, const geometry::SizeProfile& sizes,
                            double tol = 1e-9);

/// |Re(zeta + mu Ln zeta)| <= w with zeta = -i k.
bool strip_membership(cplx k, double mu, double w);
double strip_coordinate(cplx k, double mu);

/// max |v| plus the spread of v over the sample, v = strip_coordinate.
double fit_strip_width(const std::vector<cplx>& ks, double mu);

}  // namespace ratlas::diagram
