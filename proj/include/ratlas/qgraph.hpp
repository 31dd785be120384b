#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ratlas/diagram.hpp"
#include "ratlas/expsum.hpp"
#include "ratlas/rootfind.hpp"

namespace ratlas::qgraph {

struct Edge {
  int u = 0;
  int v = 0;
  double length = 1.0;
};

/// Internal edges run from u (x = 0) to v (x = length). Leads run outward
/// from their anchor vertex. At a vertex the edge ends are ordered by edge
/// index (start before end for loops), then its leads by lead index; a KSH
/// matrix U uses this order. Vertices without a U are Kirchhoff.
struct GraphSpec {
  std::vector<std::string> vertices;
  std::vector<Edge> edges;
  std::vector<int> leads;  ///< anchor vertex per lead
  std::map<int, Eigen::MatrixXcd> unitary;

  std::size_t dimension() const { return 2 * edges.size() + leads.size(); }
  std::vector<double> lengths() const;
};

inline constexpr std::size_t kMaxSymbolicDimension = 12;

/// Throws Error(Input) naming the offending field.
void validate(const GraphSpec& g, double unitary_tol = 1e-10);

double unitarity_defect(const Eigen::MatrixXcd& u);
int degree(const GraphSpec& g, int vertex);

enum class KirchhoffRows { DividedByIk, Undivided };

/// Rows: per vertex, continuity then the outgoing-derivative sum
/// (Kirchhoff), or (U - I) Psi + i (U + I) Psi' (KSH). Unknowns A_j, B_j per
/// internal edge then C_m per lead.
Eigen::MatrixXcd assemble_A(const GraphSpec& g, cplx z, KirchhoffRows rows = KirchhoffRows::DividedByIk);

cplx numeric_det(const GraphSpec& g, cplx z);

std::vector<std::vector<symbolic::Sum>> symbolic_matrix(const GraphSpec& g);

struct SymbolicDet {
  ExpSum sum;
  std::vector<exppoly::FrequencyReport> report;
};
SymbolicDet symbolic_det(const GraphSpec& g, double freq_tol = 1e-9, double coeff_tol = 1e-9);

/// Continued-fraction reconstruction p/q of x with q <= max_den and
/// |x - p/q| <= tol max(1, |x|).
std::optional<std::pair<long long, long long>> rational_approx(double x, long long max_den = 1000000,
                                                              double tol = 1e-9);

struct Xi {
  cplx value;
  int multiplicity = 1;
};

struct CommensurableForm {
  double b0 = 0.0;
  double beta = 0.0;
  std::vector<int> d;  ///< exponents, d[0] = 0
  Polynomial P;        ///< in w = e^{i beta z}
  std::vector<Xi> xi;        ///< |xi| >= 1 - tol
  std::vector<Xi> spurious;  ///< |xi| < 1 - tol, excluded
  double tol = 1e-9;

  bool has_embedded() const;
  double min_modulus() const;
};

inline constexpr int kMaxLatticeDegree = 512;

/// Needs constant coefficients; polynomial coefficients are unsupported
/// and rejected with Error(Numerical), as are incommensurable frequencies.
CommensurableForm commensurable_reduce(const ExpSum& f, double tol = 1e-9);

struct LatticePoint {
  cplx k;
  int multiplicity = 1;
  int t = 0;
  std::size_t xi_index = 0;
};

/// beta k = 2 pi t - i Ln|xi| + Arg xi for every t with k in rect.
std::vector<LatticePoint> lattice(const CommensurableForm& form, const rootfind::SearchRect& rect);

struct LogSegment {
  double mu = 0.0;
  int r = 0;
  std::vector<RootWithMultiplicity> omegas;
};

struct StructureReport {
  bool empty = true;  ///< single exp-monomial: no zeros at all
  double mu_max = 0.0;
  std::vector<LogSegment> logarithmic;
  bool neutral_strip = false;
  diagram::DistributionDiagram diagram;
};

/// Diagram of D(zeta) = e^{b_0 zeta} F(i zeta). A negative slope would put
/// infinitely many zeros in the upper half-plane and raises Error(Numerical).
StructureReport classify_KSH(const ExpSum& f);

/// Zeros of det A in rect, origin punctured (radius 1e-6).
rootfind::ResonanceMultiset graph_resonances(const GraphSpec& g, const rootfind::SearchRect& rect,
                                             rootfind::FindOptions opts = {});

}  // namespace ratlas::qgraph
