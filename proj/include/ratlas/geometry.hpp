#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ratlas/common.hpp"

namespace ratlas::geometry {

using Vec3 = std::array<double, 3>;

/// Point-interaction data: interaction centers in R^3 and one complex
/// strength per center.
struct PointConfig {
  std::vector<Vec3> centers;
  std::vector<cplx> strengths;

  std::size_t size() const { return centers.size(); }
};

/// Largest N accepted by the factorial enumerations (size_m and the
/// characteristic expansion).
inline constexpr std::size_t kMaxBruteForcePoints = 9;

struct Tolerance {
  double relative = 1e-9;  ///< distance-equality tolerance, relative to diam
};

/// Throws Error(Input) unless N >= 1, strengths match centers, and the
/// centers are pairwise separated by more than `separation * diam`.
void validate(const PointConfig& config, double separation = 1e-12);

double distance(const Vec3& a, const Vec3& b);

Eigen::MatrixXd distance_matrix(const PointConfig& config);

double diameter(const PointConfig& config);

/// Disjoint cycles of a permutation, 0-based, fixed points omitted.
using Cycles = std::vector<std::vector<int>>;

std::vector<int> to_permutation(const Cycles& cycles, std::size_t n);
Cycles to_cycles(const std::vector<int>& perm);

/// Sum over j of |y_j - y_perm(j)|, accumulated in index order.
double displacement(const Eigen::MatrixXd& dist, const std::vector<int>& perm);
double cycle_sum(const Eigen::MatrixXd& dist, const Cycles& cycles);

struct SizeValue {
  double value = 0.0;
  /// Attaining permutation; absent for m = 1 where the value is diam Y by
  /// convention rather than a maximum over permutations.
  std::optional<Cycles> witness;
};

/// m-sizes for every m in [0, N]. sizes[1] is the diameter.
struct SizeProfile {
  std::vector<double> sizes;
  std::vector<std::optional<Cycles>> witnesses;
  double diameter = 0.0;

  std::size_t n() const { return sizes.empty() ? 0 : sizes.size() - 1; }
};

/// Max over permutations moving exactly m points of the total displacement.
SizeValue size_m(const PointConfig& config, int m);

SizeProfile size_profile(const PointConfig& config);

bool is_collinear(const PointConfig& config, double tol = 1e-9);

/// Size_m - Size_{m-1} > Size_{m+1} - Size_m > 0 for 2 <= m <= N-1.
bool check_A4(const SizeProfile& sizes, Tolerance tol = {});

/// True when some four distinct centers carry two disjoint diameter pairs
/// and cannot be ordered as the equal-sided skew quadrilateral
/// l12 = l23 = l34 = l41 = diam > l24 >= l13.
bool check_A6(const PointConfig& config, Tolerance tol = {});

/// Whether the ordered quadruple (i0, i1, i2, i3) has the skew
/// quadrilateral shape named in check_A6.
bool is_cancelling_quad(const Eigen::MatrixXd& dist, std::array<int, 4> order, double diam,
                        Tolerance tol = {});

}  // namespace ratlas::geometry
