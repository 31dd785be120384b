#include "ratlas/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ratlas/detail/permutations.hpp"

namespace ratlas::geometry {

double distance(const Vec3& a, const Vec3& b) {
  const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
  return std::sqrt(dx * dx + dy * dy + dz * dz);
}

void validate(const PointConfig& config, double separation) {
  const std::size_t n = config.centers.size();
  if (n == 0) throw_input("centers: at least one interaction center is required");
  if (config.strengths.size() != n)
    throw_input("strengths: expected " + std::to_string(n) + " entries, got " +
                std::to_string(config.strengths.size()));
  for (std::size_t j = 0; j < n; ++j)
    for (double c : config.centers[j])
      if (!std::isfinite(c)) throw_input("centers[" + std::to_string(j) + "]: non-finite coordinate");
  if (n < 2) return;
  const double diam = diameter(config);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (distance(config.centers[i], config.centers[j]) <= separation * diam)
        throw_input("centers: points " + std::to_string(i) + " and " + std::to_string(j) +
                    " coincide");
}

Eigen::MatrixXd distance_matrix(const PointConfig& config) {
  const auto n = static_cast<Eigen::Index>(config.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double l = distance(config.centers[i], config.centers[j]);
      d(i, j) = l;
      d(j, i) = l;
    }
  return d;
}

double diameter(const PointConfig& config) {
  double best = 0.0;
  for (std::size_t i = 0; i < config.size(); ++i)
    for (std::size_t j = i + 1; j < config.size(); ++j)
      best = std::max(best, distance(config.centers[i], config.centers[j]));
  return best;
}

std::vector<int> to_permutation(const Cycles& cycles, std::size_t n) {
  std::vector<int> perm(n);
  for (std::size_t j = 0; j < n; ++j) perm[j] = static_cast<int>(j);
  for (const auto& cyc : cycles)
    for (std::size_t k = 0; k < cyc.size(); ++k) perm[cyc[k]] = cyc[(k + 1) % cyc.size()];
  return perm;
}

Cycles to_cycles(const std::vector<int>& perm) {
  Cycles out;
  std::vector<bool> seen(perm.size(), false);
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start] || perm[start] == static_cast<int>(start)) continue;
    std::vector<int> cyc;
    for (int j = static_cast<int>(start); !seen[j]; j = perm[j]) {
      seen[j] = true;
      cyc.push_back(j);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

double displacement(const Eigen::MatrixXd& dist, const std::vector<int>& perm) {
  double s = 0.0;
  for (std::size_t j = 0; j < perm.size(); ++j) s += dist(static_cast<Eigen::Index>(j), perm[j]);
  return s;
}

double cycle_sum(const Eigen::MatrixXd& dist, const Cycles& cycles) {
  return displacement(dist, to_permutation(cycles, static_cast<std::size_t>(dist.rows())));
}

namespace {

void require_enumerable(const PointConfig& config) {
  if (config.size() > kMaxBruteForcePoints)
    throw_input("size_m: N = " + std::to_string(config.size()) + " exceeds the brute-force cap of " +
                std::to_string(kMaxBruteForcePoints) + " points");
}

}  // namespace

SizeProfile size_profile(const PointConfig& config) {
  require_enumerable(config);
  const int n = static_cast<int>(config.size());
  const Eigen::MatrixXd dist = distance_matrix(config);

  SizeProfile profile;
  profile.sizes.assign(static_cast<std::size_t>(n) + 1, 0.0);
  profile.witnesses.assign(static_cast<std::size_t>(n) + 1, std::nullopt);
  std::vector<std::vector<int>> best_perm(static_cast<std::size_t>(n) + 1);
  std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);

  detail::for_each_permutation(n, [&](const std::vector<int>& perm, int) {
    int moved = 0;
    for (int j = 0; j < n; ++j) moved += perm[j] != j;
    const double s = displacement(dist, perm);
    if (!seen[moved] || s > profile.sizes[moved]) {
      seen[moved] = true;
      profile.sizes[moved] = s;
      best_perm[moved] = perm;
    }
  });

  profile.diameter = dist.size() ? dist.maxCoeff() : 0.0;
  for (int m = 0; m <= n; ++m)
    if (seen[m] && m != 1) profile.witnesses[m] = to_cycles(best_perm[m]);
  if (n >= 1) profile.sizes[1] = profile.diameter;
  return profile;
}

SizeValue size_m(const PointConfig& config, int m) {
  if (m < 0 || m > static_cast<int>(config.size()))
    throw_input("size_m: m = " + std::to_string(m) + " outside [0, " +
                std::to_string(config.size()) + "]");
  const SizeProfile profile = size_profile(config);
  return {profile.sizes[m], profile.witnesses[m]};
}

bool is_collinear(const PointConfig& config, double tol) {
  const std::size_t n = config.size();
  if (n < 3) return true;
  std::size_t a = 0, b = 1;
  double diam = -1.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double l = distance(config.centers[i], config.centers[j]);
      if (l > diam) {
        diam = l;
        a = i;
        b = j;
      }
    }
  const Eigen::Vector3d p(config.centers[a].data());
  const Eigen::Vector3d dir = (Eigen::Vector3d(config.centers[b].data()) - p) / diam;
  for (const auto& c : config.centers) {
    const Eigen::Vector3d v = Eigen::Vector3d(c.data()) - p;
    if ((v - v.dot(dir) * dir).norm() > tol * diam) return false;
  }
  return true;
}

bool check_A4(const SizeProfile& sizes, Tolerance tol) {
  const std::size_t n = sizes.n();
  const double slack = tol.relative * sizes.diameter;
  for (std::size_t m = 2; m + 1 <= n; ++m) {
    const double left = sizes.sizes[m] - sizes.sizes[m - 1];
    const double right = sizes.sizes[m + 1] - sizes.sizes[m];
    if (!(left > right + slack && right > slack)) return false;
  }
  return true;
}

bool is_cancelling_quad(const Eigen::MatrixXd& dist, std::array<int, 4> o, double diam,
                        Tolerance tol) {
  const double slack = tol.relative * diam;
  auto at_diam = [&](int i, int j) { return std::abs(dist(o[i], o[j]) - diam) <= slack; };
  if (!(at_diam(0, 1) && at_diam(1, 2) && at_diam(2, 3) && at_diam(3, 0))) return false;
  const double l13 = dist(o[0], o[2]);
  const double l24 = dist(o[1], o[3]);
  return diam > l24 + slack && l24 >= l13 - slack;
}

bool check_A6(const PointConfig& config, Tolerance tol) {
  const int n = static_cast<int>(config.size());
  if (n < 4) return false;
  const Eigen::MatrixXd dist = distance_matrix(config);
  const double diam = dist.maxCoeff();
  const double slack = tol.relative * diam;

  std::vector<std::pair<int, int>> diam_pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(dist(i, j) - diam) <= slack) diam_pairs.emplace_back(i, j);

  for (std::size_t p = 0; p < diam_pairs.size(); ++p)
    for (std::size_t q = p + 1; q < diam_pairs.size(); ++q) {
      const auto [i1, i2] = diam_pairs[p];
      const auto [i3, i4] = diam_pairs[q];
      if (i1 == i3 || i1 == i4 || i2 == i3 || i2 == i4) continue;
      std::array<int, 4> quad{i1, i2, i3, i4};
      std::sort(quad.begin(), quad.end());
      bool reorderable = false;
      do {
        if (is_cancelling_quad(dist, quad, diam, tol)) {
          reorderable = true;
          break;
        }
      } while (std::next_permutation(quad.begin(), quad.end()));
      if (!reorderable) return true;
    }
  return false;
}

}  // namespace ratlas::geometry
