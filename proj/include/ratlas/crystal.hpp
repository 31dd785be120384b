#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ratlas/expsum.hpp"
#include "ratlas/qgraph.hpp"
#include "ratlas/rootfind.hpp"

namespace ratlas::crystal {

/// Layers (x_{j-1}, x_j) with permittivity eps_j, j = 1..N; eps_0 and
/// eps_{N+1} fill the outer half-lines.
struct CrystalSpec {
  std::vector<double> breakpoints;
  std::vector<double> permittivities;

  std::size_t layers() const { return breakpoints.empty() ? 0 : breakpoints.size() - 1; }
  /// sqrt(eps_j) (x_j - x_{j-1}) per layer.
  std::vector<double> optical_lengths() const;
};

inline constexpr std::size_t kMaxLayers = 12;

void validate(const CrystalSpec& c);

/// Maps (f, f'/(ik n)) from just left of x_0 (medium 0) to just right of
/// x_N (medium N+1).
Eigen::Matrix2cd transfer_matrix(const CrystalSpec& c, cplx k);

/// [1, -1] T [1, -1]^T: vanishes iff only outgoing waves survive.
cplx F_oracle(const CrystalSpec& c, cplx k);

/// The same condition in wave-amplitude form as an exponential sum over
/// optical lengths; equals F_oracle / 2.
ExpSum crystal_exppoly(const CrystalSpec& c);

struct CrystalReport {
  rootfind::ResonanceMultiset zeros;
  std::optional<qgraph::CommensurableForm> lattice;  ///< when optical ratios are rational
  bool no_real_resonances = true;                   ///< min |xi| > 1
};

CrystalReport crystal_resonances(const CrystalSpec& c, const rootfind::SearchRect& rect,
                                 rootfind::FindOptions opts = {});

}  // namespace ratlas::crystal
