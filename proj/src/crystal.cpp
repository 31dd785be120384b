#include "ratlas/crystal.hpp"

#include <array>
#include <cmath>
#include <string>

namespace ratlas::crystal {

std::vector<double> CrystalSpec::optical_lengths() const {
  std::vector<double> out;
  for (std::size_t j = 1; j < breakpoints.size(); ++j)
    out.push_back(std::sqrt(permittivities[j]) * (breakpoints[j] - breakpoints[j - 1]));
  return out;
}

void validate(const CrystalSpec& c) {
  if (c.breakpoints.empty()) throw_input("breakpoints: at least one breakpoint is required");
  if (c.permittivities.size() != c.breakpoints.size() + 1)
    throw_input("permittivities: expected " + std::to_string(c.breakpoints.size() + 1) + " entries, got " +
                std::to_string(c.permittivities.size()));
  for (std::size_t j = 0; j < c.breakpoints.size(); ++j) {
    if (!std::isfinite(c.breakpoints[j])) throw_input("breakpoints[" + std::to_string(j) + "]: not finite");
    if (j > 0 && !(c.breakpoints[j] > c.breakpoints[j - 1]))
      throw_input("breakpoints[" + std::to_string(j) + "]: must be strictly increasing");
  }
  for (std::size_t j = 0; j < c.permittivities.size(); ++j)
    if (!(c.permittivities[j] > 0.0) || !std::isfinite(c.permittivities[j]))
      throw_input("permittivities[" + std::to_string(j) + "]: must be positive");
  if (c.layers() > kMaxLayers)
    throw_input("breakpoints: " + std::to_string(c.layers()) + " layers exceed the cap of " +
                std::to_string(kMaxLayers));
}

Eigen::Matrix2cd transfer_matrix(const CrystalSpec& c, cplx k) {
  if (k == cplx{}) throw_input("transfer_matrix: k = 0 is excluded");
  const cplx i{0.0, 1.0};
  Eigen::Matrix2cd t = Eigen::Matrix2cd::Identity();
  auto interface = [&](std::size_t a, std::size_t b) {
    Eigen::Matrix2cd m = Eigen::Matrix2cd::Identity();
    m(1, 1) = std::sqrt(c.permittivities[a] / c.permittivities[b]);
    t = m * t;
  };
  for (std::size_t j = 1; j <= c.layers(); ++j) {
    interface(j - 1, j);
    const cplx phi = std::sqrt(c.permittivities[j]) * k * (c.breakpoints[j] - c.breakpoints[j - 1]);
    Eigen::Matrix2cd p;
    p << std::cos(phi), i * std::sin(phi), i * std::sin(phi), std::cos(phi);
    t = p * t;
  }
  interface(c.layers(), c.layers() + 1);
  return t;
}

cplx F_oracle(const CrystalSpec& c, cplx k) {
  const Eigen::Vector2cd v(1.0, -1.0);
  return v.dot(transfer_matrix(c, k) * v);
}

ExpSum crystal_exppoly(const CrystalSpec& c) {
  validate(c);
  using symbolic::Key;
  using symbolic::Sum;
  const std::size_t n = c.layers();
  using M2 = std::array<std::array<Sum, 2>, 2>;
  auto mul = [](const M2& a, const M2& b) {
    M2 out;
    for (int r = 0; r < 2; ++r)
      for (int col = 0; col < 2; ++col) out[r][col] = a[r][0] * b[0][col] + (a[r][1] * b[1][col]);
    return out;
  };
  auto constant = [&](double x) { return Sum::constant(x, n); };
  auto interface = [&](std::size_t a, std::size_t b) {
    const double rho = std::sqrt(c.permittivities[a] / c.permittivities[b]);
    M2 m;
    m[0][0] = constant(0.5 * (1 + rho));
    m[0][1] = constant(0.5 * (1 - rho));
    m[1][0] = constant(0.5 * (1 - rho));
    m[1][1] = constant(0.5 * (1 + rho));
    return m;
  };

  M2 t;
  t[0][0] = constant(1.0);
  t[1][1] = constant(1.0);
  for (std::size_t j = 1; j <= n; ++j) {
    t = mul(interface(j - 1, j), t);
    Key plus(n, 0), minus(n, 0);
    plus[j - 1] = 1;
    minus[j - 1] = -1;
    M2 p;
    p[0][0] = Sum::monomial(Polynomial::constant(1.0), plus);
    p[1][1] = Sum::monomial(Polynomial::constant(1.0), minus);
    t = mul(p, t);
  }
  t = mul(interface(n, n + 1), t);

  const auto lengths = c.optical_lengths();
  double scale = 0.0;
  for (double l : lengths) scale = std::max(scale, l);
  return ExpSum(t[1][1].canonical(lengths, 1e-9 * std::max(scale, 1e-300), 1e-9).poly);
}

CrystalReport crystal_resonances(const CrystalSpec& c, const rootfind::SearchRect& rect,
                                 rootfind::FindOptions opts) {
  validate(c);
  double total = 0.0;
  for (double l : c.optical_lengths()) total += l;
  // F_oracle is entire; k = 0 only needs a nonzero stand-in for the
  // transfer matrix guard, then the puncture removes anything there.
  auto f = rootfind::make_function(
      [c](cplx k) { return F_oracle(c, k == cplx{} ? cplx{1e-300, 0.0} : k); }, {}, std::max(1.0, 2.0 * total));
  CrystalReport rep;
  rep.zeros = rootfind::find_zeros(f, rect, opts);
  std::erase_if(rep.zeros.zeros, [](const rootfind::Zero& z) { return std::abs(z.location) <= 1e-6; });

  for (const auto& z : rep.zeros.zeros)
    if (z.location.imag() >= 0.0) rep.no_real_resonances = false;

  const ExpSum sum = crystal_exppoly(c);
  try {
    rep.lattice = qgraph::commensurable_reduce(sum);
    rep.no_real_resonances = rep.no_real_resonances && (rep.lattice->xi.empty() || rep.lattice->min_modulus() > 1.0 + rep.lattice->tol);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Numerical) throw;
  }
  return rep;
}

}  // namespace ratlas::crystal
