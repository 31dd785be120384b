#include "ratlas/polynomial.hpp"

#include <algorithm>

#include <Eigen/Eigenvalues>

namespace ratlas {

Polynomial::Polynomial(std::vector<cplx> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

Polynomial::Polynomial(std::initializer_list<cplx> coeffs) : coeffs_(coeffs) { trim(); }

Polynomial Polynomial::monomial(cplx c, int degree) {
  std::vector<cplx> v(static_cast<std::size_t>(degree) + 1, cplx{});
  v.back() = c;
  return Polynomial(std::move(v));
}

void Polynomial::trim() {
  while (!coeffs_.empty() && coeffs_.back() == cplx{}) coeffs_.pop_back();
}

cplx Polynomial::operator()(cplx z) const {
  cplx acc{};
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * z + *it;
  return acc;
}

Polynomial Polynomial::derivative() const {
  if (coeffs_.size() <= 1) return {};
  std::vector<cplx> d(coeffs_.size() - 1);
  for (std::size_t k = 1; k < coeffs_.size(); ++k) d[k - 1] = coeffs_[k] * static_cast<double>(k);
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& rhs) {
  if (rhs.coeffs_.size() > coeffs_.size()) coeffs_.resize(rhs.coeffs_.size());
  for (std::size_t k = 0; k < rhs.coeffs_.size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(cplx s) {
  for (auto& c : coeffs_) c *= s;
  trim();
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<cplx> out(a.coeffs_.size() + b.coeffs_.size() - 1, cplx{});
  for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
    for (std::size_t j = 0; j < b.coeffs_.size(); ++j) out[i + j] += a.coeffs_[i] * b.coeffs_[j];
  return Polynomial(std::move(out));
}

std::vector<cplx> polynomial_roots(const Polynomial& p) {
  const int deg = p.degree();
  if (deg < 1) return {};
  const auto& c = p.coeffs();
  const cplx lead = c.back();
  Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -c[i] / lead;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
  if (solver.info() != Eigen::Success) throw_numerical("polynomial_roots: eigenvalue iteration failed");

  const Polynomial dp = p.derivative();
  std::vector<cplx> roots(solver.eigenvalues().data(), solver.eigenvalues().data() + deg);
  for (auto& r : roots) {
    const cplx d = dp(r);
    if (std::abs(d) > 0.0) {
      const cplx polished = r - p(r) / d;
      if (std::abs(p(polished)) <= std::abs(p(r))) r = polished;
    }
  }
  std::sort(roots.begin(), roots.end(), [](cplx a, cplx b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

std::vector<RootWithMultiplicity> cluster_roots(const std::vector<cplx>& roots, double tol) {
  // A k-fold root perturbed by rounding spreads over a radius ~ eps^(1/k),
  // so the admissible radius of a group grows with its size.
  constexpr double kEps = 2.220446049250313e-16;
  struct Group {
    std::vector<cplx> members;
    cplx centre() const {
      cplx s{};
      for (cplx m : members) s += m;
      return s / static_cast<double>(members.size());
    }
  };
  std::vector<Group> groups;
  for (cplx r : roots) groups.push_back({{r}});

  bool merged = true;
  while (merged) {
    merged = false;
    for (std::size_t a = 0; a < groups.size() && !merged; ++a)
      for (std::size_t b = a + 1; b < groups.size() && !merged; ++b) {
        Group combined = groups[a];
        combined.members.insert(combined.members.end(), groups[b].members.begin(),
                                groups[b].members.end());
        const cplx c = combined.centre();
        const double k = static_cast<double>(combined.members.size());
        const double radius = std::max(tol, 4.0 * std::pow(kEps, 1.0 / k)) * std::max(1.0, std::abs(c));
        const bool fits = std::all_of(combined.members.begin(), combined.members.end(),
                                      [&](cplx m) { return std::abs(m - c) <= radius; });
        if (fits) {
          groups[a] = std::move(combined);
          groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(b));
          merged = true;
        }
      }
  }

  std::vector<RootWithMultiplicity> out;
  out.reserve(groups.size());
  for (const auto& g : groups) out.push_back({g.centre(), static_cast<int>(g.members.size())});
  return out;
}

}  // namespace ratlas
