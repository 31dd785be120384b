#include "ratlas/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <bit>
#include <string>
#include <unordered_map>

namespace ratlas {

cplx ExpSum::operator()(cplx z) const {
  const cplx i{0.0, 1.0};
  cplx acc{};
  for (const auto& t : terms_.terms()) acc += t.poly(z) * std::exp(i * t.frequency * z);
  return acc;
}

ExpPoly ExpSum::to_zeta() const {
  if (terms_.empty()) return {};
  const double b0 = terms_.front().frequency;
  std::vector<ExpTerm> out;
  for (auto it = terms_.terms().rbegin(); it != terms_.terms().rend(); ++it) {
    // C(i zeta): coefficient of zeta^p picks up i^p.
    std::vector<cplx> c = it->poly.coeffs();
    cplx ip{1.0, 0.0};
    for (auto& x : c) {
      x *= ip;
      ip *= cplx{0.0, 1.0};
    }
    out.push_back({b0 - it->frequency, Polynomial(std::move(c))});
  }
  return ExpPoly(std::move(out));
}

bool ExpSum::constant_coefficients() const {
  return std::all_of(terms_.terms().begin(), terms_.terms().end(),
                     [](const ExpTerm& t) { return t.poly.degree() == 0; });
}

namespace symbolic {

namespace {

std::vector<double> abs_coeffs(const Polynomial& p) {
  std::vector<double> out;
  for (const cplx c : p.coeffs()) out.push_back(std::abs(c));
  return out;
}

void add_bound(std::vector<double>& into, const std::vector<double>& b) {
  if (b.size() > into.size()) into.resize(b.size(), 0.0);
  for (std::size_t k = 0; k < b.size(); ++k) into[k] += b[k];
}

}  // namespace

Sum Sum::constant(cplx c, std::size_t dim) { return monomial(Polynomial::constant(c), Key(dim, 0)); }

Sum Sum::monomial(Polynomial coeff, Key key) {
  Sum s;
  if (!coeff.is_zero()) {
    std::vector<double> b = abs_coeffs(coeff);
    s.terms_.emplace(std::move(key), Entry{std::move(coeff), std::move(b)});
  }
  return s;
}

Sum& Sum::operator+=(const Sum& rhs) {
  for (const auto& [key, e] : rhs.terms_) {
    auto it = terms_.find(key);
    if (it == terms_.end()) {
      terms_.emplace(key, e);
      continue;
    }
    it->second.poly += e.poly;
    add_bound(it->second.bound, e.bound);
    if (it->second.poly.is_zero()) terms_.erase(it);
  }
  return *this;
}

Sum operator*(const Sum& a, const Sum& b) {
  Sum out;
  for (const auto& [ka, ea] : a.terms_)
    for (const auto& [kb, eb] : b.terms_) {
      Key k(ka.size());
      for (std::size_t j = 0; j < k.size(); ++j) k[j] = ka[j] + kb[j];
      Sum::Entry e{ea.poly * eb.poly, {}};
      if (e.poly.is_zero()) continue;
      e.bound.assign(ea.bound.size() + eb.bound.size() - 1, 0.0);
      for (std::size_t i = 0; i < ea.bound.size(); ++i)
        for (std::size_t j = 0; j < eb.bound.size(); ++j) e.bound[i + j] += ea.bound[i] * eb.bound[j];
      Sum term;
      term.terms_.emplace(std::move(k), std::move(e));
      out += term;
    }
  return out;
}

Sum Sum::operator-() const {
  Sum out = *this;
  for (auto& [k, e] : out.terms_) e.poly *= -1.0;
  return out;
}

cplx Sum::eval(cplx z, const std::vector<double>& lengths) const {
  const cplx i{0.0, 1.0};
  cplx acc{};
  for (const auto& [key, e] : terms_) {
    double b = 0.0;
    for (std::size_t j = 0; j < key.size(); ++j) b += key[j] * lengths[j];
    acc += e.poly(z) * std::exp(i * b * z);
  }
  return acc;
}

exppoly::Canonical Sum::canonical(const std::vector<double>& lengths, double freq_tol, double coeff_tol) const {
  std::vector<exppoly::RawTerm> raw;
  for (const auto& [key, e] : terms_) {
    double b = 0.0;
    for (std::size_t j = 0; j < key.size(); ++j) b += key[j] * lengths[j];
    raw.push_back({b, e.poly, e.bound});
  }
  return exppoly::canonicalize(std::move(raw), freq_tol, coeff_tol);
}

Sum determinant(const std::vector<std::vector<Sum>>& m) {
  const std::size_t n = m.size();
  if (n > 12) throw_input("symbolic determinant: dimension " + std::to_string(n) + " exceeds the cap of 12");
  for (const auto& row : m)
    if (row.size() != n) throw_input("symbolic determinant: matrix is not square");
  if (n == 0) return Sum::constant(1.0, 0);

  std::size_t dim = 0;
  for (const auto& row : m)
    for (const auto& e : row)
      if (!e.is_zero()) dim = e.terms().begin()->first.size();

  std::unordered_map<unsigned, Sum> memo;
  // det of rows [n - |cols|, n) restricted to the column set `cols`.
  auto rec = [&](auto&& self, unsigned cols) -> Sum {
    const int size = std::popcount(cols);
    if (size == 0) return Sum::constant(1.0, dim);
    if (auto it = memo.find(cols); it != memo.end()) return it->second;
    const std::size_t row = n - static_cast<std::size_t>(size);
    Sum acc;
    int pos = 0;
    for (std::size_t c = 0; c < n; ++c) {
      if (!(cols & (1u << c))) continue;
      const Sum& a = m[row][c];
      if (!a.is_zero()) {
        Sum minor = self(self, cols & ~(1u << c));
        if (!minor.is_zero()) {
          Sum prod = a * minor;
          acc += pos % 2 == 0 ? prod : -prod;
        }
      }
      ++pos;
    }
    memo.emplace(cols, acc);
    return acc;
  };
  return rec(rec, (1u << n) - 1);
}

}  // namespace symbolic
}  // namespace ratlas
