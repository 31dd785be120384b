#include "ratlas/exppoly.hpp"

#include <algorithm>
#include <bit>
#include <cfloat>
#include <cmath>
#include <map>
#include <string>

#include "ratlas/detail/lu.hpp"
#include "ratlas/detail/permutations.hpp"
#include "ratlas/simd/eval_kernels.hpp"

namespace ratlas {

ExpPoly::ExpPoly(std::vector<ExpTerm> terms) : terms_(std::move(terms)) {
  for (std::size_t j = 0; j < terms_.size(); ++j) {
    const std::string where = "terms[" + std::to_string(j) + "]";
    if (!std::isfinite(terms_[j].frequency)) throw_input(where + ".frequency: not finite");
    if (terms_[j].poly.is_zero()) throw_input(where + ".coeffs: zero polynomial");
    for (const cplx c : terms_[j].poly.coeffs())
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
        throw_input(where + ".coeffs: non-finite coefficient");
    if (j > 0 && !(terms_[j].frequency > terms_[j - 1].frequency))
      throw_input(where + ".frequency: frequencies must be strictly increasing");
  }
}

Polynomial ExpPoly::at(double frequency, double tol) const {
  for (const auto& t : terms_)
    if (std::abs(t.frequency - frequency) <= tol) return t.poly;
  return {};
}

namespace exppoly {

std::vector<double> Canonical::cancelled_frequencies() const {
  std::vector<double> out;
  for (const auto& r : report)
    if (r.cancelled) out.push_back(r.frequency);
  return out;
}

Canonical canonicalize(std::vector<RawTerm> raw, double freq_tol, double coeff_tol) {
  std::stable_sort(raw.begin(), raw.end(),
                   [](const RawTerm& a, const RawTerm& b) { return a.frequency < b.frequency; });

  Canonical out;
  std::vector<ExpTerm> terms;
  std::size_t begin = 0;
  while (begin < raw.size()) {
    std::size_t end = begin + 1;
    while (end < raw.size() && raw[end].frequency - raw[end - 1].frequency <= freq_tol) ++end;

    std::size_t width = 0;
    for (std::size_t i = begin; i < end; ++i) {
      width = std::max(width, raw[i].poly.coeffs().size());
      width = std::max(width, raw[i].magnitude.size());
    }
    std::vector<cplx> sum(width, cplx{});
    std::vector<double> mag(width, 0.0);
    for (std::size_t i = begin; i < end; ++i) {
      const auto& c = raw[i].poly.coeffs();
      for (std::size_t k = 0; k < c.size(); ++k) sum[k] += c[k];
      for (std::size_t k = 0; k < width; ++k) {
        const double m = k < raw[i].magnitude.size() ? raw[i].magnitude[k]
                                                     : (k < c.size() ? std::abs(c[k]) : 0.0);
        mag[k] = std::max(mag[k], m);
      }
    }

    FrequencyReport rep;
    rep.frequency = raw[begin + (end - begin - 1) / 2].frequency;
    rep.contributions = static_cast<int>(end - begin);
    for (std::size_t k = 0; k < width; ++k) {
      const double a = std::abs(sum[k]);
      const double threshold = coeff_tol * mag[k];
      if (a <= threshold) {
        if (mag[k] > 0.0) rep.dropped_degrees.push_back(static_cast<int>(k));
        sum[k] = cplx{};
      } else if (a <= 1e3 * threshold) {
        rep.borderline = true;
      }
    }
    Polynomial p(std::move(sum));
    rep.degree = p.degree();
    rep.cancelled = p.is_zero();
    if (!p.is_zero()) terms.push_back({rep.frequency, std::move(p)});
    out.report.push_back(std::move(rep));
    begin = end;
  }
  out.poly = ExpPoly(std::move(terms));
  return out;
}

std::vector<RawTerm> characteristic_terms(const geometry::PointConfig& config) {
  geometry::validate(config);
  if (config.size() > geometry::kMaxBruteForcePoints)
    throw_input("centers: N = " + std::to_string(config.size()) +
                " exceeds the permutation-expansion cap of " +
                std::to_string(geometry::kMaxBruteForcePoints));
  const int n = static_cast<int>(config.size());
  const Eigen::MatrixXd dist = geometry::distance_matrix(config);

  struct Group {
    double frequency = 0.0;
    double coeff = 0.0;
    double max_contribution = 0.0;
  };
  // Keyed by (fixed-point mask, frequency bits). Distances are summed in
  // sorted order so that equal multisets give bitwise-equal frequencies.
  std::map<std::pair<unsigned, std::uint64_t>, Group> groups;
  std::vector<double> moved;
  moved.reserve(static_cast<std::size_t>(n));
  detail::for_each_permutation(n, [&](const std::vector<int>& perm, int sign) {
    unsigned fixed = 0;
    moved.clear();
    for (int j = 0; j < n; ++j) {
      if (perm[j] == j)
        fixed |= 1u << j;
      else
        moved.push_back(dist(j, perm[j]));
    }
    std::sort(moved.begin(), moved.end());
    double alpha = 0.0, k1 = 1.0;
    for (double l : moved) {
      alpha -= l;
      k1 /= l;
    }
    Group& g = groups[{fixed, std::bit_cast<std::uint64_t>(alpha)}];
    g.frequency = alpha;
    g.coeff += sign * k1;
    g.max_contribution = std::max(g.max_contribution, k1);
  });

  std::vector<RawTerm> raw;
  raw.reserve(groups.size());
  for (const auto& [key, g] : groups) {
    // Pi_{fixed} (-zeta - A_j), and the same product with |A_j| for the
    // magnitude bound of every coefficient.
    Polynomial p = Polynomial::constant(g.coeff);
    Polynomial bound = Polynomial::constant(g.max_contribution);
    for (int j = 0; j < n; ++j) {
      if (!(key.first & (1u << j))) continue;
      const cplx a = 4.0 * kPi * config.strengths[j];
      p = p * Polynomial({-a, -1.0});
      bound = bound * Polynomial({std::abs(a), 1.0});
    }
    RawTerm t;
    t.frequency = g.frequency;
    t.poly = std::move(p);
    for (const cplx c : bound.coeffs()) t.magnitude.push_back(c.real());
    raw.push_back(std::move(t));
  }
  return raw;
}

Canonical characteristic_expansion(const geometry::PointConfig& config, ExpansionOptions opts) {
  std::vector<RawTerm> raw = characteristic_terms(config);
  const double diam = geometry::diameter(config);
  return canonicalize(std::move(raw), opts.freq_tol * diam, opts.coeff_tol);
}

ExpPoly build_characteristic_exppoly(const geometry::PointConfig& config, ExpansionOptions opts) {
  return characteristic_expansion(config, opts).poly;
}

namespace {

double log_scale_at(const ExpPoly& d, double re) {
  return std::max(d.front().frequency * re, d.back().frequency * re);
}

}  // namespace

ScaledComplex eval_scaled(const ExpPoly& d, cplx zeta) {
  if (d.empty()) return {};
  const double s = log_scale_at(d, zeta.real());
  cplx acc{};
  for (const auto& t : d.terms()) {
    const double beta = t.frequency;
    acc += t.poly(zeta) * std::polar(std::exp(beta * zeta.real() - s), beta * zeta.imag());
  }
  return {acc, s};
}

cplx eval(const ExpPoly& d, cplx zeta, bool* overflow) {
  const ScaledComplex sc = eval_scaled(d, zeta);
  const double mag = std::abs(sc.mantissa);
  const bool over = mag > 0.0 && std::log(mag) + sc.log_scale > std::log(DBL_MAX);
  if (overflow) *overflow = over;
  if (over) return std::polar(DBL_MAX, std::arg(sc.mantissa));
  return sc.value();
}

void eval_scaled_batch(const ExpPoly& d, std::span<const cplx> zeta, std::span<ScaledComplex> out) {
  if (out.size() < zeta.size()) throw_input("eval_scaled_batch: output span too small");
  const std::size_t n = zeta.size();
  const simd::PackedExpPoly packed = simd::pack(d);
  std::vector<double> re(n), im(n), ore(n), oim(n), os(n);
  for (std::size_t p = 0; p < n; ++p) {
    re[p] = zeta[p].real();
    im[p] = zeta[p].imag();
  }
  simd::scaled_eval_kernel(simd::active_isa())(packed, re.data(), im.data(), n, ore.data(),
                                               oim.data(), os.data());
  for (std::size_t p = 0; p < n; ++p) out[p] = {{ore[p], oim[p]}, os[p]};
}

ScaledPair eval_with_derivative(const ExpPoly& d, cplx zeta) {
  if (d.empty()) return {};
  const double s = log_scale_at(d, zeta.real());
  cplx v{}, dv{};
  for (const auto& t : d.terms()) {
    const double beta = t.frequency;
    const cplx e = std::polar(std::exp(beta * zeta.real() - s), beta * zeta.imag());
    const cplx p = t.poly(zeta);
    v += p * e;
    dv += (beta * p + t.poly.derivative()(zeta)) * e;
  }
  return {v, dv, s};
}

ExpPoly derivative(const ExpPoly& d) {
  std::vector<ExpTerm> out;
  for (const auto& t : d.terms()) {
    Polynomial p = t.poly * cplx(t.frequency) + t.poly.derivative();
    if (!p.is_zero()) out.push_back({t.frequency, std::move(p)});
  }
  return ExpPoly(std::move(out));
}

Eigen::MatrixXcd gamma_matrix(const geometry::PointConfig& config, cplx z) {
  const auto n = static_cast<Eigen::Index>(config.size());
  const cplx i{0.0, 1.0};
  Eigen::MatrixXcd g(n, n);
  for (Eigen::Index r = 0; r < n; ++r)
    for (Eigen::Index c = 0; c < n; ++c) {
      if (r == c) {
        g(r, c) = config.strengths[r] - i * z / (4.0 * kPi);
      } else {
        const double l = geometry::distance(config.centers[r], config.centers[c]);
        g(r, c) = -std::exp(i * z * l) / (4.0 * kPi * l);
      }
    }
  return g;
}

cplx det_gamma(const geometry::PointConfig& config, cplx z) {
  return detail::lu_determinant(gamma_matrix(config, z));
}

double effective_size(const ExpPoly& d) {
  if (d.empty()) throw_input("effective_size: empty exponential polynomial");
  return d.back().frequency - d.front().frequency;
}

}  // namespace exppoly
}  // namespace ratlas
