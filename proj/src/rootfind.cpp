#include "ratlas/rootfind.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <optional>
#include <sstream>

#include "ratlas/detail/parallel.hpp"

namespace ratlas::rootfind {

SearchRect SearchRect::from_bounds(double re_min, double re_max, double im_min, double im_max) {
  if (!(re_max > re_min) || !(im_max > im_min)) throw_input("rect: bounds must satisfy min < max");
  return {{0.5 * (re_min + re_max), 0.5 * (im_min + im_max)}, 0.5 * (re_max - re_min),
          0.5 * (im_max - im_min)};
}

bool SearchRect::contains(cplx z, double slack) const {
  return z.real() >= re_min() - slack && z.real() <= re_max() + slack && z.imag() >= im_min() - slack &&
         z.imag() <= im_max() + slack;
}

double SearchRect::diameter() const { return 2.0 * std::hypot(half_re, half_im); }

int ResonanceMultiset::total() const {
  int n = 0;
  for (const auto& z : zeros) n += z.multiplicity;
  return n;
}

void AnalyticFunction::evaluate(std::span<const cplx> z, std::span<ScaledComplex> out) const {
  if (batch) {
    batch(z, out);
    return;
  }
  for (std::size_t i = 0; i < z.size(); ++i) out[i] = value(z[i]);
}

AnalyticFunction make_function(std::function<cplx(cplx)> f, std::function<cplx(cplx)> df,
                               double phase_rate) {
  AnalyticFunction a;
  a.value = [f](cplx z) { return ScaledComplex{f(z), 0.0}; };
  if (df) a.with_derivative = [f, df](cplx z) { return ScaledPair{f(z), df(z), 0.0}; };
  a.phase_rate = phase_rate;
  return a;
}

namespace {

double exppoly_phase_rate(const ExpPoly& d) {
  if (d.empty()) return 1.0;
  return std::max(1.0, d.back().frequency - d.front().frequency);
}

}  // namespace

AnalyticFunction exppoly_in_zeta(const ExpPoly& d) {
  AnalyticFunction a;
  a.value = [d](cplx z) { return exppoly::eval_scaled(d, z); };
  a.with_derivative = [d](cplx z) { return exppoly::eval_with_derivative(d, z); };
  a.batch = [d](std::span<const cplx> z, std::span<ScaledComplex> out) {
    exppoly::eval_scaled_batch(d, z, out);
  };
  a.phase_rate = exppoly_phase_rate(d);
  return a;
}

AnalyticFunction exppoly_in_k(const ExpPoly& d) {
  const cplx mi{0.0, -1.0};
  AnalyticFunction a;
  a.value = [d, mi](cplx k) { return exppoly::eval_scaled(d, mi * k); };
  a.with_derivative = [d, mi](cplx k) {
    ScaledPair p = exppoly::eval_with_derivative(d, mi * k);
    p.derivative *= mi;
    return p;
  };
  a.batch = [d, mi](std::span<const cplx> k, std::span<ScaledComplex> out) {
    std::vector<cplx> zeta(k.size());
    for (std::size_t i = 0; i < k.size(); ++i) zeta[i] = mi * k[i];
    exppoly::eval_scaled_batch(d, zeta, out);
  };
  a.phase_rate = exppoly_phase_rate(d);
  return a;
}

namespace {

struct BoundarySample {
  double u;  // perimeter parameter in [0, 4]
  cplx mantissa;
  double rho = 0.0;  // |f / f'|, about distance to the nearest zero / multiplicity
};

cplx boundary_point(const SearchRect& r, double u) {
  const std::array<cplx, 5> c = {cplx{r.re_min(), r.im_min()}, cplx{r.re_max(), r.im_min()},
                                 cplx{r.re_max(), r.im_max()}, cplx{r.re_min(), r.im_max()},
                                 cplx{r.re_min(), r.im_min()}};
  const int e = std::min(3, static_cast<int>(u));
  const double s = u - e;
  return c[e] + s * (c[e + 1] - c[e]);
}

bool usable(cplx m) { return std::isfinite(m.real()) && std::isfinite(m.imag()) && m != cplx{}; }

// Values and |f/f'| at z; forward differences when f has no derivative.
// False when some value is unusable (zero or non-finite).
bool sample(const AnalyticFunction& f, std::span<const cplx> z, std::vector<ScaledComplex>& vals,
            std::vector<double>& rho) {
  const std::size_t n = z.size();
  vals.resize(n);
  rho.resize(n);
  if (f.with_derivative) {
    std::vector<ScaledPair> p(n);
    detail::parallel_for(n, [&](std::size_t j) { p[j] = f.with_derivative(z[j]); });
    for (std::size_t j = 0; j < n; ++j) {
      vals[j] = {p[j].value, p[j].log_scale};
      rho[j] = std::abs(p[j].value) / std::abs(p[j].derivative);
    }
  } else {
    std::vector<cplx> zz(2 * n);
    std::vector<ScaledComplex> vv(2 * n);
    for (std::size_t j = 0; j < n; ++j) {
      zz[j] = z[j];
      zz[n + j] = z[j] + 1e-7 * std::max(1.0, std::abs(z[j]));
    }
    f.evaluate(zz, vv);
    for (std::size_t j = 0; j < n; ++j) {
      vals[j] = vv[j];
      const double h = std::abs(zz[n + j] - zz[j]);
      const cplx ratio = vv[n + j].mantissa / vv[j].mantissa * std::exp(vv[n + j].log_scale - vv[j].log_scale);
      rho[j] = h / std::abs(ratio - 1.0);
    }
  }
  for (std::size_t j = 0; j < n; ++j)
    if (!usable(vals[j].mantissa)) return false;
  for (double& x : rho)
    if (std::isnan(x)) x = 0.0;
  return true;
}

// Phase continuation around the boundary. nullopt when the boundary passes
// through (or numerically too close to) a zero. A step is accepted when the
// phase moves by less than pi/2 and the step is no longer than |f/f'| at
// both ends: phase samples alone can alias whole turns around a zero just
// off the boundary, the distance bound cannot.
std::optional<int> winding(const AnalyticFunction& f, const SearchRect& r, const CountOptions& o) {
  const std::array<double, 4> len = {2 * r.half_re, 2 * r.half_im, 2 * r.half_re, 2 * r.half_im};
  std::vector<double> u;
  for (int e = 0; e < 4; ++e) {
    const double want = std::ceil(len[e] * f.phase_rate / 0.5);
    const auto n = static_cast<std::size_t>(
        std::clamp(want, static_cast<double>(o.min_samples_per_edge), static_cast<double>(o.boundary_step_cap / 8)));
    for (std::size_t j = 0; j < n; ++j) u.push_back(e + static_cast<double>(j) / static_cast<double>(n));
  }
  const double min_du = (1.0 / static_cast<double>(u.size())) * std::ldexp(1.0, -o.max_refine_depth);

  std::vector<cplx> pts(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) pts[j] = boundary_point(r, u[j]);
  std::vector<ScaledComplex> vals;
  std::vector<double> rho;
  if (!sample(f, pts, vals, rho)) return std::nullopt;
  std::vector<BoundarySample> s(u.size());
  for (std::size_t j = 0; j < u.size(); ++j) s[j] = {u[j], vals[j].mantissa, rho[j]};

  auto step_arg = [](cplx a, cplx b) { return std::arg(b * std::conj(a)); };
  while (true) {
    std::vector<std::size_t> bad;
    for (std::size_t j = 0; j < s.size(); ++j) {
      const BoundarySample& a = s[j];
      const BoundarySample& b = s[(j + 1) % s.size()];
      const double ub = j + 1 == s.size() ? 4.0 : b.u;
      const double h = std::abs(boundary_point(r, ub) - boundary_point(r, a.u));
      if (std::abs(step_arg(a.mantissa, b.mantissa)) >= kPi / 2 || h > std::min(a.rho, b.rho)) {
        if (ub - a.u <= min_du) return std::nullopt;
        bad.push_back(j);
      }
    }
    if (bad.empty()) break;
    if (s.size() + bad.size() > o.boundary_step_cap) throw_numerical("count_zeros: boundary sampling cap exceeded");

    std::vector<cplx> mid_pts(bad.size());
    std::vector<double> mid_u(bad.size());
    for (std::size_t i = 0; i < bad.size(); ++i) {
      const std::size_t j = bad[i];
      const double ub = j + 1 == s.size() ? 4.0 : s[j + 1].u;
      mid_u[i] = 0.5 * (s[j].u + ub);
      mid_pts[i] = boundary_point(r, mid_u[i]);
    }
    if (!sample(f, mid_pts, vals, rho)) return std::nullopt;

    std::vector<BoundarySample> merged;
    merged.reserve(s.size() + bad.size());
    std::size_t i = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      merged.push_back(s[j]);
      if (i < bad.size() && bad[i] == j) {
        merged.push_back({mid_u[i], vals[i].mantissa, rho[i]});
        ++i;
      }
    }
    s = std::move(merged);
  }

  double total = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) total += step_arg(s[j].mantissa, s[(j + 1) % s.size()].mantissa);
  const double turns = total / (2 * kPi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) > 1e-6) return std::nullopt;
  return static_cast<int>(rounded);
}

SearchRect inflated(const SearchRect& r, int j) {
  const double f = 1.0 + 1e-6 * j;
  return {r.center, r.half_re * f, r.half_im * f};
}

}  // namespace

int count_zeros(const AnalyticFunction& f, const SearchRect& rect, CountOptions opts, SearchRect* used) {
  if (!(rect.half_re > 0.0) || !(rect.half_im > 0.0)) throw_input("rect: half-widths must be positive");
  for (int j = 0; j <= opts.inflate_retries; ++j) {
    const SearchRect r = inflated(rect, j);
    if (auto w = winding(f, r, opts)) {
      if (used) *used = r;
      return *w;
    }
  }
  throw_numerical("count_zeros: boundary refinement did not converge (zero on or near the boundary)");
}

namespace {

struct Local {
  cplx value_over_slope;  // f / f'
  double log_abs = 0.0;   // log |f|
  bool exact_zero = false;
};

// Newton or secant iteration; `mult` > 1 gives the modified Newton step.
struct Iterator {
  const AnalyticFunction& f;
  int mult = 1;
  bool has_prev = false;
  cplx prev_z;
  ScaledComplex prev_v;

  Local at(cplx z) {
    if (f.with_derivative) {
      const ScaledPair p = f.with_derivative(z);
      if (p.value == cplx{}) return {{}, -INFINITY, true};
      return {p.value / p.derivative, std::log(std::abs(p.value)) + p.log_scale, false};
    }
    const ScaledComplex v = f.value(z);
    if (v.mantissa == cplx{}) return {{}, -INFINITY, true};
    if (!has_prev) {
      const double h = 1e-7 * std::max(1.0, std::abs(z));
      prev_z = z + h;
      prev_v = f.value(prev_z);
      has_prev = true;
    }
    // f(z) / f'(z) ~ (z - z_prev) / (1 - f(z_prev)/f(z)), scale-safe.
    const cplx ratio = prev_v.mantissa / v.mantissa * std::exp(prev_v.log_scale - v.log_scale);
    const cplx out = (z - prev_z) / (1.0 - ratio);
    prev_z = z;
    prev_v = v;
    return {out, std::log(std::abs(v.mantissa)) + v.log_scale, false};
  }
};

struct NewtonResult {
  cplx z;
  double last_step = INFINITY;
  bool exact = false;
};

NewtonResult newton(const AnalyticFunction& f, cplx z, int mult, const SearchRect& cell, int iters) {
  Iterator it{f, mult, false, {}, {}};
  const double wander = 2.0 * cell.diameter();
  NewtonResult res{z};
  for (int i = 0; i < iters; ++i) {
    const Local l = it.at(res.z);
    if (l.exact_zero) {
      res.exact = true;
      res.last_step = 0.0;
      return res;
    }
    const cplx step = static_cast<double>(mult) * l.value_over_slope;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return res;
    res.z -= step;
    res.last_step = std::abs(step);
    if (std::abs(res.z - cell.center) > wander) return res;
    if (res.last_step <= 1e-14 * std::max(1.0, std::abs(res.z))) break;
  }
  return res;
}

struct Cell {
  SearchRect rect;
  int count = 0;
  int depth = 0;
};

struct CellOutcome {
  std::vector<Zero> zeros;
  std::vector<Cell> children;
};

CellOutcome process(const AnalyticFunction& f, const Cell& c, const FindOptions& o) {
  CellOutcome out;
  if (c.count == 0) return out;
  const double scale = std::max(1.0, std::abs(c.rect.center));

  if (c.rect.diameter() < o.tol || c.depth >= o.max_depth) {
    out.zeros.push_back({c.rect.center, c.count});
    return out;
  }

  if (c.count == 1) {
    const NewtonResult r = newton(f, c.rect.center, 1, c.rect, 100);
    if (r.last_step <= 1e-10 * std::max(1.0, std::abs(r.z)) && c.rect.contains(r.z)) {
      out.zeros.push_back({r.z, 1});
      return out;
    }
  } else {
    const NewtonResult r = newton(f, c.rect.center, c.count, c.rect, 100);
    const double h = std::max(1e3 * o.tol, 1e-6 * std::max(1.0, std::abs(r.z)));
    if (r.last_step <= 1e-5 * scale && c.rect.contains(r.z)) {
      const double room = std::min({r.z.real() - c.rect.re_min(), c.rect.re_max() - r.z.real(),
                                    r.z.imag() - c.rect.im_min(), c.rect.im_max() - r.z.imag()});
      if (room > h) {
        const auto w = winding(f, {r.z, h, h}, o.count);
        if (w && *w == c.count) {
          out.zeros.push_back({r.z, c.count});
          return out;
        }
      }
    }
  }

  static constexpr std::array<double, 5> kSplit = {0.5, 0.5137, 0.4781, 0.5371, 0.4587};
  for (double fx : kSplit) {
    const double xs = c.rect.re_min() + fx * 2 * c.rect.half_re;
    const double ys = c.rect.im_min() + (1.0 - fx) * 2 * c.rect.half_im;
    const std::array<SearchRect, 4> kids = {
        SearchRect::from_bounds(c.rect.re_min(), xs, c.rect.im_min(), ys),
        SearchRect::from_bounds(xs, c.rect.re_max(), c.rect.im_min(), ys),
        SearchRect::from_bounds(c.rect.re_min(), xs, ys, c.rect.im_max()),
        SearchRect::from_bounds(xs, c.rect.re_max(), ys, c.rect.im_max())};
    std::vector<Cell> children;
    int sum = 0;
    bool ok = true;
    for (const auto& k : kids) {
      const auto w = winding(f, k, o.count);
      if (!w || *w < 0) {
        ok = false;
        break;
      }
      sum += *w;
      children.push_back({k, *w, c.depth + 1});
    }
    if (ok && sum == c.count) {
      out.children = std::move(children);
      return out;
    }
  }
  std::ostringstream msg;
  msg << "find_zeros: lost zero, subcell counts never matched " << c.count << " in the cell centered at "
      << c.rect.center << " with half-widths (" << c.rect.half_re << ", " << c.rect.half_im << ")";
  if (std::getenv("RATLAS_DEBUG_CELLS"))
    for (double fx : kSplit) {
      const double xs = c.rect.re_min() + fx * 2 * c.rect.half_re;
      const double ys = c.rect.im_min() + (1.0 - fx) * 2 * c.rect.half_im;
      msg << "\n split " << fx << ":";
      for (const auto& k : {SearchRect::from_bounds(c.rect.re_min(), xs, c.rect.im_min(), ys),
                            SearchRect::from_bounds(xs, c.rect.re_max(), c.rect.im_min(), ys),
                            SearchRect::from_bounds(c.rect.re_min(), xs, ys, c.rect.im_max()),
                            SearchRect::from_bounds(xs, c.rect.re_max(), ys, c.rect.im_max())}) {
        const auto w = winding(f, k, o.count);
        msg << " " << (w ? std::to_string(*w) : std::string("?"));
      }
    }
  throw_numerical(msg.str());
}

}  // namespace

ResonanceMultiset find_zeros(const AnalyticFunction& f, const SearchRect& rect, FindOptions opts) {
  ResonanceMultiset res;
  const int total = count_zeros(f, rect, opts.count, &res.region);
  if (total < 0) throw_numerical("find_zeros: negative winding number (function has poles?)");

  std::vector<Cell> level;
  if (total > 0) level.push_back({res.region, total, 0});
  std::vector<Zero> found;
  while (!level.empty()) {
    std::vector<CellOutcome> outcomes(level.size());
    detail::parallel_for(level.size(), [&](std::size_t i) { outcomes[i] = process(f, level[i], opts); });
    std::vector<Cell> next;
    for (auto& o : outcomes) {
      found.insert(found.end(), o.zeros.begin(), o.zeros.end());
      next.insert(next.end(), o.children.begin(), o.children.end());
    }
    level = std::move(next);
  }

  std::sort(found.begin(), found.end(), [](const Zero& a, const Zero& b) {
    return a.location.real() != b.location.real() ? a.location.real() < b.location.real()
                                                  : a.location.imag() < b.location.imag();
  });
  for (const Zero& z : found) {
    bool merged = false;
    for (auto& kept : res.zeros)
      if (std::abs(kept.location - z.location) <= opts.tol) {
        kept.multiplicity += z.multiplicity;
        merged = true;
        break;
      }
    if (!merged) res.zeros.push_back(z);
  }
  if (res.total() != total) throw_numerical("find_zeros: lost zero, multiplicities do not sum to the count");

  for (const Zero& z : res.zeros) {
    Iterator it{f, 1, false, {}, {}};
    const Local l = it.at(z.location);
    if (!l.exact_zero)
      res.residual_bound = std::max(res.residual_bound, std::abs(l.value_over_slope) / std::max(1.0, std::abs(z.location)));
  }
  return res;
}

cplx refine(const AnalyticFunction& f, cplx seed, double tol) {
  Iterator it{f, 1, false, {}, {}};
  cplx z = seed;
  for (int i = 0; i < 100; ++i) {
    const Local l = it.at(z);
    if (l.exact_zero) return z;
    cplx step = l.value_over_slope;
    if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) break;
    if (std::abs(step) <= tol * std::max(1.0, std::abs(z))) return z - step;
    // Damping: halve the step while the residual grows.
    for (int h = 0; h < 10; ++h) {
      const ScaledComplex v = f.value(z - step);
      const double la = std::log(std::abs(v.mantissa)) + v.log_scale;
      if (la < l.log_abs) break;
      step *= 0.5;
    }
    z -= step;
  }
  std::ostringstream msg;
  msg << "refine: no convergence after 100 iterations, last iterate " << z;
  throw_numerical(msg.str());
}

}  // namespace ratlas::rootfind
