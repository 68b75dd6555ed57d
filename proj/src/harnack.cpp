#include "heatlab/harnack.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "heatlab/rng.hpp"

namespace heatlab {

HarmonicSolution solve_harmonic(const Kernel& k, int center, double r,
                                const std::vector<double>& g) {
  const Space& sp = *k.space;
  if (!sp.boundary_free() && sp.margin(center) < r + k.hp - 1e-12)
    throw HarnackError("solve_harmonic: ball plus layer exceeds the window");
  HarmonicSolution sol;
  sol.center = center;
  sol.r = r;
  std::vector<char> inside(k.size(), 0);
  sp.for_each_in_ball(center, r, [&](int j, double) {
    inside[j] = 1;
  });
  sp.for_each_in_ball(center, r + k.hp, [&](int j, double) {
    if (!inside[j]) sol.layer.push_back(j);
  });
  for (int i = 0; i < k.size(); ++i)
    if (inside[i]) sol.interior.push_back(i);
  std::sort(sol.layer.begin(), sol.layer.end());
  int ni = static_cast<int>(sol.interior.size());
  if (ni == 0) throw HarnackError("solve_harmonic: empty interior");
  std::vector<int> loc(k.size(), -1);
  for (int i = 0; i < ni; ++i) loc[sol.interior[i]] = i;

  // rhs = P_IL g, operator A v = (I - P_II) v
  std::vector<double> rhs(ni, 0.0), mvec(ni);
  for (int i = 0; i < ni; ++i) {
    int gi = sol.interior[i];
    mvec[i] = k.m[gi];
    double acc = 0;
    for (int t = k.row_ptr[gi]; t < k.row_ptr[gi + 1]; ++t) {
      int j = k.col[t];
      if (loc[j] < 0) acc += k.val[t] * g[j] * k.m[j];
    }
    rhs[i] = acc;
  }
  long long interior_nnz = 0;
  for (int i = 0; i < ni; ++i)
    interior_nnz += k.row_ptr[sol.interior[i] + 1] - k.row_ptr[sol.interior[i]];
  auto apply_a = [&](const std::vector<double>& v, std::vector<double>& out) {
    budget().charge(interior_nnz);
    for (int i = 0; i < ni; ++i) {
      int gi = sol.interior[i];
      double acc = v[i];
      for (int t = k.row_ptr[gi]; t < k.row_ptr[gi + 1]; ++t) {
        int lj = loc[k.col[t]];
        if (lj >= 0) acc -= k.val[t] * v[lj] * k.m[k.col[t]];
      }
      out[i] = acc;
    }
  };
  auto dot_m = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double acc = 0;
    for (int i = 0; i < ni; ++i) acc += a[i] * b[i] * mvec[i];
    return acc;
  };
  // CG in the m inner product (I - P_II is self-adjoint positive definite there)
  std::vector<double> x(ni, 0.0), res(rhs), p(rhs), ap(ni);
  double rr = dot_m(res, res);
  double rr0 = std::max(rr, 1e-300);
  bool converged = rr == 0.0;
  int it = 0;
  const int maxit = 20000;
  while (!converged && it < maxit) {
    apply_a(p, ap);
    double pap = dot_m(p, ap);
    if (pap <= 0) break;
    double alpha = rr / pap;
    for (int i = 0; i < ni; ++i) {
      x[i] += alpha * p[i];
      res[i] -= alpha * ap[i];
    }
    double rr2 = dot_m(res, res);
    ++it;
    if (rr2 <= 1e-24 * rr0) {
      converged = true;
      break;
    }
    double beta = rr2 / rr;
    for (int i = 0; i < ni; ++i) p[i] = res[i] + beta * p[i];
    rr = rr2;
  }
  sol.cg_iterations = it;
  if (!converged) {
    if (ni <= 2000) {
      Eigen::MatrixXd A = Eigen::MatrixXd::Zero(ni, ni);
      Eigen::VectorXd b(ni);
      for (int i = 0; i < ni; ++i) {
        int gi = sol.interior[i];
        A(i, i) = 1.0;
        for (int t = k.row_ptr[gi]; t < k.row_ptr[gi + 1]; ++t) {
          int lj = loc[k.col[t]];
          if (lj >= 0) A(i, lj) -= k.val[t] * k.m[k.col[t]];
        }
        b(i) = rhs[i];
      }
      Eigen::VectorXd sol_v = A.partialPivLu().solve(b);
      for (int i = 0; i < ni; ++i) x[i] = sol_v(i);
    } else {
      throw HarnackError("solve_harmonic: solver did not converge in 20000 iterations");
    }
  }
  sol.u.assign(k.size(), 0.0);
  for (int j : sol.layer) sol.u[j] = g[j];
  for (int i = 0; i < ni; ++i) sol.u[sol.interior[i]] = x[i];
  // residual on interior
  auto pu = k.apply(sol.u);
  double resid = 0;
  for (int gi : sol.interior) resid = std::max(resid, std::abs(sol.u[gi] - pu[gi]));
  sol.residual = resid;
  return sol;
}

namespace {

// seeded nonneg spiky data on `allowed` points
std::vector<double> random_spikes(int n, const std::vector<int>& allowed, Rng& rng,
                                  int spikes) {
  std::vector<double> g(n, 0.0);
  for (int s = 0; s < spikes; ++s) {
    int p = allowed[rng.below(allowed.size())];
    g[p] += std::exp(rng.gaussian());
  }
  return g;
}

}  // namespace

HarnackReport elliptic_harnack(const Kernel& k, int center, double r, double c, int trials,
                               uint64_t seed) {
  if (!(c > 0 && c < 1)) throw HarnackError("elliptic_harnack: c must be in (0,1)");
  HarnackReport rep;
  rep.kind = "elliptic";
  rep.center = center;
  rep.r = r;
  rep.c_or_eta = c;
  std::vector<int> inner = k.space->ball(center, c * r);
  HarmonicSolution probe = solve_harmonic(k, center, r, std::vector<double>(k.size(), 0.0));
  const std::vector<int>& layer = probe.layer;
  if (layer.empty()) throw HarnackError("elliptic_harnack: empty boundary layer");
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(t));
    auto g = random_spikes(k.size(), layer, rng, 1 + static_cast<int>(rng.below(3)));
    auto sol = solve_harmonic(k, center, r, g);
    TrialRecord rec;
    rec.trial = t;
    rec.sup = -std::numeric_limits<double>::infinity();
    rec.inf = std::numeric_limits<double>::infinity();
    for (int p : inner) {
      rec.sup = std::max(rec.sup, sol.u[p]);
      rec.inf = std::min(rec.inf, sol.u[p]);
    }
    rec.ratio = rec.inf > 0 ? rec.sup / rec.inf : std::numeric_limits<double>::infinity();
    rep.trials.push_back(rec);
    if (rec.ratio > rep.c_hat) {
      rep.c_hat = rec.ratio;
      rep.witness_id = t;
    }
    if (!(rec.inf > 0)) rep.phi_fail = true;
  }
  return rep;
}

std::vector<std::vector<double>> evolve_caloric(const Kernel& k,
                                                const std::vector<double>& u0, int steps) {
  std::vector<std::vector<double>> out;
  out.reserve(steps + 1);
  out.push_back(u0);
  for (int s = 0; s < steps; ++s) out.push_back(k.apply(out.back()));
  return out;
}

HarnackReport parabolic_harnack(const Kernel& k, int center, double r, double eta,
                                int trials, uint64_t seed) {
  HarnackReport rep;
  rep.kind = "parabolic";
  rep.center = center;
  rep.r = r;
  rep.c_or_eta = eta;
  double er2 = eta * eta * r * r;
  int horizon = static_cast<int>(std::floor(4 * er2));
  if (horizon < 4) throw HarnackError("parabolic_harnack: cylinder too small");
  int t_minus_lo = static_cast<int>(std::ceil(er2 / 2));
  int t_minus_hi = static_cast<int>(std::floor(er2));
  int t_plus_lo = static_cast<int>(std::ceil(2 * er2));
  int t_plus_hi = horizon;
  std::vector<int> qball = k.space->ball(center, eta * r / 2);
  std::vector<int> support = k.space->ball(center, r + k.hp);
  if (!k.space->boundary_free() && k.space->margin(center) < r + k.hp)
    throw HarnackError("parabolic_harnack: cylinder exceeds the window");
  for (int t = 0; t < trials; ++t) {
    Rng rng = Rng::substream(seed, static_cast<uint64_t>(t));
    auto u0 = random_spikes(k.size(), support, rng, 1 + static_cast<int>(rng.below(4)));
    auto u = evolve_caloric(k, u0, horizon);
    TrialRecord rec;
    rec.trial = t;
    rec.sup = -std::numeric_limits<double>::infinity();
    rec.inf = std::numeric_limits<double>::infinity();
    for (int kk = t_minus_lo; kk <= t_minus_hi; ++kk)
      for (int p : qball) rec.sup = std::max(rec.sup, u[kk][p]);
    for (int kk = t_plus_lo; kk <= t_plus_hi; ++kk)
      for (int p : qball) rec.inf = std::min(rec.inf, u[kk][p]);
    rec.ratio = rec.inf > 0 ? rec.sup / rec.inf : std::numeric_limits<double>::infinity();
    rep.trials.push_back(rec);
    if (rec.inf <= 0.0) {
      rep.phi_fail = true;
      rep.witness_id = t;
    } else if (rec.ratio > rep.c_hat) {
      rep.c_hat = rec.ratio;
      if (!rep.phi_fail) rep.witness_id = t;
    }
  }
  return rep;
}

OscillationResult holder_oscillation(const Kernel& k, const std::vector<double>& u, int x,
                                     const std::vector<double>& radii_desc, double c_e) {
  OscillationResult res;
  res.radii = radii_desc;
  for (double r : radii_desc) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    k.space->for_each_in_ball(x, r, [&](int j, double) {
      lo = std::min(lo, u[j]);
      hi = std::max(hi, u[j]);
    });
    res.osc.push_back(hi - lo);
  }
  // geometric decay per chain step: LS fit of log osc against index
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < res.osc.size(); ++i) {
    if (res.osc[i] <= 0) continue;
    double lx = static_cast<double>(i), ly = std::log(res.osc[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++n;
  }
  if (n >= 2 && n * sxx - sx * sx > 1e-15)
    res.rho_hat = std::exp((n * sxy - sx * sy) / (n * sxx - sx * sx));
  res.pass = res.rho_hat <= (c_e - 1.0) / (c_e + 1.0) + 0.1;
  return res;
}

double reverse_poincare_check(const Kernel& k, const std::vector<double>& u, int x, double r,
                              double omega) {
  if (!(omega > 1)) throw HarnackError("reverse_poincare: need Omega > 1");
  if (!(r > 3 * k.hp / (omega - 1)))
    throw HarnackError("reverse_poincare: need r > 3h'/(Omega-1)");
  double num = 0;
  std::vector<std::pair<int, double>> inner;
  k.space->for_each_in_ball(x, r, [&](int j, double) { inner.emplace_back(j, 0.0); });
  std::sort(inner.begin(), inner.end());
  for (auto& [j, w] : inner) num += grad_p_squared(k, u, j) * k.m[j];
  double den = 0;
  std::vector<std::pair<int, double>> outer;
  k.space->for_each_in_ball(x, omega * r, [&](int j, double) { outer.emplace_back(j, 0.0); });
  std::sort(outer.begin(), outer.end());
  for (auto& [j, w] : outer) den += u[j] * u[j] * k.m[j];
  den /= (r * r);
  return den > 0 ? num / den : 0.0;
}

BalayageResult balayage(const Kernel& k, int center, double r, double r1,
                        const std::vector<std::vector<double>>& u, int a, int b) {
  if (!(0 < r1 && r1 + k.hp < r)) throw HarnackError("balayage: need 0 < r1 < r1+h' < r");
  if (b >= static_cast<int>(u.size()) || a < 0 || a >= b)
    throw HarnackError("balayage: bad time range");
  DirichletKernel dk = restrict_to_ball(k, center, r);
  int nb = dk.size();
  std::vector<char> in_inner(nb, 0), in_annulus(nb, 0);
  for (int i = 0; i < nb; ++i) {
    double d = k.space->metric(center, dk.points[i]);
    if (d <= r1 + 1e-12) in_inner[i] = 1;
    else if (d <= r1 + k.hp + 1e-12) in_annulus[i] = 1;
  }
  BalayageResult res;
  res.min_v = std::numeric_limits<double>::infinity();
  // phi_a = u(a) 1_{B(x,r1+h')}, phi_{k+1} = P_B phi_k + v_{k+1} on the annulus
  std::vector<double> phi(nb, 0.0);
  for (int i = 0; i < nb; ++i)
    if (in_inner[i] || in_annulus[i]) phi[i] = u[a][dk.points[i]];
  std::vector<std::vector<double>> vslices;  // local, times a+1..b
  for (int kk = a + 1; kk <= b; ++kk) {
    phi = dk.apply(phi);
    std::vector<double> v(nb, 0.0);
    for (int i = 0; i < nb; ++i)
      if (in_annulus[i]) {
        v[i] = u[kk][dk.points[i]] - phi[i];
        res.min_v = std::min(res.min_v, v[i]);
        phi[i] += v[i];
      }
    vslices.push_back(std::move(v));
  }
  // independent reconstruction via the explicit kernel sums
  double umax = 0;
  for (int kk = a; kk <= b; ++kk)
    for (double val : u[kk]) umax = std::max(umax, std::abs(val));
  double worst = 0;
  for (int kk = a + 1; kk <= std::min(b + 1, static_cast<int>(u.size()) - 1); ++kk) {
    // term 1: p^B_{k-a} applied to u(a) restricted to B(x,r1+h')
    std::vector<double> acc(nb, 0.0);
    for (int i = 0; i < nb; ++i)
      if (in_inner[i] || in_annulus[i]) acc[i] = u[a][dk.points[i]];
    for (int s = 0; s < kk - a; ++s) acc = dk.apply(acc);
    // terms l = a+1 .. kk-1: p^B_{k-l} v(l)
    for (int l = a + 1; l <= kk - 1; ++l) {
      std::vector<double> term = vslices[l - a - 1];
      for (int s = 0; s < kk - l; ++s) term = dk.apply(term);
      for (int i = 0; i < nb; ++i) acc[i] += term[i];
    }
    // charge at time kk enters with zero evolution steps
    if (kk <= b) {
      const auto& vk = vslices[kk - a - 1];
      for (int i = 0; i < nb; ++i) acc[i] += vk[i];
    }
    for (int i = 0; i < nb; ++i)
      if (in_inner[i])
        worst = std::max(worst, std::abs(u[kk][dk.points[i]] - acc[i]));
  }
  res.reconstruction_residual = umax > 0 ? worst / umax : worst;
  res.v.assign(vslices.size(), std::vector<double>(k.size(), 0.0));
  for (size_t t = 0; t < vslices.size(); ++t)
    for (int i = 0; i < nb; ++i) res.v[t][dk.points[i]] = vslices[t][i];
  if (!std::isfinite(res.min_v)) res.min_v = 0.0;
  return res;
}

GaussianFit gaussian_fit(const Kernel& k, const std::vector<int>& centers, int n_min,
                         int n_max, double margin_factor, int pair_budget, double band_lo,
                         double band_hi) {
  GaussianFit fit;
  fit.n_min = n_min;
  fit.n_max = n_max;
  fit.margin_factor = margin_factor;
  fit.band_lo = band_lo;
  fit.band_hi = band_hi;
  fit.c3 = k.hp / 2.0;
  const Space& sp = *k.space;
  // geometric n grid
  std::vector<int> ngrid;
  for (double n = n_min; n <= n_max + 0.5; n *= 1.3) {
    int ni = static_cast<int>(std::lround(n));
    if (ngrid.empty() || ni > ngrid.back()) ngrid.push_back(ni);
  }
  if (ngrid.back() != n_max) ngrid.push_back(n_max);
  for (int x : centers) {
    auto dist = sp.distances_from(x);
    std::vector<double> row = k.row_density(x);
    std::vector<double> tmp(k.size());
    int cur = 1;
    for (int n : ngrid) {
      while (cur < n) {
        k.apply(row.data(), tmp.data());
        row.swap(tmp);
        ++cur;
      }
      double margin = sp.margin(x);
      double sq = std::sqrt(static_cast<double>(n));
      if (margin < margin_factor * sq) continue;
      double vol = k.vol_m(x, sq);
      for (int y = 0; y < k.size(); ++y) {
        if (row[y] <= 0) continue;
        if (margin < dist[y] + margin_factor * sq) continue;
        GaussianSample s{n, x, y, dist[y], row[y], vol};
        fit.samples.push_back(s);
      }
    }
  }
  // deterministic thinning to the pair budget
  if (static_cast<int>(fit.samples.size()) > pair_budget) {
    std::vector<GaussianSample> kept;
    size_t stride = fit.samples.size() / pair_budget + 1;
    for (size_t i = 0; i < fit.samples.size(); i += stride) kept.push_back(fit.samples[i]);
    fit.samples.swap(kept);
  }
  if (fit.samples.empty()) throw HarnackError("gaussian_fit: no admissible samples");
  // on-diagonal ratios
  fit.rho_min = std::numeric_limits<double>::infinity();
  fit.rho_max = 0;
  for (auto& s : fit.samples)
    if (s.y == s.x) {
      double rho = s.vol * s.p;
      fit.rho_min = std::min(fit.rho_min, rho);
      fit.rho_max = std::max(fit.rho_max, rho);
    }
  // upper fit: regress w = -log(V p) against t = d^2/n over the band
  // band_lo <= d/sqrt(n) <= band_hi
  {
    auto in_band = [&](const GaussianSample& s) {
      double rel = s.d / std::sqrt(static_cast<double>(s.n));
      return rel >= band_lo && rel <= band_hi;
    };
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (auto& s : fit.samples) {
      if (!in_band(s)) continue;
      double t = s.d * s.d / s.n, w = -std::log(s.vol * s.p);
      sx += t;
      sy += w;
      sxx += t * t;
      sxy += t * w;
      ++cnt;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx > 1e-15) {
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      double intercept = (sy - slope * sx) / cnt;
      fit.c2_upper = slope > 0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
      double max_pos = 0, min_res = 0;
      for (auto& s : fit.samples) {
        if (!in_band(s)) continue;
        double t = s.d * s.d / s.n, w = -std::log(s.vol * s.p);
        double res = w - (slope * t + intercept);
        max_pos = std::max(max_pos, -res);  // positive residual of p against envelope
        min_res = std::min(min_res, -res);
      }
      fit.c1_upper = std::exp(-intercept + max_pos);
      fit.residual_spread = max_pos - min_res;
    }
  }
  // lower fit over d <= c3 n
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int cnt = 0;
    for (auto& s : fit.samples) {
      if (s.d > fit.c3 * s.n) continue;
      double t = s.d * s.d / s.n, w = -std::log(s.vol * s.p);
      sx += t;
      sy += w;
      sxx += t * t;
      sxy += t * w;
      ++cnt;
    }
    if (cnt >= 2 && cnt * sxx - sx * sx > 1e-15) {
      double slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
      fit.c2_lower = slope > 0 ? 1.0 / slope : std::numeric_limits<double>::infinity();
      double shift = -std::numeric_limits<double>::infinity();
      for (auto& s : fit.samples) {
        if (s.d > fit.c3 * s.n) continue;
        double t = s.d * s.d / s.n, w = -std::log(s.vol * s.p);
        shift = std::max(shift, w - slope * t);
      }
      fit.c1_lower = std::exp(-shift);
    }
  }
  fit.ge_pass = fit.rho_min >= 0.05 && fit.rho_max <= 20.0 && fit.rho_max > 0;
  return fit;
}

DiagonalProfile on_diagonal_profile(const Kernel& k, const std::vector<int>& centers,
                                    int n_min, int n_max, double margin_factor) {
  DiagonalProfile prof;
  const Space& sp = *k.space;
  for (int x : centers) {
    std::vector<double> row = k.row_density(x);
    std::vector<double> tmp(k.size());
    for (int n = 2; n <= n_max; ++n) {
      k.apply(row.data(), tmp.data());
      row.swap(tmp);
      if (n < n_min) continue;
      double sq = std::sqrt(static_cast<double>(n));
      if (sp.margin(x) < margin_factor * sq) continue;
      prof.ns.push_back(n);
      prof.xs.push_back(x);
      prof.rho.push_back(k.vol_m(x, sq) * row[x]);
    }
  }
  return prof;
}

EdProfile ed_profile(const Kernel& k, int x, double D, int kmax, double margin_factor) {
  EdProfile prof;
  const Space& sp = *k.space;
  auto dist = sp.distances_from(x);
  for (int kk = 1; kk <= kmax; ++kk) {
    double sq = std::sqrt(static_cast<double>(kk));
    if (sp.margin(x) < margin_factor * sq)
      throw HarnackError("ed_profile: margin guard violated at k=" + std::to_string(kk));
    auto h = hk_row(k, kk, x);
    double acc = 0;
    for (int z = 0; z < k.size(); ++z) {
      if (h.density[z] == 0) continue;
      double d1 = std::max(dist[z], k.hp);
      acc += h.density[z] * h.density[z] * std::exp(d1 * d1 / (D * kk)) * k.m[z];
    }
    prof.ks.push_back(kk);
    prof.ed.push_back(acc);
    prof.scaled.push_back(acc * k.vol_m(x, sq));
  }
  double lo = *std::min_element(prof.scaled.begin(), prof.scaled.end());
  double hi = *std::max_element(prof.scaled.begin(), prof.scaled.end());
  prof.pass = lo > 0 && hi / lo <= 50.0;
  return prof;
}

namespace {

// untruncated reference-measure volume for the 1-D radial ball walk:
// V_m(0,R) = int_{|t|<=R} V(t,h) (1+t^2)^(alpha/2) dt
class AnalyticRadialVolume {
 public:
  AnalyticRadialVolume(double alpha, double h, double tmax) : alpha_(alpha), h_(h) {
    double step = h / 8.0;
    int n = static_cast<int>(std::ceil((tmax + 2 * h) / step)) + 2;
    grid_.resize(2 * n + 1);
    cum_.resize(2 * n + 1);
    step_ = step;
    n_ = n;
    for (int i = -n; i <= n; ++i) grid_[i + n] = i * step;
    cum_[0] = 0;
    for (int i = 1; i < 2 * n + 1; ++i) {
      double a = grid_[i - 1], b = grid_[i], m = 0.5 * (a + b);
      cum_[i] = cum_[i - 1] + (b - a) / 6.0 * (dens(a) + 4 * dens(m) + dens(b));
    }
  }
  double dens(double t) const { return std::pow(1.0 + t * t, alpha_ / 2.0); }
  double F(double t) const {  // int_{-inf clip}^{t}
    double pos = (t - grid_.front()) / step_;
    int i = std::clamp(static_cast<int>(pos), 0, static_cast<int>(grid_.size()) - 2);
    double frac = pos - i;
    return cum_[i] + frac * (cum_[i + 1] - cum_[i]);
  }
  double vol_mu(double t, double h) const { return F(t + h) - F(t - h); }
  double vol_m(double R) const {
    // Simpson over [-R, R] of V(t,h) dens(t)
    int steps = 512;
    double acc = 0, w = 2 * R / steps;
    for (int i = 0; i < steps; ++i) {
      double a = -R + i * w, b = a + w, m = 0.5 * (a + b);
      auto f = [&](double t) { return vol_mu(t, h_) * dens(t); };
      acc += (b - a) / 6.0 * (f(a) + 4 * f(m) + f(b));
    }
    return acc;
  }

 private:
  double alpha_, h_, step_;
  int n_;
  std::vector<double> grid_, cum_;
};

}  // namespace

RecurrenceReport classify_recurrence(const Kernel& k, int x, double n_max) {
  RecurrenceReport rep;
  const Space& sp = *k.space;
  std::vector<double> ns, vs;
  if (sp.kind() == SpaceKind::euclidean_radial && sp.dim() == 1) {
    rep.analytic_volume = true;
    AnalyticRadialVolume av(sp.spec().alpha, k.h, n_max);
    for (double n = std::max(1.0, n_max / 10.0); n <= n_max; n *= 1.15) {
      ns.push_back(n);
      vs.push_back(av.vol_m(n));
    }
    // partial sum S_N = sum n / V(x,n)
    double s = 0;
    int N = static_cast<int>(n_max);
    int stride = std::max(1, N / 2000);
    for (int n = 1; n <= N; n += stride) s += stride * n / av.vol_m(n);
    rep.s_n = s;
  } else {
    for (double n = std::max(1.0, n_max / 10.0); n <= n_max; n *= 1.15) {
      ns.push_back(n);
      vs.push_back(k.vol_m(x, n));
    }
    double s = 0;
    int N = static_cast<int>(n_max);
    int stride = std::max(1, N / 2000);
    for (int n = 1; n <= N; n += stride) s += stride * n / k.vol_m(x, std::min<double>(n, sp.diameter()));
    rep.s_n = s;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int cnt = 0;
  for (size_t i = 0; i < ns.size(); ++i) {
    if (vs[i] <= 0) continue;
    double lx = std::log(ns[i]), ly = std::log(vs[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++cnt;
  }
  if (cnt >= 2) rep.beta_hat = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  rep.tail_exponent = rep.beta_hat - 1.0;  // growth exponent of n/V(x,n) terms
  if (rep.beta_hat > 2.1)
    rep.verdict = RecurrenceVerdict::Transient;
  else if (rep.beta_hat < 1.9)
    rep.verdict = RecurrenceVerdict::Recurrent;
  else
    rep.verdict = RecurrenceVerdict::Inconclusive;
  // Green partial-sum corroboration within the diffusive window
  double margin = sp.margin(x);
  int kcap = std::isfinite(margin)
                 ? static_cast<int>(std::min(500.0, (margin / k.hp) * (margin / k.hp)))
                 : 500;
  if (kcap >= 8) {
    auto g = green(k, x, 1e-6, kcap);
    rep.green_status = g.status;
  }
  return rep;
}

}  // namespace heatlab
