#include "wgwin/threshold.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace wgwin {
namespace {

// Integral over (0, l) of the squared x1-derivative of a window profile in
// the EigenfunctionExpansion convention.
double profile_energy(double sigma, double l, bool even) {
  if (sigma < 0.0) {
    const double r = std::sqrt(-sigma);
    const double osc = std::sin(2.0 * r * l) / (4.0 * r);
    return r * r * (even ? 0.5 * l - osc : 0.5 * l + osc);
  }
  const double q = std::sqrt(sigma);
  const double ql = q * l;
  if (ql < 1e-8) return even ? q * q * l * l * l / 3.0 : 1.0 / l;
  const double e = std::exp(-2.0 * ql);
  if (even) {
    const double sech2 = 4.0 * e / ((1.0 + e) * (1.0 + e));
    return 0.5 * q * std::tanh(ql) - 0.5 * q * q * l * sech2;
  }
  const double one_minus = -std::expm1(-2.0 * ql);
  const double csch2 = 4.0 * e / (one_minus * one_minus);
  return 0.5 * q * (1.0 + e) / one_minus + 0.5 * q * q * l * csch2;
}

}  // namespace

MatchingMatrix assemble_threshold(const Geometry& g, Parity parity,
                                  int n_modes) {
  if (n_modes < 2) throw DomainError("assemble_threshold: N must be >= 2");
  return assemble_unchecked(basis_for(g.d(), n_modes), g, 1.0, parity);
}

double threshold_indicator(const Geometry& g, Parity parity, int n_modes) {
  return indicator(assemble_threshold(g, parity, n_modes));
}

double count_period(const Geometry& g) {
  return kPi / (2.0 * std::sqrt(1.0 - g.kappa_sq()));
}

double critical_length(double d, int n, int n_modes, double tol,
                       const CriticalOptions& opt) {
  if (n < 2) throw DomainError("critical_length: n must be >= 2 (l_1 = 0)");
  const Geometry base(d, 0.0);
  const double c = count_period(base);
  const Parity parity = parity_for_index(n);
  double lo = (n - 1) * c;
  double hi = n * c;
  if (lo >= opt.l_max) {
    std::ostringstream msg;
    msg << "critical_length: l_" << n << " lies above " << (n - 1) * c
        << ", beyond the scan cap " << opt.l_max;
    throw GridExhausted(msg.str(), {});
  }
  hi = std::min(hi, opt.l_max);
  const double shrink = 1e-9 * c;
  lo += shrink;
  hi -= shrink;

  auto f = [&](double l) {
    return threshold_indicator(base.with_l(l), parity, n_modes);
  };
  double f_lo = f(lo);
  double f_hi = f(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0) && f_lo != 0.0 && f_hi != 0.0) {
    bool found = false;
    double px = lo, pf = f_lo;
    for (int i = 1; i <= opt.samples && !found; ++i) {
      const double x = lo + (hi - lo) * i / (opt.samples + 1);
      const double fx = f(x);
      if ((fx < 0.0) != (pf < 0.0)) {
        lo = px;
        f_lo = pf;
        hi = x;
        f_hi = fx;
        found = true;
      }
      px = x;
      pf = fx;
    }
    if (!found) {
      std::ostringstream msg;
      msg << "critical_length: threshold indicator keeps its sign on ["
          << lo << ", " << hi << "] for n = " << n;
      throw GridExhausted(msg.str(), {});
    }
  }
  RootOptions ro;
  ro.tol = tol;
  ro.bisection_width = std::max(1e-8, tol);
  return bracketed_root(f, lo, hi, f_lo, f_hi, ro);
}

std::vector<double> critical_lengths(double d, int n_max, int n_modes,
                                     double tol, const CriticalOptions& opt) {
  if (n_max < 2) throw DomainError("critical_lengths: n_max must be >= 2");
  std::vector<double> out{0.0};
  for (int n = 2; n <= n_max; ++n) {
    try {
      out.push_back(critical_length(d, n, n_modes, tol, opt));
    } catch (const GridExhausted& e) {
      throw GridExhausted(e.what(), out);
    }
  }
  return out;
}

double gradient_energy_x1(const EigenfunctionExpansion& ef) {
  const Geometry& g = ef.geometry;
  const double l = g.l();
  const double lambda = ef.spectral.lambda;
  const bool even = ef.spectral.parity == Parity::Even;

  double half = 0.0;
  for (std::size_t j = 1; j <= ef.a.size(); ++j) {
    const double aj = ef.a[j - 1];
    if (aj == 0.0) continue;
    const double kj = static_cast<double>(j) * g.kappa();
    half += aj * aj * profile_energy(kj * kj - lambda, l, even);
  }
  for (std::size_t q = 1; q <= ef.b.size(); ++q) {
    const double s = std::sqrt(std::max(0.0, double(q * q) - lambda));
    half += 0.5 * s * ef.b[q - 1] * ef.b[q - 1];
  }
  for (std::size_t q = 1; q <= ef.c.size(); ++q) {
    const double w = kPi * static_cast<double>(q) / g.d();
    const double s = std::sqrt(std::max(0.0, w * w - lambda));
    half += 0.5 * s * ef.c[q - 1] * ef.c[q - 1];
  }
  return 2.0 * half;
}

double mu_coefficient(const ThresholdSolution& ts) {
  const double energy = gradient_energy_x1(ts.field);
  return ts.d == kPi ? energy / (2.0 * ts.l_n) : energy / ts.l_n;
}

double edge_coefficient(const EigenfunctionExpansion& ef, double r) {
  const Geometry& g = ef.geometry;
  if (!(r > 0.0) || r >= std::min({g.d(), 2.0 * g.l(), kPi})) {
    throw DomainError("edge_coefficient: circle must stay clear of other walls");
  }
  auto integrand = [&](double theta) {
    return evaluate_field(ef, g.l() + r * std::cos(theta), r * std::sin(theta)) *
           std::sin(0.5 * theta);
  };
  using Quad = boost::math::quadrature::gauss_kronrod<double, 31>;
  double proj = 0.0;
  // Pieces end where the circle crosses x1 = l and the expansion switches.
  const double cuts[] = {0.0, 0.5 * kPi, kPi, 1.5 * kPi, 2.0 * kPi};
  for (int i = 0; i < 4; ++i) {
    proj += Quad::integrate(integrand, cuts[i], cuts[i + 1], 8, 1e-11);
  }
  proj /= kPi;
  // The sin(theta/2) component of a slit solution of -Delta u = u is
  // c J_{1/2}(r) with J_{1/2}(r) = sqrt(2 / (pi r)) sin r.
  return proj * std::sqrt(r) / std::sin(r);
}

ThresholdSolution threshold_solution(double d, int n, double l_n, int n_modes,
                                     double tol, const EdgeOptions& edge) {
  if (n < 2) throw DomainError("threshold_solution: n must be >= 2");
  if (!(l_n > 0.0)) throw DomainError("threshold_solution: l_n must be positive");
  const Geometry g(d, l_n);
  ThresholdSolution ts;
  ts.n = n;
  ts.l_n = l_n;
  ts.d = d;
  ts.parity = parity_for_index(n);

  SpectralPoint sp;
  sp.m = n;
  sp.lambda = 1.0;
  sp.k = 0.0;
  sp.parity = ts.parity;
  sp.n_modes_used = n_modes;
  sp.bracket = bracket_for(g, n);
  const MatchingMatrix m = assemble_threshold(g, ts.parity, n_modes);
  ts.field = expansion_from_matrix(m, sp);
  ts.smallest_singular = ts.field.smallest_singular;
  ts.second_singular = ts.field.second_singular;
  if (ts.second_singular < 1e3 * tol) {
    throw std::runtime_error(
        "threshold_solution: second near-null direction; the bounded "
        "solution would not be unique");
  }
  ts.zero_mode_coeff = ts.field.b.front() * std::sqrt(2.0 / kPi);
  ts.mu = mu_coefficient(ts);

  std::vector<double> alphas;
  for (int i = 0; i < edge.radii; ++i) {
    const double r = edge.radii == 1
                         ? edge.r_min
                         : edge.r_min + (edge.r_max - edge.r_min) * i /
                                            (edge.radii - 1);
    alphas.push_back(edge_coefficient(ts.field, r));
  }
  double sum = 0.0;
  for (double a : alphas) sum += a;
  ts.alpha = sum / static_cast<double>(alphas.size());
  for (double a : alphas) {
    ts.alpha_spread = std::max(ts.alpha_spread, std::abs(a - ts.alpha));
  }
  return ts;
}

double emergence_prediction(const ThresholdSolution& ts, double l) {
  if (l < ts.l_n) {
    throw DomainError(
        "emergence_prediction: l < l_n, no eigenvalue near the threshold");
  }
  const double e = l - ts.l_n;
  return 1.0 - ts.mu * ts.mu * e * e;
}

}  // namespace wgwin
