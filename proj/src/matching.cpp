#include "wgwin/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>

namespace wgwin {
namespace {

constexpr double kLogClamp = 700.0;
// exp(-2 q l) below this is treated as zero in the window log-derivative.
constexpr double kSaturation = 40.0;

int window_modes_for(int n_modes, double kappa) {
  return std::max(64, static_cast<int>(std::ceil(6.0 * n_modes / kappa)));
}

double trial_projection(const Geometry& g, const TrialMode& t, int j) {
  switch (t.kind) {
    case TrialMode::Kind::Upper:
      return overlap_upper(g, j, t.index);
    case TrialMode::Kind::Lower:
      return overlap_lower(g, j, t.index);
    case TrialMode::Kind::EvenPair:
      return (overlap_upper(g, j, t.index) - overlap_lower(g, j, t.index)) /
             std::sqrt(2.0);
  }
  return 0.0;
}

}  // namespace

const char* to_string(Parity p) noexcept {
  return p == Parity::Even ? "even" : "odd";
}

Parity parity_for_index(int m) noexcept {
  return (m % 2 == 1) ? Parity::Even : Parity::Odd;
}

MatchingBasis::MatchingBasis(double d, int n_modes)
    : d_(d), kappa_(0.0), symmetric_(false), n_modes_(n_modes) {
  if (n_modes < 2) throw DomainError("matching: N must be >= 2");
  const Geometry g(d, 0.0);
  kappa_ = g.kappa();
  symmetric_ = g.symmetric();

  if (symmetric_) {
    n_upper_ = n_lower_ = n_modes;
    for (int q = 1; q <= n_modes; ++q) {
      trial_.push_back({TrialMode::Kind::EvenPair, q, double(q) * q, double(q)});
    }
  } else {
    n_upper_ = n_modes;
    n_lower_ = std::max(2, static_cast<int>(std::lround(n_modes * d / kPi)));
    for (int q = 1; q <= n_upper_; ++q) {
      trial_.push_back({TrialMode::Kind::Upper, q, double(q) * q, double(q)});
    }
    for (int q = 1; q <= n_lower_; ++q) {
      const double w = kPi * q / d;
      trial_.push_back({TrialMode::Kind::Lower, q, w * w, w});
    }
  }

  const int n = size();
  n_window_ = window_modes_for(n_modes, kappa_);
  n_window_tail_ = 16 * n_window_;

  proj_.resize(n_window_, n);
  for (int j = 1; j <= n_window_; ++j) {
    for (int t = 0; t < n; ++t) proj_(j - 1, t) = trial_projection(g, trial_[t], j);
  }

  scale_.resize(n);
  for (int t = 0; t < n; ++t) scale_(t) = 1.0 / std::sqrt(2.0 * trial_[t].wavenumber);

  // sqrt(a^2 - lambda) = a - lambda/(2a) - lambda^2/(8a^3) - lambda^3/(16a^5)
  // for the tail modes, where lambda / a^2 < 1 / (36 N^2).
  const int n_tail = n_window_tail_ - n_window_;
  Eigen::MatrixXd rows(n_tail, n);
  Eigen::VectorXd w0(n_tail), w1(n_tail), w2(n_tail), w3(n_tail);
  for (int r = 0; r < n_tail; ++r) {
    const int j = n_window_ + 1 + r;
    for (int t = 0; t < n; ++t) rows(r, t) = trial_projection(g, trial_[t], j);
    const double a = j * kappa_;
    w0(r) = a;
    w1(r) = -1.0 / (2.0 * a);
    w2(r) = -1.0 / (8.0 * a * a * a);
    w3(r) = -1.0 / (16.0 * std::pow(a, 5));
  }
  for (const auto* w : {&w0, &w1, &w2, &w3}) {
    tail_terms_.push_back(rows.transpose() * w->asDiagonal() * rows);
  }
}

Eigen::VectorXd MatchingBasis::projection_row(int j) const {
  if (j >= 1 && j <= n_window_) return proj_.row(j - 1).transpose();
  const Geometry g(d_, 0.0);
  Eigen::VectorXd r(size());
  for (int t = 0; t < size(); ++t) r(t) = trial_projection(g, trial_[t], j);
  return r;
}

Eigen::MatrixXd MatchingBasis::tail(double lambda) const {
  return tail_terms_[0] +
         lambda * (tail_terms_[1] +
                   lambda * (tail_terms_[2] + lambda * tail_terms_[3]));
}

std::shared_ptr<const MatchingBasis> basis_for(double d, int n_modes) {
  static std::mutex mutex;
  static std::map<std::pair<double, int>, std::shared_ptr<const MatchingBasis>>
      cache;
  const auto key = std::make_pair(d, n_modes);
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto basis = std::make_shared<const MatchingBasis>(d, n_modes);
  std::lock_guard lock(mutex);
  return cache.emplace(key, std::move(basis)).first->second;
}

double window_log_derivative(double sigma, double l, Parity p) {
  if (sigma < 0.0) {
    const double r = std::sqrt(-sigma);
    return p == Parity::Even ? -r * std::tan(r * l) : r / std::tan(r * l);
  }
  const double q = std::sqrt(sigma);
  const double ql = q * l;
  if (p == Parity::Even) return q * std::tanh(ql);
  if (ql < 1e-6) return (1.0 + ql * ql / 3.0) / l;
  return q / std::tanh(ql);
}

MatchingMatrix assemble(const Geometry& g, double lambda, Parity parity,
                        int n_modes) {
  if (!(lambda > g.kappa_sq() && lambda < 1.0)) {
    throw DomainError("assemble: lambda must lie in (kappa^2, 1)");
  }
  if (n_modes < 2) throw DomainError("assemble: N must be >= 2");
  return assemble_unchecked(basis_for(g.d(), n_modes), g, lambda, parity);
}

MatchingMatrix assemble_unchecked(
    const std::shared_ptr<const MatchingBasis>& basis, const Geometry& g,
    double lambda, Parity parity) {
  if (!(g.l() > 0.0)) {
    throw DomainError("assemble: the window is closed (l = 0)");
  }
  if (g.d() != basis->d()) throw DomainError("assemble: basis built for another d");
  const int n = basis->size();
  const double kappa = basis->kappa();
  const double l = g.l();

  MatchingMatrix out;
  out.lambda = lambda;
  out.parity = parity;
  out.n_modes = basis->n_modes();
  out.geometry = g;
  out.basis = basis;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (int t = 0; t < n; ++t) {
    const double gap = basis->trial()[t].cutoff - lambda;
    if (gap < 0.0) throw DomainError("assemble: lambda above an outer cutoff");
    a(t, t) = std::sqrt(gap);
  }

  // Window modes 2..J0 exactly; mode j = 1 enters through the border.
  const int jw = basis->n_window();
  Eigen::VectorXd rho(jw - 1);
  for (int j = 2; j <= jw; ++j) {
    const double kj = j * kappa;
    // Degenerate longitudinal rate; the root search never needs this point.
    double sigma = kj * kj - lambda;
    if (sigma == 0.0) sigma = 1e-12;
    rho(j - 2) = window_log_derivative(sigma, l, parity);
  }
  const auto p = basis->projections().bottomRows(jw - 1);
  a.noalias() += p.transpose() * rho.asDiagonal() * p;
  a += basis->tail(lambda);

  // Short windows: tail modes whose hyperbolic factor is not yet saturated.
  const int j_sat = static_cast<int>(std::ceil(kSaturation / (2.0 * kappa * l)));
  for (int j = jw + 1; j <= std::min(j_sat, basis->n_window_tail()); ++j) {
    const double q = std::sqrt(j * kappa * j * kappa - lambda);
    const double e = std::exp(-2.0 * q * l);
    const double corr =
        parity == Parity::Even ? -2.0 * q * e / (1.0 + e) : 2.0 * q * e / (1.0 - e);
    const Eigen::VectorXd r = basis->projection_row(j);
    a.noalias() += corr * r * r.transpose();
  }

  // Border for window mode 1: det(A + rho g g^T) times a positive multiple of
  // cos(r l) (even) or sin(r l)/(r l) (odd) equals w det A - u g^T adj(A) g.
  const double sigma1 = kappa * kappa - lambda;
  double u = 0.0;
  double w = 1.0;
  if (sigma1 < 0.0) {
    const double r = std::sqrt(-sigma1);
    if (parity == Parity::Even) {
      u = r * std::sin(r * l);
      w = std::cos(r * l);
    } else {
      u = -std::cos(r * l) / l;
      w = std::sin(r * l) / (r * l);
    }
  } else {
    u = -window_log_derivative(sigma1, l, parity);
  }
  out.border_u = u;
  out.border_w = w;

  const Eigen::VectorXd g1 = basis->projections().row(0).transpose();
  const Eigen::VectorXd& s = basis->scaling();
  out.entries.resize(n + 1, n + 1);
  out.entries.topLeftCorner(n, n) = s.asDiagonal() * a * s.asDiagonal();
  out.entries.topRightCorner(n, 1) = u * s.cwiseProduct(g1);
  out.entries.bottomLeftCorner(1, n) = s.cwiseProduct(g1).transpose();
  out.entries(n, n) = w;
  return out;
}

IndicatorValue indicator_value(const MatchingMatrix& m) {
  IndicatorValue v;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m.entries);
  const auto& packed = lu.matrixLU();
  double log_abs = 0.0;
  int sign = static_cast<int>(lu.permutationP().determinant());
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double piv = packed(i, i);
    if (piv == 0.0 || !std::isfinite(piv)) {
      v.singular = true;
      v.sign = 0;
      v.value = 0.0;
      v.log_abs_det = -std::numeric_limits<double>::infinity();
      return v;
    }
    if (piv < 0.0) sign = -sign;
    log_abs += std::log(std::abs(piv));
  }
  v.sign = sign;
  v.log_abs_det = log_abs;
  v.value = sign * std::exp(std::clamp(log_abs, -kLogClamp, kLogClamp));
  return v;
}

double indicator(const MatchingMatrix& m) { return indicator_value(m).value; }

SpectralPoint solve_in_bracket(const Geometry& g, int m, int n_modes,
                               double tol) {
  RootOptions opt;
  opt.tol = tol;
  return solve_in_bracket(g, m, n_modes, opt, 1.0 - 1e-6);
}

SpectralPoint solve_in_bracket(const Geometry& g, int m, int n_modes,
                               const RootOptions& opt, double upper_cap) {
  if (!(g.l() > 0.0)) {
    throw DomainError(
        "solve_in_bracket: l = 0 leaves no window; the spectrum is the "
        "essential part [1, inf) and the discrete spectrum is empty");
  }
  if (m < 1) throw DomainError("solve_in_bracket: m must be >= 1");
  if (!(opt.tol > 0.0)) throw DomainError("solve_in_bracket: tol must be > 0");

  const SpectralBracket br = bracket_for(g, m);
  const Parity parity = parity_for_index(m);
  const double shrink = opt.edge_shrink * (br.upper - br.lower);
  double lo = br.lower + shrink;
  double hi = std::min(br.upper - shrink, upper_cap);
  if (!(hi > lo)) {
    throw NoSignChange("solve_in_bracket: bracket " + std::to_string(m) +
                           " lies above the search cap",
                       {}, {});
  }

  const auto basis = basis_for(g.d(), n_modes);
  auto f = [&](double lambda) {
    return indicator(assemble_unchecked(basis, g, lambda, parity));
  };

  double f_lo = f(lo);
  double f_hi = f(hi);
  if ((f_lo < 0.0) == (f_hi < 0.0) && f_lo != 0.0 && f_hi != 0.0) {
    std::vector<double> xs, fs;
    const int ns = std::max(4, opt.trace_samples);
    bool found = false;
    double prev_x = lo, prev_f = f_lo;
    xs.push_back(lo);
    fs.push_back(f_lo);
    for (int i = 1; i < ns; ++i) {
      const double x = lo + (hi - lo) * i / ns;
      const double fx = f(x);
      xs.push_back(x);
      fs.push_back(fx);
      if (!found && (fx < 0.0) != (prev_f < 0.0)) {
        lo = prev_x;
        f_lo = prev_f;
        hi = x;
        f_hi = fx;
        found = true;
      }
      prev_x = x;
      prev_f = fx;
    }
    xs.push_back(hi);
    fs.push_back(f_hi);
    if (!found) {
      throw NoSignChange("solve_in_bracket: no sign change of the indicator in "
                         "bracket " + std::to_string(m),
                         std::move(xs), std::move(fs));
    }
  }

  SpectralPoint sp;
  sp.m = m;
  sp.parity = parity;
  sp.bracket = br;
  sp.n_modes_used = n_modes;
  sp.lambda = bracketed_root(f, lo, hi, f_lo, f_hi, opt);
  sp.k = std::sqrt(std::max(0.0, 1.0 - sp.lambda));
  sp.residual = std::abs(f(sp.lambda));
  return sp;
}

EigenfunctionExpansion eigenfunction(const Geometry& g, const SpectralPoint& sp,
                                     int n_modes, double tol) {
  const auto basis = basis_for(g.d(), n_modes);
  EigenfunctionExpansion ef = expansion_from_matrix(
      assemble_unchecked(basis, g, sp.lambda, sp.parity), sp);

  const double delta = 1e-6 * (1.0 - g.kappa_sq());
  const double probe = sp.lambda - delta > g.kappa_sq() ? sp.lambda - delta
                                                        : sp.lambda + delta;
  const Eigen::JacobiSVD<Eigen::MatrixXd> near(
      assemble_unchecked(basis, g, probe, sp.parity).entries);
  const double slope =
      std::abs(near.singularValues().tail(1)(0) - ef.smallest_singular) / delta;
  if (ef.smallest_singular > 10.0 * tol * std::max(1.0, slope)) {
    throw std::runtime_error(
        "eigenfunction: matching residual " +
        std::to_string(ef.smallest_singular) +
        " too large; lambda is not a root of the truncated system");
  }
  return ef;
}

EigenfunctionExpansion expansion_from_matrix(const MatchingMatrix& m,
                                             const SpectralPoint& sp) {
  const MatchingBasis& basis = *m.basis;
  const int n = basis.size();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(m.entries, Eigen::ComputeFullV);
  const Eigen::VectorXd& sv = svd.singularValues();
  Eigen::VectorXd z = svd.matrixV().col(n);

  EigenfunctionExpansion ef;
  ef.spectral = sp;
  ef.geometry = m.geometry;
  ef.smallest_singular = sv(n);
  ef.second_singular = sv(n - 1);

  Eigen::VectorXd x = basis.scaling().cwiseProduct(z.head(n));
  double y = z(n);

  std::vector<double> b(basis.n_upper(), 0.0), c(basis.n_lower(), 0.0);
  for (int t = 0; t < n; ++t) {
    const TrialMode& tm = basis.trial()[t];
    switch (tm.kind) {
      case TrialMode::Kind::Upper:
        b[tm.index - 1] = x(t);
        break;
      case TrialMode::Kind::Lower:
        c[tm.index - 1] = x(t);
        break;
      case TrialMode::Kind::EvenPair:
        b[tm.index - 1] = x(t) / std::sqrt(2.0);
        c[tm.index - 1] = -x(t) / std::sqrt(2.0);
        break;
    }
  }
  if (b[0] == 0.0) {
    throw std::runtime_error("eigenfunction: leading upper amplitude vanishes");
  }
  const double k = std::sqrt(std::max(0.0, 1.0 - m.lambda));
  const double l = m.geometry.l();
  const double scale = std::exp(-k * l) / b[0];
  for (double& v : b) v *= scale;
  for (double& v : c) v *= scale;
  x *= scale;
  y *= scale;

  const int jw = basis.n_window();
  ef.a.assign(jw, 0.0);
  const Eigen::VectorXd edge = basis.projections() * x;
  for (int j = 2; j <= jw; ++j) ef.a[j - 1] = edge(j - 1);
  const double sigma1 = basis.kappa() * basis.kappa() - m.lambda;
  if (sigma1 < 0.0 && m.parity == Parity::Odd) {
    ef.a[0] = -y / (std::sqrt(-sigma1) * l);
  } else {
    ef.a[0] = -y;
  }

  ef.b = std::move(b);
  ef.c = std::move(c);
  ef.c_plus = ef.b[0] * std::exp(k * l) * std::sqrt(2.0 / kPi);
  return ef;
}

Profile window_profile(const EigenfunctionExpansion& ef, int j, double x1) {
  const Geometry& g = ef.geometry;
  const double l = g.l();
  const double kj = j * g.kappa();
  const double sigma = kj * kj - ef.spectral.lambda;
  const bool even = ef.spectral.parity == Parity::Even;
  Profile p;
  if (sigma < 0.0) {
    const double r = std::sqrt(-sigma);
    if (even) {
      p.value = std::cos(r * x1);
      p.derivative = -r * std::sin(r * x1);
    } else {
      p.value = std::sin(r * x1);
      p.derivative = r * std::cos(r * x1);
    }
    return p;
  }
  const double q = std::sqrt(sigma);
  if (even) {
    const double e = std::exp(q * (x1 - l)) / (1.0 + std::exp(-2.0 * q * l));
    p.value = e * (1.0 + std::exp(-2.0 * q * x1));
    p.derivative = q * e * (-std::expm1(-2.0 * q * x1));
    return p;
  }
  if (q * l < 1e-8) {
    p.value = x1 / l;
    p.derivative = 1.0 / l;
    return p;
  }
  const double e = std::exp(q * (x1 - l)) / (-std::expm1(-2.0 * q * l));
  p.value = e * (-std::expm1(-2.0 * q * x1));
  p.derivative = q * e * (1.0 + std::exp(-2.0 * q * x1));
  return p;
}

namespace {

void require_in_domain(const Geometry& g, double x1, double x2) {
  if (!std::isfinite(x1) || x2 < -g.d() || x2 > kPi) {
    throw DomainError("evaluate_field: point outside the closed domain");
  }
}

double full_mode(const Geometry& g, int j, double x2) {
  return std::sqrt(2.0 / (kPi + g.d())) * std::sin(j * g.kappa() * (x2 - kPi));
}

template <bool Derivative>
double evaluate_impl(const EigenfunctionExpansion& ef, double x1, double x2) {
  const Geometry& g = ef.geometry;
  require_in_domain(g, x1, x2);
  const bool odd = ef.spectral.parity == Parity::Odd;
  const double x = std::abs(x1);
  const double lambda = ef.spectral.lambda;
  // Value picks up the parity sign for x1 < 0, the derivative the opposite.
  const double sgn = (x1 < 0.0) ? -1.0 : 1.0;
  const double outer_sign = Derivative ? (odd ? 1.0 : sgn) : (odd ? sgn : 1.0);

  double sum = 0.0;
  if (x < g.l()) {
    for (int j = 1; j <= static_cast<int>(ef.a.size()); ++j) {
      const double aj = ef.a[j - 1];
      if (aj == 0.0) continue;
      const Profile p = window_profile(ef, j, x);
      sum += aj * (Derivative ? p.derivative : p.value) * full_mode(g, j, x2);
    }
    return outer_sign * sum;
  }
  if (x2 > 0.0) {
    const double norm = std::sqrt(2.0 / kPi);
    for (int q = 1; q <= static_cast<int>(ef.b.size()); ++q) {
      const double s = std::sqrt(q * q - lambda);
      const double e = ef.b[q - 1] * std::exp(-s * (x - g.l()));
      sum += (Derivative ? -s * e : e) * norm * std::sin(q * x2);
    }
  } else if (x2 < 0.0) {
    const double norm = std::sqrt(2.0 / g.d());
    for (int q = 1; q <= static_cast<int>(ef.c.size()); ++q) {
      const double w = kPi * q / g.d();
      const double s = std::sqrt(w * w - lambda);
      const double e = ef.c[q - 1] * std::exp(-s * (x - g.l()));
      sum += (Derivative ? -s * e : e) * norm * std::sin(w * x2);
    }
  }
  return outer_sign * sum;
}

}  // namespace

double evaluate_field(const EigenfunctionExpansion& ef, double x1, double x2) {
  return evaluate_impl<false>(ef, x1, x2);
}

double evaluate_field_dx1(const EigenfunctionExpansion& ef, double x1,
                          double x2) {
  return evaluate_impl<true>(ef, x1, x2);
}

}  // namespace wgwin
