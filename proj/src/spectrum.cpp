#include "wgwin/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wgwin/detail/parallel.hpp"

namespace wgwin {

bool SpectrumResult::has_solver_warning() const {
  return std::any_of(warnings.begin(), warnings.end(),
                     [](const auto& w) { return !w.straddles_threshold; });
}

SpectrumResult discrete_spectrum(const Geometry& g, int n_modes, double tol) {
  SpectrumOptions opt;
  opt.root.tol = tol;
  return discrete_spectrum(g, n_modes, opt);
}

SpectrumResult discrete_spectrum(const Geometry& g, int n_modes,
                                 const SpectrumOptions& opt) {
  if (!(g.l() > 0.0)) {
    throw DomainError(
        "discrete_spectrum: l = 0 closes the window; the spectrum is the "
        "essential part [1, inf) and the discrete spectrum is empty");
  }
  SpectrumResult out;
  const double cap = 1.0 - opt.threshold_margin;
  for (int m = 1;; ++m) {
    const SpectralBracket br = bracket_for(g, m);
    if (br.lower >= cap) break;
    try {
      out.points.push_back(solve_in_bracket(g, m, n_modes, opt.root, cap));
    } catch (const NoSignChange& e) {
      out.warnings.push_back(
          {m, e.what(), !br.is_below_threshold, e.lambdas(), e.values()});
    }
  }
  return out;
}

std::vector<double> SweepTable::trajectory(int m) const {
  std::vector<double> out(rows.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (const auto& p : rows[i]) {
      if (p.m == m) out[i] = p.lambda;
    }
  }
  return out;
}

SweepTable sweep_over_l(double d, const std::vector<double>& l_grid,
                        int n_modes, double tol) {
  for (std::size_t i = 0; i < l_grid.size(); ++i) {
    if (!(l_grid[i] > 0.0)) throw DomainError("sweep_over_l: l must be positive");
    if (i > 0 && !(l_grid[i] > l_grid[i - 1])) {
      throw DomainError("sweep_over_l: l grid must be strictly increasing");
    }
  }
  const Geometry base(d, 0.0);
  (void)basis_for(d, n_modes);  // build once before the workers start

  SweepTable t;
  t.d = d;
  t.l_values = l_grid;
  t.rows.resize(l_grid.size());
  t.counts.resize(l_grid.size());
  t.warnings.resize(l_grid.size());
  detail::parallel_for(l_grid.size(), [&](std::size_t i) {
    try {
      SpectrumResult r = discrete_spectrum(base.with_l(l_grid[i]), n_modes, tol);
      t.counts[i] = static_cast<int>(r.points.size());
      t.rows[i] = std::move(r.points);
      t.warnings[i] = std::move(r.warnings);
    } catch (const std::exception& e) {
      t.warnings[i].push_back({0, e.what(), false, {}, {}});
    }
  });
  return t;
}

ExtrapolatedEigenvalue extrapolate_in_modes(const Geometry& g, int m,
                                            int n_base, double tol) {
  ExtrapolatedEigenvalue e;
  e.m = m;
  for (int f : {1, 2, 4}) {
    e.n_modes.push_back(f * n_base);
    e.raw.push_back(solve_in_bracket(g, m, f * n_base, tol).lambda);
  }
  // Same weights as the mesh fit: 1/N plays the role of h.
  e.limit = (8.0 * e.raw[2] - 6.0 * e.raw[1] + e.raw[0]) / 3.0;
  e.spread = std::abs(e.limit - (2.0 * e.raw[2] - e.raw[1]));
  return e;
}

}  // namespace wgwin
