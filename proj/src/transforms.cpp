#include "cindex/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "cindex/error.hpp"

namespace cindex {

TimeGrid default_common_grid() { return TimeGrid::regular(0.0, kDefaultGridEnd, 1.0); }

SurvivalMatrix interpolate(const SurvivalMatrix& sm, const TimeGrid& dst) {
  const TimeGrid& src = sm.grid();
  if (src.empty()) throw InputError("cannot interpolate a matrix with an empty grid");
  const std::size_t m = dst.size();
  const auto sp = src.points();
  const bool anchored = src.front() > 0.0;

  // Per destination point: bracketing source index and interpolation fraction.
  struct Stencil {
    std::size_t lo = 0;
    double frac = 0.0;
    enum { before, inside, after } where = inside;
  };
  std::vector<Stencil> stencil(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t = dst[k];
    Stencil& s = stencil[k];
    if (t < sp.front()) {
      s.where = Stencil::before;
    } else if (t >= sp.back()) {
      s.where = Stencil::after;
    } else {
      auto it = std::upper_bound(sp.begin(), sp.end(), t);
      s.lo = static_cast<std::size_t>(it - sp.begin()) - 1;
      s.frac = (t - sp[s.lo]) / (sp[s.lo + 1] - sp[s.lo]);
    }
  }

  std::vector<double> out(sm.rows() * m);
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    const auto row = sm.row(i);
    for (std::size_t k = 0; k < m; ++k) {
      const Stencil& s = stencil[k];
      double v;
      switch (s.where) {
        case Stencil::before: v = anchored ? 1.0 : row.front(); break;
        case Stencil::after: v = row.back(); break;
        default:
          v = s.frac == 0.0 ? row[s.lo] : row[s.lo] + s.frac * (row[s.lo + 1] - row[s.lo]);
      }
      out[i * m + k] = v;
    }
  }
  return SurvivalMatrix(dst, sm.rows(), std::move(out));
}

RiskVector risk_at_time(const SurvivalMatrix& sm, double t) {
  if (!(t >= 0.0)) throw InputError("time must be >= 0");
  std::vector<double> risk(sm.rows());
  for (std::size_t i = 0; i < sm.rows(); ++i) risk[i] = 1.0 - sm.step_value(i, t);
  return RiskVector(std::move(risk));
}

RiskVector expected_mortality(const SurvivalMatrix& sm) {
  double eps = std::numeric_limits<double>::infinity();
  for (double s : sm.data()) {
    if (s > 0.0) eps = std::min(eps, s);
  }
  if (!std::isfinite(eps)) throw ComputationError("degenerate matrix");

  std::vector<double> risk(sm.rows(), 0.0);
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    double h = 0.0;
    for (double s : sm.row(i)) h += -std::log(s > 0.0 ? s : eps);
    risk[i] = h;
  }
  return RiskVector(std::move(risk));
}

RiskVector neg_rmst(const SurvivalMatrix& sm, double t_star) {
  const TimeGrid& grid = sm.grid();
  if (grid.empty() || !(t_star > grid.front())) {
    throw InputError("T* must exceed the first grid point");
  }
  std::vector<double> width;
  for (std::size_t k = 0; k < grid.size() && grid[k] < t_star; ++k) {
    const double next = k + 1 < grid.size() ? std::min(grid[k + 1], t_star) : t_star;
    width.push_back(next - grid[k]);
  }
  std::vector<double> risk(sm.rows());
  for (std::size_t i = 0; i < sm.rows(); ++i) {
    const auto row = sm.row(i);
    double area = 0.0;
    for (std::size_t k = 0; k < width.size(); ++k) area += row[k] * width[k];
    risk[i] = -area;
  }
  return RiskVector(std::move(risk));
}

}  // namespace cindex
