#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "sysid/ctrb.hpp"
#include "sysid/errors.hpp"

namespace sysid {

double excitation_sigma_min(const MatrixXd& a, const MatrixXd& h, std::complex<double> s) {
  const Eigen::Index n = a.rows();
  Eigen::MatrixXcd m(n, n + h.cols());
  m.leftCols(n) = a.cast<std::complex<double>>();
  m.leftCols(n).diagonal().array() -= s;
  m.rightCols(h.cols()) = h.cast<std::complex<double>>();
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  return sv(sv.size() - 1);
}

namespace {

struct Pair {
  const MatrixXd* a;
  const MatrixXd* h;
};

double objective(const gsl_vector* x, void* params) {
  const auto* p = static_cast<const Pair*>(params);
  return excitation_sigma_min(*p->a, *p->h, {gsl_vector_get(x, 0), gsl_vector_get(x, 1)});
}

struct Candidate {
  double value;
  double re;
  double im;

  // Ties resolved by (Re s, Im s) so the result never depends on visit order.
  bool operator<(const Candidate& o) const {
    return std::tie(value, re, im) < std::tie(o.value, o.re, o.im);
  }
};

Candidate nelder_mead(const Pair& pair, const Candidate& start, double step) {
  gsl_multimin_function fn{&objective, 2, const_cast<Pair*>(&pair)};
  gsl_vector* x = gsl_vector_alloc(2);
  gsl_vector* ss = gsl_vector_alloc(2);
  gsl_vector_set(x, 0, start.re);
  gsl_vector_set(x, 1, start.im);
  gsl_vector_set_all(ss, step);
  gsl_multimin_fminimizer* s = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 2);
  gsl_multimin_fminimizer_set(s, &fn, x, ss);
  for (int iter = 0; iter < 2000; ++iter) {
    if (gsl_multimin_fminimizer_iterate(s) != GSL_SUCCESS) break;
    if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(s), 1e-12) == GSL_SUCCESS) break;
  }
  Candidate best{s->fval, gsl_vector_get(s->x, 0), gsl_vector_get(s->x, 1)};
  gsl_multimin_fminimizer_free(s);
  gsl_vector_free(ss);
  gsl_vector_free(x);
  return best;
}

}  // namespace

DistanceEstimate distance_to_uncontrollability(const MatrixXd& a, const MatrixXd& h,
                                               double grid_resolution, bool refine) {
  if (a.rows() != a.cols()) throw DimensionError("A must be square");
  if (h.rows() != a.rows()) throw DimensionError("H must have as many rows as A");
  if (a.rows() == 0) throw DimensionError("distance: empty system");
  if (std::isnan(grid_resolution)) throw DomainError("distance: grid resolution is NaN");

  const double radius = std::max(spectral_norm(a) + spectral_norm(h), 1e-12);
  const double res = grid_resolution > 0.0 ? grid_resolution : 0.02 * radius;
  const int nx = static_cast<int>(std::floor(radius / res));
  const int ny = nx;

  // Grid indexed by (i, j) with s = (i res, j res), i in [-nx, nx], j in [0, ny].
  const int width = 2 * nx + 1;
  std::vector<double> f(static_cast<std::size_t>(width) * (ny + 1),
                        std::numeric_limits<double>::infinity());
  auto at = [&](int i, int j) -> double& { return f[static_cast<std::size_t>(j) * width + (i + nx)]; };
  const Pair pair{&a, &h};
  for (int j = 0; j <= ny; ++j) {
    for (int i = -nx; i <= nx; ++i) {
      const double re = i * res;
      const double im = j * res;
      if (re * re + im * im > radius * radius * (1 + 1e-12)) continue;
      at(i, j) = excitation_sigma_min(a, h, {re, im});
    }
  }

  std::vector<Candidate> minima;
  Candidate best{std::numeric_limits<double>::infinity(), 0.0, 0.0};
  for (int j = 0; j <= ny; ++j) {
    for (int i = -nx; i <= nx; ++i) {
      const double v = at(i, j);
      if (!std::isfinite(v)) continue;
      const Candidate c{v, i * res, j * res};
      best = std::min(best, c);
      bool local = true;
      for (int dj = -1; dj <= 1 && local; ++dj) {
        for (int di = -1; di <= 1 && local; ++di) {
          const int ii = i + di;
          // Mirror across the real axis: f(conj s) = f(s).
          const int jj = std::abs(j + dj);
          if ((di == 0 && dj == 0) || ii < -nx || ii > nx || jj > ny) continue;
          if (at(ii, jj) < v) local = false;
        }
      }
      if (local) minima.push_back(c);
    }
  }
  std::sort(minima.begin(), minima.end());

  DistanceEstimate est;
  est.grid_resolution = res;
  if (refine) {
    const std::size_t starts = std::min<std::size_t>(3, minima.size());
    for (std::size_t k = 0; k < starts; ++k) {
      Candidate c = nelder_mead(pair, minima[k], res);
      c.im = std::abs(c.im);
      best = std::min(best, c);
    }
    est.refined = true;
  }
  est.minimizer_s = {best.re, best.im};
  est.value = excitation_sigma_min(a, h, est.minimizer_s);
  return est;
}

}  // namespace sysid
