#pragma once

// Symmetric eigensolver and spectral-set comparisons.
//
// sym_eigs splits the matrix into the connected components of its
// off-diagonal sparsity graph (an exact permutation similarity). Components
// that are paths are symmetric tridiagonal after reordering and go to a
// tridiagonal solver; everything else goes to the dense divide-and-conquer
// solver. Schreier graphs of the tree action are paths, so level matrices of
// elements supported on {e, a, b, c, d} never need a dense solve.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include <Eigen/Dense>
#include <lapacke.h>

#include "selfsim/error.hpp"
#include "selfsim/hecke.hpp"
#include "selfsim/intervals.hpp"

namespace selfsim {

struct EigReport {
  std::vector<double> eigenvalues;  // ascending
  double residual_bound = 0.0;      // max ‖Mv − λv‖ / ‖M‖ over the computed pairs
  double norm = 0.0;                // spectral norm, max |λ|
  std::size_t dim = 0;
  std::size_t path_components = 0;
  std::size_t dense_components = 0;
};

enum class EigMethod { Auto, Dense };

/// Default acceptance bound for residual_bound.
inline double residual_tolerance(double norm) { return 1e-10 * (1.0 + norm); }

namespace detail {

struct PairResiduals {
  std::vector<double> values;
  double max_residual = 0.0;  // absolute
};

inline PairResiduals dense_eigenpairs(Eigen::MatrixXd a) {
  const auto n = static_cast<lapack_int>(a.rows());
  const Eigen::MatrixXd original = a;
  std::vector<double> w(static_cast<std::size_t>(n));
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'L', n, a.data(), n, w.data());
  if (info != 0) throw Error(ErrorKind::InvalidArgument, "dsyevd failed with info " + std::to_string(info));
  PairResiduals out;
  out.values = w;
  for (lapack_int k = 0; k < n; ++k) {
    const Eigen::VectorXd v = a.col(k);
    out.max_residual = std::max(out.max_residual, (original * v - w[static_cast<std::size_t>(k)] * v).norm());
  }
  return out;
}

// diag has n entries, off has n − 1 nonzero entries. Eigenvalues come from
// the root-free QL/QR iteration; each one is then certified by two steps of
// inverse iteration and an explicit residual ‖(T − λ)v‖ for the unit vector v.
inline PairResiduals tridiagonal_eigenpairs(const std::vector<double>& diag, const std::vector<double>& off) {
  const auto n = static_cast<lapack_int>(diag.size());
  PairResiduals out;
  out.values = diag;
  if (n == 1) return out;
  std::vector<double> e = off;
  const lapack_int info = LAPACKE_dsterf(n, out.values.data(), e.data());
  if (info != 0) throw Error(ErrorKind::InvalidArgument, "dsterf failed with info " + std::to_string(info));

  const auto un = static_cast<std::size_t>(n);
  std::vector<double> dl(un - 1);
  std::vector<double> dd(un);
  std::vector<double> du(un - 1);
  std::vector<double> v(un);
  const double nudge = std::numeric_limits<double>::epsilon() *
                       std::max(1.0, std::abs(out.values.front()) + std::abs(out.values.back()));
  for (const double lambda : out.values) {
    for (std::size_t i = 0; i < un; ++i) v[i] = 1.0 + 0.37 * static_cast<double>((i * 7919) % 13) / 13.0;
    double shift = lambda;
    for (int step = 0; step < 2;) {
      std::copy(off.begin(), off.end(), dl.begin());
      std::copy(off.begin(), off.end(), du.begin());
      for (std::size_t i = 0; i < un; ++i) dd[i] = diag[i] - shift;
      std::vector<double> rhs = v;
      if (LAPACKE_dgtsv(LAPACK_COL_MAJOR, n, 1, dl.data(), dd.data(), du.data(), rhs.data(), n) > 0) {
        shift += nudge;  // exactly singular: move off the eigenvalue
        continue;
      }
      double norm = 0.0;
      for (double x : rhs) norm += x * x;
      norm = std::sqrt(norm);
      for (std::size_t i = 0; i < un; ++i) v[i] = rhs[i] / norm;
      ++step;
    }
    double sq = 0.0;
    for (std::size_t i = 0; i < un; ++i) {
      double r = (diag[i] - lambda) * v[i];
      if (i > 0) r += off[i - 1] * v[i - 1];
      if (i + 1 < un) r += off[i] * v[i + 1];
      sq += r * r;
    }
    out.max_residual = std::max(out.max_residual, std::sqrt(sq));
  }
  return out;
}

}  // namespace detail

/// All eigenvalues of a symmetric matrix with a residual certificate.
inline EigReport sym_eigs(const Eigen::MatrixXd& m, EigMethod method = EigMethod::Auto) {
  if (m.rows() != m.cols()) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  const Eigen::Index n = m.rows();
  EigReport report;
  report.dim = static_cast<std::size_t>(n);
  if (n == 0) return report;

  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = j + 1; i < n; ++i)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale)
        throw Error(ErrorKind::NotSymmetric, "asymmetry at (" + std::to_string(i) + ", " + std::to_string(j) + ")");

  double max_residual = 0.0;
  if (method == EigMethod::Dense) {
    auto pairs = detail::dense_eigenpairs(m);
    report.eigenvalues = std::move(pairs.values);
    max_residual = pairs.max_residual;
    report.dense_components = 1;
  } else {
    // Adjacency of the off-diagonal pattern, read from the lower triangle.
    std::vector<std::vector<Eigen::Index>> adj(static_cast<std::size_t>(n));
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = j + 1; i < n; ++i)
        if (m(i, j) != 0.0) {
          adj[static_cast<std::size_t>(i)].push_back(j);
          adj[static_cast<std::size_t>(j)].push_back(i);
        }
    std::vector<bool> seen(static_cast<std::size_t>(n), false);
    for (Eigen::Index start = 0; start < n; ++start) {
      if (seen[static_cast<std::size_t>(start)]) continue;
      std::vector<Eigen::Index> comp{start};
      seen[static_cast<std::size_t>(start)] = true;
      std::size_t edges2 = 0;
      bool low_degree = true;
      for (std::size_t k = 0; k < comp.size(); ++k) {
        const auto& nb = adj[static_cast<std::size_t>(comp[k])];
        edges2 += nb.size();
        low_degree = low_degree && nb.size() <= 2;
        for (auto u : nb)
          if (!seen[static_cast<std::size_t>(u)]) {
            seen[static_cast<std::size_t>(u)] = true;
            comp.push_back(u);
          }
      }
      const bool is_path = low_degree && edges2 / 2 + 1 == comp.size();
      if (is_path) {
        // Walk from an endpoint to get the tridiagonal ordering.
        Eigen::Index end = comp.front();
        for (auto v : comp)
          if (adj[static_cast<std::size_t>(v)].size() <= 1) {
            end = v;
            break;
          }
        std::vector<double> diag;
        std::vector<double> off;
        Eigen::Index prev = -1;
        Eigen::Index cur = end;
        while (true) {
          diag.push_back(m(cur, cur));
          Eigen::Index next = -1;
          for (auto u : adj[static_cast<std::size_t>(cur)])
            if (u != prev) next = u;
          if (next < 0) break;
          off.push_back(m(next, cur));
          prev = cur;
          cur = next;
        }
        auto pairs = detail::tridiagonal_eigenpairs(diag, off);
        report.eigenvalues.insert(report.eigenvalues.end(), pairs.values.begin(), pairs.values.end());
        max_residual = std::max(max_residual, pairs.max_residual);
        ++report.path_components;
      } else {
        std::sort(comp.begin(), comp.end());
        const auto k = static_cast<Eigen::Index>(comp.size());
        Eigen::MatrixXd sub(k, k);
        for (Eigen::Index c = 0; c < k; ++c)
          for (Eigen::Index r = 0; r < k; ++r)
            sub(r, c) = m(comp[static_cast<std::size_t>(r)], comp[static_cast<std::size_t>(c)]);
        auto pairs = detail::dense_eigenpairs(std::move(sub));
        report.eigenvalues.insert(report.eigenvalues.end(), pairs.values.begin(), pairs.values.end());
        max_residual = std::max(max_residual, pairs.max_residual);
        ++report.dense_components;
      }
    }
  }
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  report.norm = std::max(std::abs(report.eigenvalues.front()), std::abs(report.eigenvalues.back()));
  report.residual_bound = report.norm > 0.0 ? max_residual / report.norm : max_residual;
  return report;
}

inline EigReport sym_eigs(const OperatorMatrix& m, EigMethod method = EigMethod::Auto) {
  return sym_eigs(m.entries, method);
}

struct HausdorffReport {
  double forward = 0.0;   // max over points of the distance to the target
  double backward = 0.0;  // max over the target of the distance to the points
};

/// Both one-sided Hausdorff distances between a finite point set and a
/// union of closed intervals. The backward sup is attained at an interval
/// endpoint or at a midpoint between consecutive points, so it is exact.
inline HausdorffReport hausdorff_to_set(std::vector<double> points, const IntervalUnion& target) {
  if (points.empty()) throw Error(ErrorKind::InvalidArgument, "point set must be nonempty");
  if (target.empty()) throw Error(ErrorKind::InvalidArgument, "target set must be nonempty");
  std::sort(points.begin(), points.end());
  HausdorffReport out;
  for (double p : points) out.forward = std::max(out.forward, target.distance(p));
  auto nearest = [&](double x) {
    auto it = std::lower_bound(points.begin(), points.end(), x);
    double best = std::numeric_limits<double>::infinity();
    if (it != points.end()) best = *it - x;
    if (it != points.begin()) best = std::min(best, x - *std::prev(it));
    return best;
  };
  for (const auto& part : target.parts()) {
    out.backward = std::max({out.backward, nearest(part.lo), nearest(part.hi)});
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
      const double mid = 0.5 * (points[i] + points[i + 1]);
      if (mid > part.lo && mid < part.hi) out.backward = std::max(out.backward, nearest(mid));
    }
  }
  return out;
}

struct SpectralShiftReport {
  bool direct = false;      // α ∈ σ(M): min |λ − α| ≤ tol
  bool shifted = false;     // 1 ∈ σ(I − (M − α)(M − α)ᵀ / R²), read back through the scaling below
  bool agree = false;
  double direct_gap = 0.0;   // min |λ − α|
  double shifted_gap = 0.0;  // min over μ of R·√max(0, 1 − μ), an estimate of the same gap
  double noise_floor = 0.0;  // R·√(8·dim·ε): shifted gaps below this are indistinguishable from 0
  double threshold = 0.0;    // shifted predicate: shifted_gap ≤ max(tol, noise_floor)
};

/// Compares α ∈ σ(M) with 1 ∈ σ(I − (1/R²)(M − αI)(M − αI)ᵀ) for R ≥ 2‖M‖.
/// For symmetric M the shifted spectrum is {1 − (λ − α)²/R²}, so the second
/// predicate is read back as a gap R·√(1 − μ); its floating-point resolution
/// is R·√(8·dim·ε), reported as noise_floor.
inline SpectralShiftReport spectral_shift_check(const Eigen::MatrixXd& m, double alpha, double radius, double tol) {
  const EigReport direct = sym_eigs(m);
  if (radius < 2.0 * direct.norm)
    throw Error(ErrorKind::RadiusTooSmall, "R must be at least 2||M|| = " + std::to_string(2.0 * direct.norm));
  const Eigen::Index n = m.rows();
  const Eigen::MatrixXd shifted_base = m - alpha * Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd s =
      Eigen::MatrixXd::Identity(n, n) - (shifted_base * shifted_base.transpose()) / (radius * radius);
  // The product is symmetric only up to rounding; symmetrize before solving.
  const EigReport shifted = sym_eigs(0.5 * (s + s.transpose()), EigMethod::Dense);

  SpectralShiftReport out;
  out.direct_gap = std::numeric_limits<double>::infinity();
  for (double l : direct.eigenvalues) out.direct_gap = std::min(out.direct_gap, std::abs(l - alpha));
  out.shifted_gap = std::numeric_limits<double>::infinity();
  for (double mu : shifted.eigenvalues)
    out.shifted_gap = std::min(out.shifted_gap, radius * std::sqrt(std::max(0.0, 1.0 - mu)));
  out.noise_floor = radius * std::sqrt(8.0 * static_cast<double>(n) * std::numeric_limits<double>::epsilon());
  out.threshold = std::max(tol, out.noise_floor);
  out.direct = out.direct_gap <= tol;
  out.shifted = out.shifted_gap <= out.threshold;
  out.agree = out.direct == out.shifted;
  return out;
}

struct Histogram {
  std::vector<std::size_t> counts;
  std::size_t underflow = 0;
  std::size_t overflow = 0;
};

/// Equal-width bins over [lo, hi]; a point equal to hi falls in the last bin.
inline Histogram eig_histogram(const std::vector<double>& points, int bins, double lo, double hi) {
  if (bins < 1) throw Error(ErrorKind::InvalidArgument, "need at least one bin");
  if (!(lo < hi)) throw Error(ErrorKind::InvalidArgument, "need lo < hi");
  Histogram h;
  h.counts.assign(static_cast<std::size_t>(bins), 0);
  const double width = (hi - lo) / bins;
  for (double p : points) {
    if (p < lo) {
      ++h.underflow;
    } else if (p > hi) {
      ++h.overflow;
    } else {
      auto bin = static_cast<std::size_t>((p - lo) / width);
      h.counts[std::min(bin, h.counts.size() - 1)] += 1;
    }
  }
  return h;
}

}  // namespace selfsim
