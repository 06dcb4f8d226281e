#pragma once

// Renormalization of the two-parameter family Q(α, β) = −α·a + b + c + d − (β + 1)·e:
// the rational map F, the region Ω, the invariant curves γ_{n,j}, and the
// slices Λ_t of Ω that give the spectra of −t·a + b + c + d.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "selfsim/error.hpp"
#include "selfsim/intervals.hpp"

namespace selfsim {

struct Param {
  double alpha = 0.0;
  double beta = 0.0;

  friend bool operator==(const Param&, const Param&) = default;
};

inline constexpr double kPoleTolerance = 1e-12;

inline bool near_beta_pole(double beta, double margin = kPoleTolerance) { return std::abs(std::abs(beta) - 2.0) < margin; }

/// F(α, β) = (2α²/(4 − β²), β + α²β/(4 − β²)), undefined on β = ±2.
inline Param F(const Param& p) {
  if (near_beta_pole(p.beta)) throw Error(ErrorKind::PoleAtBeta, "F is undefined at beta = " + std::to_string(p.beta));
  const double denom = 4.0 - p.beta * p.beta;
  const double a2 = p.alpha * p.alpha;
  return {2.0 * a2 / denom, p.beta + a2 * p.beta / denom};
}

/// Ω = {(α, β) : ||α| − |β|| ≤ 2, |α| + |β| ≥ 2}.
inline bool in_omega(const Param& p) {
  const double a = std::abs(p.alpha);
  const double b = std::abs(p.beta);
  return std::abs(a - b) <= 2.0 && a + b >= 2.0;
}

/// cos(2πj/2ⁿ), exact at multiples of a quarter turn and symmetric in j ↔ 2ⁿ − j.
inline double dyadic_cos(std::int64_t j, int n) {
  if (n < 0 || n > 62) throw Error(ErrorKind::InvalidArgument, "dyadic level out of range");
  const std::int64_t full = std::int64_t{1} << n;
  j %= full;
  if (j < 0) j += full;
  if (2 * j > full) j = full - j;  // cos is even: now j/full ∈ [0, 1/2]
  // 4j vs full decides the quadrant: j/full ∈ [0, 1/4] or (1/4, 1/2].
  if (j == 0) return 1.0;
  if (4 * j == full) return 0.0;
  if (2 * j == full) return -1.0;
  const double frac = static_cast<double>(j) / static_cast<double>(full);
  if (4 * j < full) return std::cos(2.0 * std::numbers::pi * frac);
  return -std::cos(2.0 * std::numbers::pi * (0.5 - frac));
}

/// 4 − β² + α² − 4α·cos(2πj/2ⁿ); zero exactly on γ_{n,j}.
inline double gamma_residual(int n, std::int64_t j, const Param& p) {
  return 4.0 - p.beta * p.beta + p.alpha * p.alpha - 4.0 * p.alpha * dyadic_cos(j, n);
}

struct CurveReport {
  double max_residual = 0.0;
  std::size_t evaluated = 0;
  std::size_t skipped_near_pole = 0;
  bool ok = false;
};

/// Samples γ_{n,j} (both branches β = ±√(α² − 4α·cosθ + 4)) at α = 2cosθ + s,
/// with s on a uniform grid of `samples` points in [−half_width, half_width]
/// (a single sample sits at the vertex s = 0), maps each point by F and
/// evaluates the γ_{n−1,j} residual. Points with |β ∓ 2| < pole_margin are
/// skipped because F is singular there.
inline CurveReport curve_invariance_check(int n, std::int64_t j, int samples, double tol, double half_width = 6.0,
                                          double pole_margin = 0.1) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "curve check needs n >= 1");
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "curve check needs at least one sample");
  const double c = dyadic_cos(j, n);
  CurveReport out;
  for (int i = 0; i < samples; ++i) {
    const double s = samples == 1 ? 0.0 : -half_width + 2.0 * half_width * i / (samples - 1);
    const double alpha = 2.0 * c + s;
    const double root = std::sqrt(std::max(0.0, alpha * alpha - 4.0 * alpha * c + 4.0));
    for (int branch = 0; branch < (root == 0.0 ? 1 : 2); ++branch) {
      const double beta = branch == 0 ? root : -root;
      if (near_beta_pole(beta, pole_margin)) {
        ++out.skipped_near_pole;
        continue;
      }
      const double r = std::abs(gamma_residual(n - 1, j, F({alpha, beta})));
      out.max_residual = std::max(out.max_residual, r);
      ++out.evaluated;
    }
  }
  out.ok = out.max_residual <= tol;
  return out;
}

/// Λ_t = ({α = t} ∩ Ω) + 1: the set of β + 1 with (t, β) ∈ Ω.
/// With s = |t| the slice is |β| ∈ [|s − 2|, s + 2].
inline IntervalUnion lambda_slice(double t) {
  const double s = std::abs(t);
  const double inner = std::abs(s - 2.0);
  const double outer = s + 2.0;
  return IntervalUnion({{1.0 - outer, 1.0 - inner}, {1.0 + inner, 1.0 + outer}});
}

/// The points 1 ± √(t² − 4t·cos(2πj/2ⁿ) + 4), j = 0..2ⁿ − 1, where the line
/// α = t meets the curves γ_{n,j}; sorted and deduplicated within 1e−12.
inline std::vector<double> slice_spectrum_samples(double t, int n) {
  if (n < 0 || n > 24) throw Error(ErrorKind::InvalidArgument, "level out of range");
  const std::int64_t count = std::int64_t{1} << n;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(2 * count));
  for (std::int64_t j = 0; j < count; ++j) {
    const double r = std::sqrt(std::max(0.0, t * t - 4.0 * t * dyadic_cos(j, n) + 4.0));
    values.push_back(1.0 - r);
    values.push_back(1.0 + r);
  }
  std::sort(values.begin(), values.end());
  std::vector<double> out;
  for (double v : values)
    if (out.empty() || v - out.back() > 1e-12) out.push_back(v);
  return out;
}

struct HOrbit {
  std::vector<double> values;             // z_0, …, z_steps
  std::vector<double> distance_to_sink;   // |z_k + 2|
};

/// Orbit of h(z) = 4z/(2 − z): 0 is a repelling fixed point and −2 attracts.
inline HOrbit h_orbit(double z0, int steps) {
  if (steps < 0) throw Error(ErrorKind::InvalidArgument, "steps must be nonnegative");
  HOrbit out;
  double z = z0;
  for (int k = 0;; ++k) {
    out.values.push_back(z);
    out.distance_to_sink.push_back(std::abs(z + 2.0));
    if (k == steps) break;
    if (std::abs(z - 2.0) <= kPoleTolerance) throw Error(ErrorKind::PoleHit, "orbit reached z = 2");
    z = 4.0 * z / (2.0 - z);
  }
  return out;
}

namespace detail {

inline std::string svg_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

}  // namespace detail

/// Static 800×800 drawing of Ω over α, β ∈ [−6, 6] with the curves γ_{n,j}
/// for n ≤ max_curve_level overlaid, and optionally the vertical line α = t.
inline std::string omega_svg(int max_curve_level, const double* slice_t = nullptr) {
  constexpr double size = 800.0;
  constexpr double span = 6.0;
  auto px = [&](double alpha) { return (alpha + span) / (2 * span) * size; };
  auto py = [&](double beta) { return (span - beta) / (2 * span) * size; };
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
  os << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"800\" fill=\"white\"/>\n";
  // Ω in the closed first quadrant, clipped to the window, then mirrored.
  const double quadrant[][2] = {{2, 0}, {6, 4}, {6, 6}, {4, 6}, {0, 2}};
  for (int sa : {1, -1}) {
    for (int sb : {1, -1}) {
      os << "<polygon fill=\"#c6dbef\" stroke=\"none\" points=\"";
      for (const auto& q : quadrant) os << detail::svg_num(px(sa * q[0])) << ',' << detail::svg_num(py(sb * q[1])) << ' ';
      os << "\"/>\n";
    }
  }
  os << "<line x1=\"0\" y1=\"400\" x2=\"800\" y2=\"400\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  os << "<line x1=\"400\" y1=\"0\" x2=\"400\" y2=\"800\" stroke=\"#888\" stroke-width=\"1\"/>\n";
  constexpr int steps = 600;
  for (int n = 0; n <= max_curve_level; ++n) {
    const std::int64_t count = std::int64_t{1} << n;
    for (std::int64_t j = 0; j < count; ++j) {
      const double c = dyadic_cos(j, n);
      for (int sign : {1, -1}) {
        std::string points;
        auto flush = [&] {
          if (!points.empty())
            os << "<polyline fill=\"none\" stroke=\"#08519c\" stroke-width=\"0.6\" points=\"" << points << "\"/>\n";
          points.clear();
        };
        for (int i = 0; i <= steps; ++i) {
          const double alpha = -span + 2 * span * i / steps;
          const double beta = sign * std::sqrt(std::max(0.0, alpha * alpha - 4 * alpha * c + 4));
          if (std::abs(beta) > span) {
            flush();
            continue;
          }
          points += detail::svg_num(px(alpha)) + "," + detail::svg_num(py(beta)) + " ";
        }
        flush();
      }
    }
  }
  if (slice_t != nullptr && std::abs(*slice_t) <= span) {
    const std::string x = detail::svg_num(px(*slice_t));
    os << "<line x1=\"" << x << "\" y1=\"0\" x2=\"" << x << "\" y2=\"800\" stroke=\"#cb181d\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace selfsim
