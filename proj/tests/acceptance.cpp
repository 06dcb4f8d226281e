// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "selfsim/commands.hpp"
#include "selfsim/selfsim.hpp"

using namespace selfsim;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

int failures = 0;

void criterion(int id, const char* title, const std::function<Outcome()>& body) {
  const auto t0 = Clock::now();
  Outcome out;
  try {
    out = body();
  } catch (const std::exception& e) {
    out.ok = false;
    out.detail = std::string("exception: ") + e.what();
  }
  if (!out.ok) ++failures;
  std::printf("%s [%2d] %s (%.2f s)%s%s\n", out.ok ? "PASS" : "FAIL", id, title, seconds_since(t0),
              out.detail.empty() ? "" : " :: ", out.detail.c_str());
  std::fflush(stdout);
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

bool nested(const std::vector<double>& lo, const std::vector<double>& hi, double tol) {
  for (double v : lo) {
    auto it = std::lower_bound(hi.begin(), hi.end(), v - tol);
    if (it == hi.end() || *it > v + tol) return false;
  }
  return true;
}

bool doubled_multiset(const std::vector<double>& single, const std::vector<double>& pair, double tol) {
  if (pair.size() != 2 * single.size()) return false;
  for (std::size_t i = 0; i < single.size(); ++i)
    if (std::abs(pair[2 * i] - single[i]) > tol || std::abs(pair[2 * i + 1] - single[i]) > tol) return false;
  return true;
}

double halton(std::uint64_t i, std::uint64_t base) {
  double f = 1.0;
  double r = 0.0;
  while (i > 0) {
    f /= static_cast<double>(base);
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

int main() {
  const IntervalUnion delta_set{{-0.5, 0.0}, {0.5, 1.0}};
  const IntervalUnion cayley_set{{-2.0, 0.0}, {2.0, 4.0}};
  std::vector<double> delta13;

  criterion(1, "Laplacian level spectra lie in [-1/2,0]u[1/2,1], n = 1..13", [&] {
    Outcome out;
    for (int n = 1; n <= 13; ++n) {
      const auto t0 = Clock::now();
      const auto eig = sym_eigs(assemble_level(AlgebraElement::delta(), n));
      const double elapsed = seconds_since(t0);
      const auto h = hausdorff_to_set(eig.eigenvalues, delta_set);
      out.require(h.forward <= 1e-9, "n=" + std::to_string(n) + " forward " + num(h.forward));
      out.require(eig.residual_bound <= residual_tolerance(eig.norm), "n=" + std::to_string(n) + " residual");
      if (n == 13) {
        delta13 = eig.eigenvalues;
        out.require(h.backward <= 0.05, "n=13 backward " + num(h.backward));
        out.require(elapsed <= 60.0, "n=13 solve took " + num(elapsed) + " s");
        out.detail += (out.detail.empty() ? "" : "; ") + std::string("n=13 backward ") + num(h.backward) +
                      ", solve " + num(elapsed) + " s";
      }
    }
    return out;
  });

  criterion(2, "Cayley graph spectrum [-2,0]u[2,4]: slice t=-1 and a+b+c+d at n = 13", [&] {
    Outcome out;
    out.require(lambda_slice(-1.0) == cayley_set, "lambda_slice(-1) endpoints");
    const auto sum_matrix = assemble_level(AlgebraElement::generator_sum(), 13);
    const auto delta_matrix = assemble_level(AlgebraElement::delta(), 13);
    out.require(sum_matrix.entries == 4.0 * delta_matrix.entries, "matrix of a+b+c+d is not exactly 4 Delta");
    const auto eig = sym_eigs(sum_matrix);
    const auto h = hausdorff_to_set(eig.eigenvalues, cayley_set);
    out.require(h.forward <= 1e-9, "forward " + num(h.forward));
    out.require(h.backward <= 0.05, "backward " + num(h.backward));
    if (delta13.size() == eig.eigenvalues.size()) {
      double worst = 0.0;
      for (std::size_t i = 0; i < delta13.size(); ++i) worst = std::max(worst, std::abs(4.0 * delta13[i] - eig.eigenvalues[i]));
      out.require(worst == 0.0, "4 x Delta eigenvalues differ by " + num(worst));
    } else {
      out.require(false, "level-13 Laplacian eigenvalues unavailable");
    }
    return out;
  });

  criterion(3, "Slice formula and level-10 samples for t in {-1.5,-1,-0.5}", [&] {
    Outcome out;
    for (double t : {-1.5, -1.0, -0.5}) {
      const IntervalUnion formula{{t - 1, -t - 1}, {t + 3, -t + 3}};
      out.require(lambda_slice(t) == formula, "endpoints at t=" + num(t));
      const auto h = hausdorff_to_set(slice_spectrum_samples(t, 10), lambda_slice(t));
      out.require(h.forward <= 1e-9, "forward at t=" + num(t) + " is " + num(h.forward));
      out.require(h.backward <= 0.02, "backward at t=" + num(t) + " is " + num(h.backward));
    }
    return out;
  });

  criterion(4, "Curve invariance F(gamma_{n,j}) in gamma_{n-1,j}, n <= 6, 10^4 samples", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    double worst = 0.0;
    for (int n = 1; n <= 6; ++n)
      for (std::int64_t j = 0; j < (std::int64_t{1} << n); ++j) {
        const auto r = curve_invariance_check(n, j, 10000, 1e-9);
        worst = std::max(worst, r.max_residual);
        out.require(r.ok, "n=" + std::to_string(n) + " j=" + std::to_string(j) + " residual " + num(r.max_residual));
      }
    const double elapsed = seconds_since(t0);
    out.require(elapsed <= 10.0, "took " + num(elapsed) + " s");
    if (out.ok) out.detail = "max residual " + num(worst);
    return out;
  });

  criterion(5, "Schur block identity at 100 random (alpha,beta), n in {1,2,3,4}", [&] {
    Outcome out;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-4.0, 4.0);
    double worst = 0.0;
    int done = 0;
    while (done < 100) {
      const double alpha = u(rng);
      const double beta = u(rng);
      if (std::abs(beta - 2.0) < 0.1 || std::abs(beta + 2.0) < 0.1) continue;
      ++done;
      for (int n = 1; n <= 4; ++n) {
        const auto r = schur_step_check(alpha, beta, n, 1e-12);
        worst = std::max(worst, r.max_residual);
        out.require(r.ok, "(" + num(alpha) + "," + num(beta) + ") n=" + std::to_string(n) + " residual " + num(r.max_residual));
      }
    }
    if (out.ok) out.detail = "max residual " + num(worst);
    return out;
  });

  criterion(6, "Exact relation suite at every level n <= 13", [&] {
    Outcome out;
    for (int n = 0; n <= 13; ++n)
      for (const auto& r : relation_suite(LevelMatrices(n))) out.require(r.ok, r.name);
    return out;
  });

  criterion(7, "Groupoid block spectrum is the doubled level spectrum, n <= 8", [&] {
    Outcome out;
    AlgebraElement mixed;
    mixed.add("a", 1.0).add("b", -1.0).add("c", 2.0);
    const std::vector<std::pair<std::string, AlgebraElement>> elements{
        {"Delta", AlgebraElement::delta()}, {"a+b+c+d", AlgebraElement::generator_sum()}, {"a-b+2c", mixed}};
    for (const auto& [name, m] : elements)
      for (int n = 0; n <= 8; ++n) {
        const auto single = sym_eigs(assemble_level(m, n));
        const auto pair = sym_eigs(groupoid_block(m, n));
        out.require(doubled_multiset(single.eigenvalues, pair.eigenvalues, residual_tolerance(single.norm)),
                    name + " n=" + std::to_string(n));
      }
    return out;
  });

  criterion(8, "Laplacian level spectra are nested, n <= 10", [&] {
    Outcome out;
    auto prev = sym_eigs(assemble_level(AlgebraElement::delta(), 0)).eigenvalues;
    for (int n = 0; n <= 10; ++n) {
      auto next = sym_eigs(assemble_level(AlgebraElement::delta(), n + 1)).eigenvalues;
      out.require(nested(prev, next, 1e-9), "level " + std::to_string(n) + " not inside level " + std::to_string(n + 1));
      prev = std::move(next);
    }
    return out;
  });

  criterion(9, "Rigid fraction >= 0.999 per generator, q in {0.3,0.5,0.7}, 10^4 points, depth 64", [&] {
    Outcome out;
    const auto t0 = Clock::now();
    std::string summary;
    for (double q : {0.3, 0.5, 0.7}) {
      summary += std::string(summary.empty() ? "" : ";") + " q=" + num(q) + ":";
      const auto points = sample_boundary_points(q, 10000, 64, 1);
      const auto again = sample_boundary_points(q, 10000, 64, 1);
      out.require(points == again, "sampling not reproducible at q=" + num(q));
      for (const auto& t : rigidity_tally(points, 64)) {
        const double fraction = static_cast<double>(t.rigid) / 10000.0;
        out.require(fraction >= 0.999, std::string(1, to_char(t.generator)) + " at q=" + num(q) + ": " + num(fraction));
        if (t.generator != Gen::a) summary += " " + std::string(1, to_char(t.generator)) + "=" + num(fraction);
      }
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed <= 5.0, "took " + num(elapsed) + " s");
    if (out.ok) out.detail = "rigid fractions" + summary;
    return out;
  });

  criterion(10, "Truncated orbital Laplacian on the radius-256 ball at 1^inf", [&] {
    Outcome out;
    const auto ball = orbital_ball(BoundaryPoint::parse("(1)"), standard_generators(), 256, 300);
    const auto eig = sym_eigs(assemble_orbital(AlgebraElement::delta(), ball.graph));
    out.require(eig.eigenvalues.front() >= -0.6 && eig.eigenvalues.back() <= 1.1,
                "range [" + num(eig.eigenvalues.front()) + ", " + num(eig.eigenvalues.back()) + "]");
    std::size_t near = 0;
    for (double v : eig.eigenvalues) near += delta_set.distance(v) <= 0.05 ? 1 : 0;
    const double fraction = static_cast<double>(near) / static_cast<double>(eig.eigenvalues.size());
    out.require(fraction >= 0.9, "fraction near target " + num(fraction));
    if (out.ok) out.detail = std::to_string(eig.dim) + " vertices, fraction near target " + num(fraction);
    return out;
  });

  criterion(11, "Property suites: decomposition, word problem, balls, Omega/F, spectral shift", [&] {
    Outcome out;
    // Decomposition soundness, words of length <= 8 (sampled beyond length 4), vertices of level <= 6.
    std::mt19937_64 rng(11);
    std::vector<GroupWord> words;
    for (int len = 0; len <= 4; ++len)
      for (auto& w : oracle::all_words(len)) words.push_back(w);
    for (int k = 0; k < 2000; ++k) words.push_back(oracle::random_word(rng, 8));
    bool sound = true;
    for (const auto& w : words)
      for (int n = 0; n <= 6 && sound; ++n)
        for (std::uint64_t i = 0; i < (std::uint64_t{1} << n) && sound; ++i) {
          const Vertex v = Vertex::from_index(n, i);
          sound = act_vertex(w, v) == oracle::act_by_decomposition(w, v);
        }
    out.require(sound, "decomposition soundness");

    // Word problem against the action on V_10, all words of length <= 8.
    bool word_problem = true;
    for (int len = 0; len <= 8 && word_problem; ++len)
      for (const auto& w : oracle::all_words(len))
        if (is_identity(w) != oracle::acts_trivially_on_level(w, 10)) {
          word_problem = false;
          break;
        }
    out.require(word_problem, "word problem vs action");

    // Ball monotonicity.
    bool monotone = true;
    for (const char* x : {"(0)", "(1)", "(01)", "1(100)", "0(011)"})
      for (int r = 0; r < 16; ++r) {
        const auto small = orbital_ball(BoundaryPoint::parse(x), standard_generators(), r, 64);
        const auto big = orbital_ball(BoundaryPoint::parse(x), standard_generators(), r + 1, 64);
        monotone = monotone && balls_isomorphic(small.graph, induced_ball(big.graph, big.graph.root(), r));
      }
    out.require(monotone, "ball monotonicity");

    // Ω two-way invariance under F on 10^5 quasi-random points.
    std::uint64_t mismatches = 0;
    std::uint64_t tested = 0;
    for (std::uint64_t i = 1; tested < 100000; ++i) {
      const Param p{-6.0 + 12.0 * halton(i, 2), -6.0 + 12.0 * halton(i, 3)};
      if (near_beta_pole(p.beta)) continue;
      ++tested;
      mismatches += in_omega(p) != in_omega(F(p)) ? 1 : 0;
    }
    out.require(mismatches == 0, "Omega/F mismatches " + std::to_string(mismatches));

    // Spectral shift agreement: 100 random symmetric matrices, dim <= 16, 20 probes each.
    std::mt19937_64 mrng(2024);
    std::uniform_real_distribution<double> entry(-1.0, 1.0);
    std::size_t disagreements = 0;
    for (int trial = 0; trial < 100; ++trial) {
      const int n = 1 + trial % 16;
      Eigen::MatrixXd m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = entry(mrng);
      const auto eig = sym_eigs(m);
      std::uniform_real_distribution<double> probe(-eig.norm - 1.0, eig.norm + 1.0);
      std::uniform_int_distribution<std::size_t> pick(0, eig.eigenvalues.size() - 1);
      for (int k = 0; k < 20; ++k) {
        const double alpha = k % 2 == 0 ? eig.eigenvalues[pick(mrng)] : probe(mrng);
        disagreements += spectral_shift_check(m, alpha, 2.0 * eig.norm + 0.5, 1e-8).agree ? 0 : 1;
      }
    }
    out.require(disagreements == 0, "spectral shift disagreements " + std::to_string(disagreements));
    return out;
  });

  std::printf("%s: %d failing criteria\n", failures == 0 ? "ACCEPTED" : "REJECTED", failures);
  return failures == 0 ? 0 : 1;
}
