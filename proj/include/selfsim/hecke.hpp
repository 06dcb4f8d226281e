#pragma once

// Finite-dimensional matrices of Hecke-type operators U(m) = Σ m(s)·U(s):
// level-n Koopman matrices unfolded from the block recursion
//
//   A = [[0, I], [I, 0]],  B = diag(A, C),  C = diag(A, D),  D = diag(I, B),
//
// compressions of quasi-regular representations to orbital balls, and the
// doubled groupoid block form.

#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "selfsim/algebra.hpp"
#include "selfsim/error.hpp"
#include "selfsim/renorm.hpp"
#include "selfsim/schreier.hpp"
#include "selfsim/word.hpp"

namespace selfsim {

inline constexpr int kMaxPermutationLevel = 20;
inline constexpr int kMaxDenseLevel = 13;

/// Permutation of {0, …, N−1}; perm[v] is the image of v. As a matrix it is
/// P with P·e_v = e_{perm[v]}, so products compose like group words.
using Permutation = std::vector<std::uint32_t>;

inline Permutation identity_permutation(std::size_t size) {
  Permutation p(size);
  for (std::size_t i = 0; i < size; ++i) p[i] = static_cast<std::uint32_t>(i);
  return p;
}

/// (lhs ∘ rhs)[v] = lhs[rhs[v]].
inline Permutation compose(const Permutation& lhs, const Permutation& rhs) {
  Permutation out(rhs.size());
  for (std::size_t v = 0; v < rhs.size(); ++v) out[v] = lhs[rhs[v]];
  return out;
}

inline Eigen::MatrixXi permutation_matrix(const Permutation& p) {
  const auto n = static_cast<Eigen::Index>(p.size());
  Eigen::MatrixXi m = Eigen::MatrixXi::Zero(n, n);
  for (Eigen::Index v = 0; v < n; ++v) m(p[static_cast<std::size_t>(v)], v) = 1;
  return m;
}

/// Exact level-n matrices of a, b, c, d, stored as permutations. They do not
/// depend on the Bernoulli parameter of the measure: the same matrices serve
/// every Koopman representation at finite level.
class LevelMatrices {
 public:
  LevelMatrices() : LevelMatrices(0) {}

  explicit LevelMatrices(int n) : level_(n) {
    if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
    if (n > kMaxPermutationLevel)
      throw Error(ErrorKind::LevelTooLarge, "level " + std::to_string(n) + " exceeds " + std::to_string(kMaxPermutationLevel));
    for (auto& p : perms_) p = Permutation{0};
    for (int k = 1; k <= n; ++k) unfold();
  }

  int level() const noexcept { return level_; }
  std::size_t dim() const noexcept { return perms_[0].size(); }

  const Permutation& perm(Gen g) const { return perms_[static_cast<std::size_t>(g)]; }
  Permutation& perm(Gen g) { return perms_[static_cast<std::size_t>(g)]; }

  /// Permutation of a word; the rightmost letter acts first.
  Permutation word(const GroupWord& w) const {
    Permutation p = identity_permutation(dim());
    for (auto it = w.letters().rbegin(); it != w.letters().rend(); ++it) p = compose(perm(*it), p);
    return p;
  }

  Eigen::MatrixXi dense(Gen g) const { return permutation_matrix(perm(g)); }

 private:
  // One step of the block recursion, from level k−1 to level k.
  void unfold() {
    const std::size_t half = dim();
    auto block = [half](const Permutation& top, const Permutation& bottom) {
      Permutation out(2 * half);
      for (std::size_t v = 0; v < half; ++v) {
        out[v] = top[v];
        out[half + v] = static_cast<std::uint32_t>(half + bottom[v]);
      }
      return out;
    };
    const auto& a = perms_[0];
    const auto& b = perms_[1];
    const auto& c = perms_[2];
    const auto& d = perms_[3];
    const Permutation id = identity_permutation(half);
    Permutation next_a(2 * half);
    for (std::size_t v = 0; v < half; ++v) {
      next_a[v] = static_cast<std::uint32_t>(half + v);
      next_a[half + v] = static_cast<std::uint32_t>(v);
    }
    std::array<Permutation, 4> next{std::move(next_a), block(a, c), block(a, d), block(id, b)};
    perms_ = std::move(next);
  }

  int level_ = 0;
  std::array<Permutation, 4> perms_;
};

inline LevelMatrices level_generator_matrices(int n) { return LevelMatrices(n); }

struct RelationCheck {
  std::string name;
  bool ok = false;
};

namespace detail {

inline bool is_identity_permutation(const Permutation& p) {
  for (std::size_t v = 0; v < p.size(); ++v)
    if (p[v] != v) return false;
  return true;
}

// Exact check of (B + C + D − I)² = 4I using integer column arithmetic.
inline bool klein_square_is_four(const LevelMatrices& m) {
  const auto& b = m.perm(Gen::b);
  const auto& c = m.perm(Gen::c);
  const auto& d = m.perm(Gen::d);
  auto column = [&](std::uint32_t v) {
    std::map<std::uint32_t, std::int64_t> col;
    col[b[v]] += 1;
    col[c[v]] += 1;
    col[d[v]] += 1;
    col[v] -= 1;
    return col;
  };
  for (std::uint32_t v = 0; v < m.dim(); ++v) {
    std::map<std::uint32_t, std::int64_t> sq;
    for (auto [u, coef] : column(v))
      for (auto [w, coef2] : column(u)) sq[w] += coef * coef2;
    for (auto [w, coef] : sq)
      if (coef != (w == v ? 4 : 0)) return false;
  }
  return true;
}

}  // namespace detail

/// The exact relation suite at one level: every generator matrix is a
/// permutation and an involution, the Klein four-group table on {b, c, d},
/// the relator (ad)⁴ and the identity (B + C + D − I)² = 4I.
inline std::vector<RelationCheck> relation_suite(const LevelMatrices& m) {
  std::vector<RelationCheck> out;
  const std::string suffix = " @ level " + std::to_string(m.level());
  for (Gen g : kGenerators) {
    const auto& p = m.perm(g);
    std::vector<bool> hit(p.size(), false);
    bool bijective = true;
    for (auto img : p) {
      if (img >= p.size() || hit[img]) bijective = false;
      else hit[img] = true;
    }
    out.push_back({std::string("permutation ") + to_char(g) + suffix, bijective});
  }
  auto word_is_identity = [&](const char* text) {
    return detail::is_identity_permutation(m.word(GroupWord::parse(text)));
  };
  for (const char* rel : {"aa", "bb", "cc", "dd", "bcd", "adadadad"})
    out.push_back({std::string(rel) + " = e" + suffix, word_is_identity(rel)});
  auto same = [&](const char* lhs, const char* rhs) {
    return m.word(GroupWord::parse(lhs)) == m.word(GroupWord::parse(rhs));
  };
  out.push_back({"bc = cb = d" + suffix, same("bc", "d") && same("cb", "d")});
  out.push_back({"bd = db = c" + suffix, same("bd", "c") && same("db", "c")});
  out.push_back({"cd = dc = b" + suffix, same("cd", "b") && same("dc", "b")});
  out.push_back({"(B+C+D-I)^2 = 4I" + suffix, detail::klein_square_is_four(m)});
  return out;
}

/// Dense real operator matrix, plus per-row truncation flags when it is a
/// compression to a finite ball.
struct OperatorMatrix {
  Eigen::MatrixXd entries;
  int level = -1;  // -1 when not a level matrix
  std::vector<bool> boundary;

  Eigen::Index dim() const noexcept { return entries.rows(); }

  bool symmetric(double rel_tol = 1e-12) const {
    const double scale = std::max(1.0, entries.cwiseAbs().maxCoeff());
    return (entries - entries.transpose()).cwiseAbs().maxCoeff() <= rel_tol * scale;
  }

  std::size_t boundary_rows() const {
    std::size_t count = 0;
    for (bool f : boundary) count += f ? 1 : 0;
    return count;
  }
};

inline void check_dense_level(int n) {
  if (n < 0) throw Error(ErrorKind::InvalidArgument, "level must be nonnegative");
  if (n > kMaxDenseLevel)
    throw Error(ErrorKind::LevelTooLarge,
                "dense assembly is limited to level " + std::to_string(kMaxDenseLevel) + ", got " + std::to_string(n));
}

/// Σ m(w)·U_n(w). Word permutations are composed exactly; the coefficients
/// enter only when the dense matrix is filled.
inline OperatorMatrix assemble_level(const AlgebraElement& m, const LevelMatrices& mats) {
  check_dense_level(mats.level());
  const auto dim = static_cast<Eigen::Index>(mats.dim());
  OperatorMatrix out{Eigen::MatrixXd::Zero(dim, dim), mats.level(), {}};
  for (const auto& t : m.support()) {
    const Permutation p = mats.word(t.word);
    for (Eigen::Index v = 0; v < dim; ++v) out.entries(p[static_cast<std::size_t>(v)], v) += t.coef;
  }
  return out;
}

inline OperatorMatrix assemble_level(const AlgebraElement& m, int n) {
  check_dense_level(n);
  return assemble_level(m, LevelMatrices(n));
}

/// Q_n(α, β) = −α·A_n + B_n + C_n + D_n − (β + 1)·I.
inline OperatorMatrix assemble_q_param(double alpha, double beta, int n) {
  return assemble_level(AlgebraElement::q_param(alpha, beta), n);
}

/// Compression of ρ_x(m) to functions on a finite orbital ball, with
/// (ρ_x(g)f)(y) = f(g⁻¹y). Row y is flagged when some g⁻¹y for g in the
/// support leaves the ball; unflagged rows agree exactly with ρ_x(m).
inline OperatorMatrix assemble_orbital(const AlgebraElement& m, const MarkedGraph& ball) {
  std::array<std::size_t, 4> label_of{};
  for (Gen g : m.letters()) {
    const auto l = ball.label_index(std::string(1, to_char(g)));
    if (!l) throw Error(ErrorKind::MissingLabel, std::string("ball has no '") + to_char(g) + "' label");
    label_of[static_cast<std::size_t>(g)] = *l;
  }
  const auto dim = static_cast<Eigen::Index>(ball.vertex_count());
  OperatorMatrix out{Eigen::MatrixXd::Zero(dim, dim), -1, std::vector<bool>(ball.vertex_count(), false)};
  for (const auto& t : m.support()) {
    for (std::size_t y = 0; y < ball.vertex_count(); ++y) {
      // g⁻¹ is the reversed word, so the leftmost letter of g acts first.
      std::size_t z = y;
      for (Gen g : t.word.letters()) {
        z = ball.target(z, label_of[static_cast<std::size_t>(g)]);
        if (z == MarkedGraph::npos) break;
      }
      if (z == MarkedGraph::npos) {
        out.boundary[y] = true;
        continue;
      }
      out.entries(static_cast<Eigen::Index>(y), static_cast<Eigen::Index>(z)) += t.coef;
    }
  }
  return out;
}

/// Groupoid representation at level n: diag(Y, Y) with Y the level-n Koopman matrix.
inline OperatorMatrix groupoid_block(const AlgebraElement& m, int n) {
  const OperatorMatrix y = assemble_level(m, n);
  const Eigen::Index d = y.dim();
  OperatorMatrix out{Eigen::MatrixXd::Zero(2 * d, 2 * d), n, {}};
  out.entries.topLeftCorner(d, d) = y.entries;
  out.entries.bottomRightCorner(d, d) = y.entries;
  return out;
}

struct SchurReport {
  double max_residual = 0.0;
  Param renormalized;
  bool ok = false;
};

/// Checks, at level n, the block identity
///
///   Q_n(α,β)·[[I, α(2A + βI)/(4 − β²)], [0, I]] = [[2A − βI, 0], [−αI, Q_{n−1}(F(α,β))]]
///
/// with A = A_{n−1}, entrywise within tol.
inline SchurReport schur_step_check(double alpha, double beta, int n, double tol) {
  if (near_beta_pole(beta)) throw Error(ErrorKind::PoleAtBeta, "Schur step is undefined at beta = +-2");
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "Schur step needs n >= 1");
  check_dense_level(n);
  const Param next = F({alpha, beta});
  const Eigen::MatrixXd q = assemble_q_param(alpha, beta, n).entries;
  const LevelMatrices lower(n - 1);
  const Eigen::MatrixXd a = lower.dense(Gen::a).cast<double>();
  const Eigen::Index h = a.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(h, h);

  Eigen::MatrixXd corrector = Eigen::MatrixXd::Identity(2 * h, 2 * h);
  corrector.topRightCorner(h, h) = alpha * (2.0 * a + beta * id) / (4.0 - beta * beta);

  Eigen::MatrixXd expected = Eigen::MatrixXd::Zero(2 * h, 2 * h);
  expected.topLeftCorner(h, h) = 2.0 * a - beta * id;
  expected.bottomLeftCorner(h, h) = -alpha * id;
  expected.bottomRightCorner(h, h) = assemble_q_param(next.alpha, next.beta, n - 1).entries;

  SchurReport out;
  out.renormalized = next;
  out.max_residual = (q * corrector - expected).cwiseAbs().maxCoeff();
  out.ok = out.max_residual <= tol;
  return out;
}

}  // namespace selfsim
