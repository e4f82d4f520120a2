#pragma once

#include <cmath>
#include <vector>

#include "cantor/norms.hpp"
#include "cantor/scalar.hpp"

namespace cantor {

/// Realification of a complex rational matrix into the [[A,-B],[B,A]] block
/// form.
inline MatX<Rat> realify_mat(const MatX<CRat>& m) {
  const int d = static_cast<int>(m.rows());
  MatX<Rat> out(2 * d, 2 * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      out(i, j) = m(i, j).real();
      out(i, d + j) = -m(i, j).imag();
      out(d + i, j) = m(i, j).imag();
      out(d + i, d + j) = m(i, j).real();
    }
  return out;
}

/// Rational approximation of sqrt(v) (two Newton steps from the double seed,
/// denominator clipped); only conditioning depends on it, never soundness.
inline Rat approx_sqrt(const Rat& v) {
  double seed = std::sqrt(v.to_double());
  Rat r = Ball::rat_of_double(seed);
  for (int it = 0; it < 2; ++it) r = (r + v / r) / Rat(2);
  // clip denominator growth
  mpz_class scaled = (r.num() * mpz_class(1) << 48) / r.den();
  return Rat(scaled, mpz_class(1) << 48);
}

/// Traceless rational basis of sl(d,R) in matrix form, or of sl(d,C) as
/// realified 2d x 2d matrices (real dimension 2(d^2-1)).
inline std::vector<MatX<Rat>> sl_basis(int d, bool complex_field) {
  std::vector<MatX<Rat>> out;
  if (!complex_field) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        MatX<Rat> e = MatX<Rat>::Constant(d, d, Rat(0));
        e(i, j) = Rat(1);
        out.push_back(e);
      }
    for (int k = 0; k + 1 < d; ++k) {
      MatX<Rat> e = MatX<Rat>::Constant(d, d, Rat(0));
      e(k, k) = Rat(1);
      e(k + 1, k + 1) = Rat(-1);
      out.push_back(e);
    }
  } else {
    auto push_c = [&](int i, int j, bool imag_unit) {
      MatX<CRat> e = MatX<CRat>::Constant(d, d, CRat(Rat(0), Rat(0)));
      e(i, j) = imag_unit ? CRat(Rat(0), Rat(1)) : CRat(Rat(1), Rat(0));
      out.push_back(realify_mat(e));
    };
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) {
        if (i == j) continue;
        push_c(i, j, false);
        push_c(i, j, true);
      }
    for (int k = 0; k + 1 < d; ++k) {
      MatX<CRat> e = MatX<CRat>::Constant(d, d, CRat(Rat(0), Rat(0)));
      e(k, k) = CRat(Rat(1), Rat(0));
      e(k + 1, k + 1) = CRat(Rat(-1), Rat(0));
      out.push_back(realify_mat(e));
      MatX<CRat> ei = MatX<CRat>::Constant(d, d, CRat(Rat(0), Rat(0)));
      ei(k, k) = CRat(Rat(0), Rat(1));
      ei(k + 1, k + 1) = CRat(Rat(0), Rat(-1));
      out.push_back(realify_mat(ei));
    }
  }
  return out;
}

inline Rat frob_inner(const MatX<Rat>& a, const MatX<Rat>& b) {
  Rat s(0);
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) s += a(i, j) * b(i, j);
  return s;
}

/// Gram-Schmidt over the Frobenius inner product with rational renormalization:
/// returns a basis whose exact Gram matrix is within eps_gram of Id in the
/// max-row-sum norm (eps_gram reported exactly).
inline std::vector<MatX<Rat>> orthonormalize(std::vector<MatX<Rat>> basis, Rat* eps_gram) {
  const int n = static_cast<int>(basis.size());
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      Rat proj = frob_inner(basis[k], basis[j]) / frob_inner(basis[j], basis[j]);
      basis[k] -= proj * basis[j];
    }
  }
  for (int k = 0; k < n; ++k) basis[k] /= approx_sqrt(frob_inner(basis[k], basis[k]));
  // exact bound on ||G - I||_inf
  Rat eps(0);
  for (int i = 0; i < n; ++i) {
    Rat row(0);
    for (int j = 0; j < n; ++j) {
      Rat g = frob_inner(basis[i], basis[j]);
      if (i == j) g -= Rat(1);
      row += abs(g);
    }
    if (eps < row) eps = row;
  }
  *eps_gram = eps;
  return basis;
}

/// Regular-simplex vertex directions in R^n (floats, then rationalized):
/// n+1 unit vectors with pairwise inner product -1/n.
inline std::vector<VecX<Rat>> simplex_directions(int n) {
  MatX<double> v = MatX<double>::Zero(n + 1, n);
  for (int i = 0; i < n; ++i) {
    double norm_sq = 0;
    for (int j = 0; j < i; ++j) norm_sq += v(i, j) * v(i, j);
    v(i, i) = std::sqrt(1.0 - norm_sq);
    for (int k = i + 1; k <= n; ++k) {
      double dot = 0;
      for (int j = 0; j < i; ++j) dot += v(i, j) * v(k, j);
      v(k, i) = (-1.0 / n - dot) / v(i, i);
    }
  }
  std::vector<VecX<Rat>> out;
  for (int i = 0; i <= n; ++i) {
    VecX<Rat> w(n);
    for (int j = 0; j < n; ++j) {
      mpz_class scaled(static_cast<long>(std::floor(v(i, j) * std::ldexp(1.0, 40))));
      w(j) = Rat(scaled, mpz_class(1) << 40);
    }
    out.push_back(w);
  }
  return out;
}

/// Exact positive-spanning certificate in coordinates with Gram metric G:
/// verifies B_beta (G-metric) ⊆ conv{v_i} via the n+1 facet hyperplanes of the
/// direction simplex; returns a certified lower bound on the spanning margin
/// (0 on failure): for every x, min_i <v_i, x>_G <= -beta |x|_G.
inline Rat spanning_margin_facets(const std::vector<VecX<Rat>>& v, const MatX<Rat>& gram) {
  const int n = static_cast<int>(gram.rows());
  if (static_cast<int>(v.size()) != n + 1) throw std::invalid_argument("needs n+1 directions");
  Rat beta_sq_min(-1);
  bool first = true;
  for (int skip = 0; skip <= n; ++skip) {
    std::vector<int> idx;
    for (int i = 0; i <= n; ++i)
      if (i != skip) idx.push_back(i);
    // normal: <n, v_j - v_0'>_G = 0 for the facet's tangents; solve the
    // (n-1) x n system and take the 1-D null direction.
    MatX<Rat> sys(n - 1, n);
    for (int rix = 0; rix + 1 < n; ++rix) {
      VecX<Rat> diff = v[idx[rix + 1]] - v[idx[0]];
      VecX<Rat> row = gram * diff;
      for (int c = 0; c < n; ++c) sys(rix, c) = row(c);
    }
    // null space by Gauss-Jordan
    MatX<Rat> m = sys;
    std::vector<int> pivots;
    std::vector<bool> used(n, false);
    int row = 0;
    for (int c = 0; c < n && row < n - 1; ++c) {
      int pr = -1;
      for (int r = row; r < n - 1; ++r)
        if (m(r, c).sign() != 0) { pr = r; break; }
      if (pr < 0) continue;
      m.row(pr).swap(m.row(row));
      for (int r = 0; r < n - 1; ++r) {
        if (r == row) continue;
        Rat f = m(r, c) / m(row, c);
        m.row(r) -= f * m.row(row);
      }
      pivots.push_back(c);
      used[c] = true;
      ++row;
    }
    if (row < n - 1) return Rat(0);  // degenerate facet: refuse to certify
    int free_col = -1;
    for (int c = 0; c < n; ++c)
      if (!used[c]) { free_col = c; break; }
    VecX<Rat> normal = VecX<Rat>::Constant(n, Rat(0));
    normal(free_col) = Rat(1);
    for (int r = 0; r < row; ++r) normal(pivots[r]) = -m(r, free_col) / m(r, pivots[r]);
    Rat b = normal.dot(gram * v[idx[0]]);
    if (b.sign() < 0) { normal = -normal; b = -b; }
    if (b.sign() == 0) return Rat(0);  // facet through the origin: no interior
    // opposite vertex strictly on the origin side
    Rat opp = normal.dot(gram * v[skip]);
    if (!(opp < b)) return Rat(0);
    Rat n2 = normal.dot(gram * normal);
    Rat beta_sq = b * b / n2;  // squared G-distance from origin to the facet
    if (first || beta_sq < beta_sq_min) { beta_sq_min = beta_sq; first = false; }
  }
  if (beta_sq_min.sign() <= 0) return Rat(0);
  // rational lower bound on sqrt
  Rat lo = Ball::rat_of_double(std::sqrt(beta_sq_min.to_double()) * (1 - 1e-9));
  while (lo * lo > beta_sq_min) lo = lo * Rat(999999, 1000000);
  return lo;
}

/// Sphere-grid verification of the spanning margin (chart dims 2 and 3): the
/// map x -> min_i <w_i, x> is 1-Lipschitz for unit directions, so grid value
/// + mesh bounds the sphere maximum. Returns a certified margin (>0 means
/// certified), ball arithmetic throughout.
inline Ball spanning_margin_grid(const std::vector<VecX<Rat>>& v, const MatX<Rat>& gram,
                                 Rat eps_gram, int divisions = 160) {
  const int n = static_cast<int>(gram.rows());
  if (n != 2 && n != 3) throw std::invalid_argument("spanning_margin_grid: chart dim 2 or 3");
  std::vector<VecX<Ball>> gv;  // G v_i, precomputed
  double wmax = 0;
  for (const auto& vi : v) {
    VecX<Rat> gvi = gram * vi;
    gv.push_back(to_ball_vec(gvi));
    wmax = std::max(wmax, sqrt(ball_of(vi.dot(gvi))).hi());
  }
  double worst = -1e300;
  double mesh = 0;
  if (n == 2) {
    mesh = 2 * M_PI / divisions;
    for (int k = 0; k < divisions; ++k) {
      double th = (2 * M_PI * k) / divisions;
      VecX<Ball> x(2);
      x(0) = Ball(std::cos(th), 1e-12);
      x(1) = Ball(std::sin(th), 1e-12);
      double m = 1e300;
      for (const auto& g : gv) m = std::min(m, g.dot(x).hi());
      worst = std::max(worst, m);
    }
  } else {
    int kd = divisions / 2;
    mesh = 2.0 * (M_PI / kd);  // lat-long chord bound
    for (int a = 0; a <= kd; ++a) {
      double th = M_PI * a / kd;
      for (int b = 0; b < divisions; ++b) {
        double ph = 2 * M_PI * b / divisions;
        VecX<Ball> x(3);
        x(0) = Ball(std::sin(th) * std::cos(ph), 1e-12);
        x(1) = Ball(std::sin(th) * std::sin(ph), 1e-12);
        x(2) = Ball(std::cos(th), 1e-12);
        double m = 1e300;
        for (const auto& g : gv) m = std::min(m, g.dot(x).hi());
        worst = std::max(worst, m);
      }
    }
  }
  // unit-G sphere differs from the euclidean one by at most eps_gram in norm
  double slack = mesh * wmax + 2 * eps_gram.to_double() * wmax + 1e-9;
  return Ball(-(worst + slack), 0.0);  // certified margin (may be <= 0)
}

/// Cayley transform (I - T/2)^{-1} (I + T/2); exactly unimodular for traceless
/// 2x2 blocks (real d=2 and realified complex d=2); for other d a diagonal
/// rescale restores det = 1 exactly.
inline MatX<Rat> cayley_sl(const MatX<Rat>& t) {
  const int n = static_cast<int>(t.rows());
  MatX<Rat> id = identity_mat<Rat>(n);
  MatX<Rat> m = mat_inverse(MatX<Rat>(id - t / Rat(2))) * MatX<Rat>(id + t / Rat(2));
  Rat det = mat_det(m);
  if (det != Rat(1)) {
    MatX<Rat> fix = identity_mat<Rat>(n);
    fix(0, 0) = Rat(1) / det;
    m = fix * m;
  }
  return m;
}

struct SlCover {
  int chart_dim = 0;                     // n = dim of the log chart
  bool complex_field = false;
  int matrix_size = 0;                   // matrices are matrix_size^2
  Rat r{0}, rho{0};                      // chart ball radius, step length
  std::vector<MatX<Rat>> basis;          // near-orthonormal chart basis
  MatX<Rat> gram;                        // its exact Gram matrix
  Rat eps_gram{0};
  std::vector<VecX<Rat>> dirs;           // w_i in chart coordinates
  std::vector<MatX<Rat>> dir_mats;       // w_i as matrices
  std::vector<MatX<Rat>> M, Minv;        // rational SL matrices, det = 1
  Rat beta{0};                           // exact facet-certified spanning margin
  Ball beta_grid{0.0};                   // sphere-grid margin (chart dim <= 3)
  Ball nu_max{0.0};                      // max ||log Minv_i||_F
  Ball dir_err{0.0};                     // max ||log Minv_i - rho w_i||_F
  Ball cover_margin{0.0};                // certified c for the unfattened ball
  bool passed = false;
};

/// Chart-covering margin for the radius-(r+fat) ball: every chart point x with
/// ||x|| <= r+fat admits i with ||log(Minv_i exp(x))|| <= r - c; returns the
/// certified c (ball; positive lower bound means certified).
inline Ball chart_cover_margin(const SlCover& sc, const Ball& fat) {
  Ball r_eff = ball_of(sc.r) + fat;
  Ball beta_eff = ball_of(sc.rho) * ball_of(sc.beta) - sc.dir_err;  // min useful inner product
  Ball a = beta_eff;  // -<nu_i, x> >= a |x| for the best i
  // linear part: max over |x| = m in [0, r_eff] of sqrt(m^2 - 2 a m + nu_max^2)
  Ball inner = r_eff * r_eff - Ball(2.0) * a * r_eff + sc.nu_max * sc.nu_max;
  double at_r_hi = inner.hi() > 0 ? std::sqrt(inner.hi()) * (1 + 1e-13) : 0.0;
  Ball r_lin = Ball(std::max(sc.nu_max.hi(), at_r_hi), 0.0);
  // commutator: E1 = nu r e^{nu+r}; q = e^{nu+r} - 1 + E1; Ecomm = E1/(1-q)
  double nu = sc.nu_max.hi(), rr = r_eff.hi();
  double e1 = nu * rr * std::exp(nu + rr);
  double q = std::expm1(nu + rr) + e1;
  if (!(q < 1)) return Ball(-1.0, 0.0);
  double ecomm = e1 / (1 - q) * (1 + 1e-12);
  return ball_of(sc.r) - r_lin - Ball(ecomm, 0.0);
}

/// Builds the chart ball U = exp(B_r) together with k = 1 + chart_dim exact
/// rational SL matrices whose inverses step by ~rho along the simplex
/// directions, and certifies the covering margin.
inline SlCover sl_cover_construct(int d, bool complex_field, const Rat& r, const Rat& rho,
                                  bool run_grid = true) {
  if (!(Rat(0) < rho && rho < r))
    throw std::invalid_argument("sl_cover_construct: need 0 < rho < r");
  SlCover sc;
  sc.complex_field = complex_field;
  sc.matrix_size = complex_field ? 2 * d : d;
  sc.r = r;
  sc.rho = rho;
  sc.basis = sl_basis(d, complex_field);
  sc.chart_dim = static_cast<int>(sc.basis.size());
  sc.basis = orthonormalize(std::move(sc.basis), &sc.eps_gram);
  const int n = sc.chart_dim;
  sc.gram = MatX<Rat>(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) sc.gram(i, j) = frob_inner(sc.basis[i], sc.basis[j]);
  if (n == 0) {
    // SL(1): trivial group, the identity alone covers
    sc.beta = Rat(1);
    sc.nu_max = Ball(0.0);
    sc.cover_margin = ball_of(r);
    sc.M.push_back(identity_mat<Rat>(sc.matrix_size));
    sc.Minv.push_back(identity_mat<Rat>(sc.matrix_size));
    sc.passed = true;
    return sc;
  }
  sc.dirs = simplex_directions(n);
  for (const auto& v : sc.dirs) {
    MatX<Rat> w = MatX<Rat>::Constant(sc.matrix_size, sc.matrix_size, Rat(0));
    for (int k = 0; k < n; ++k) w += v(k) * sc.basis[k];
    sc.dir_mats.push_back(w);
  }
  sc.beta = spanning_margin_facets(sc.dirs, sc.gram);
  if (run_grid && (n == 2 || n == 3)) sc.beta_grid = spanning_margin_grid(sc.dirs, sc.gram, sc.eps_gram);
  // Cayley matrices: Minv_i ~ exp(rho w_i)
  double numax = 0, direrr = 0;
  for (const auto& w : sc.dir_mats) {
    MatX<Rat> minv = cayley_sl(MatX<Rat>(w * rho));
    sc.Minv.push_back(minv);
    sc.M.push_back(mat_inverse(minv));
    MatX<Ball> nu = matrix_log(to_ball_mat(minv));
    numax = std::max(numax, frobenius(nu).hi());
    MatX<Ball> diff = MatX<Ball>(nu - to_ball_mat(MatX<Rat>(w * rho)));
    direrr = std::max(direrr, frobenius(diff).hi());
  }
  sc.nu_max = Ball(numax, 0.0);
  sc.dir_err = Ball(direrr, 0.0);
  sc.cover_margin = chart_cover_margin(sc, Ball(0.0));
  sc.passed = sc.beta.sign() > 0 && sc.cover_margin.lo() > 0;
  return sc;
}

/// ||log u||_F as a ball; throws when u is too far from Id for the series.
inline Ball sl_chart_norm(const MatX<Ball>& u) { return frobenius(matrix_log(u)); }

/// Picks the step index used by certified orbits: the i minimizing
/// <nu_i, x>, evaluated on the ball chart point.
inline int chart_step_index(const SlCover& sc, const MatX<Ball>& chart_point) {
  int best = 0;
  double best_val = 1e300;
  for (size_t i = 0; i < sc.dir_mats.size(); ++i) {
    MatX<Ball> w = to_ball_mat(sc.dir_mats[i]);
    Ball acc(0.0);
    for (Eigen::Index a = 0; a < w.rows(); ++a)
      for (Eigen::Index b = 0; b < w.cols(); ++b) acc += w(a, b) * chart_point(a, b);
    if (acc.mid() < best_val) { best_val = acc.mid(); best = static_cast<int>(i); }
  }
  return best;
}

}  // namespace cantor
