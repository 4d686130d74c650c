#include "axiflow/linearization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <random>
#include <stdexcept>

#include "axiflow/errors.hpp"
#include "axiflow/kernels.hpp"

namespace axiflow {

namespace {

kernels::PointwiseInputs pointwise(const Grid& grid, const HProfile& h0, const QuotientFields& q) {
  if (!(q.fit.h2_0() > 0.0) || !(q.fit.h2_pi() > 0.0)) {
    throw AxisDegeneracyError("linearization needs h''(0) > 0 and h''(pi) > 0", q.fit.h2_0(), q.fit.h2_pi());
  }
  return {h0.values(), q.s2, q.ds, q.r, grid.cos(), h0.d(), 1.0 / q.fit.h2_0(), 1.0 / q.fit.h2_pi()};
}

Coefficients coefficients_from(const Grid& grid, const HProfile& h0, const QuotientFields& q, Exec exec) {
  const std::size_t m = grid.size();
  Coefficients c{Field(m), Field(m), Field(m), Field(m), Field(m), Field(m)};
  kernels::frechet_coefficients(pointwise(grid, h0, q), {c.a1, c.a2, c.a3, c.a4, c.a5, c.a6}, exec);
  return c;
}

// Column-major matrix of a linear grid operator, built by applying it to
// unit vectors. With pinned set the pole columns stay zero.
template <class Op>
std::vector<double> operator_matrix(const Grid& grid, Op&& op, bool pinned) {
  const int m = grid.size();
  std::vector<double> out(static_cast<std::size_t>(m) * m, 0.0);
  Field e(m, 0.0);
  const int first = pinned ? 1 : 0;
  const int last = pinned ? m - 2 : m - 1;
  for (int k = first; k <= last; ++k) {
    e[k] = 1.0;
    const Field col = op(std::span<const double>(e));
    std::copy(col.begin(), col.end(), out.begin() + static_cast<std::ptrdiff_t>(k) * m);
    e[k] = 0.0;
  }
  return out;
}

Matrix to_matrix(const std::vector<double>& colmajor, int m) {
  return Eigen::Map<const Matrix>(colmajor.data(), m, m);
}

}  // namespace

Coefficients coefficients(const HProfile& h0, Exec exec) {
  const QuotientFields q = quotient_fields(h0.grid(), h0.values());
  return coefficients_from(h0.grid(), h0, q, exec);
}

Matrix assemble_A(const Grid& grid, std::span<const double> a1, Exec exec) {
  if (static_cast<int>(a1.size()) != grid.size()) throw std::invalid_argument("assemble_A: coefficient length mismatch");
  const int m = grid.size();
  const auto op = operator_matrix(
      grid,
      [&](std::span<const double> f) {
        Field out = diff2(grid, f);
        const Field t = quot_dtan_unpinned(grid, f);
        for (int j = 0; j < m; ++j) out[j] += t[j];
        return out;
      },
      false);
  std::vector<double> out(op.size());
  const kernels::RowScaledTerm terms[] = {{a1, op}};
  kernels::row_scaled_sum(terms, out, m, exec);
  return to_matrix(out, m);
}

Matrix assemble_A(const HProfile& h0, Exec exec) {
  const Coefficients c = coefficients(h0, exec);
  return assemble_A(h0.grid(), c.a1, exec);
}

namespace {

Matrix assemble_frechet_from(const Grid& grid, const Coefficients& c, Exec exec) {
  const int m = grid.size();
  const int n = grid.n();

  auto fields = [&](std::span<const double> f) { return quotient_fields(grid, f); };
  const auto r_op = operator_matrix(grid, [&](std::span<const double> f) { return fields(f).r; }, true);
  const auto ds_op = operator_matrix(grid, [&](std::span<const double> f) { return fields(f).ds; }, true);
  const auto s2_op = operator_matrix(grid, [&](std::span<const double> f) { return fields(f).s2; }, true);

  std::vector<double> id(static_cast<std::size_t>(m) * m, 0.0);
  for (int k = 1; k < n; ++k) id[static_cast<std::size_t>(k) * m + k] = 1.0;

  // h''(0) and h''(pi) are linear functionals of the fit nodes; every row
  // of the rank-one operator repeats the functional's weights.
  std::vector<double> e0(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> epi(static_cast<std::size_t>(m) * m, 0.0);
  const auto& w = grid.fit_weights()[0];
  for (int k = 0; k < Grid::kFitNodes; ++k) {
    const int kl = k + 1;
    const int kr = n - 1 - k;
    std::fill_n(e0.begin() + static_cast<std::ptrdiff_t>(kl) * m, m, w[k]);
    std::fill_n(epi.begin() + static_cast<std::ptrdiff_t>(kr) * m, m, w[k]);
  }

  // Pole rows vanish: Phi1 is pinned to zero there.
  auto interior = [&](const Field& a) {
    Field s = a;
    s[0] = 0.0;
    s[n] = 0.0;
    return s;
  };
  const Field a1 = interior(c.a1), a2 = interior(c.a2), a3 = interior(c.a3), a4 = interior(c.a4),
              a5 = interior(c.a5), a6 = interior(c.a6);
  const kernels::RowScaledTerm terms[] = {{a1, r_op}, {a2, ds_op}, {a3, s2_op},
                                          {a4, id},   {a5, e0},    {a6, epi}};
  std::vector<double> out(id.size());
  kernels::row_scaled_sum(terms, out, m, exec);
  return to_matrix(out, m);
}

}  // namespace

Matrix assemble_frechet(const HProfile& h0, Exec exec) {
  return assemble_frechet_from(h0.grid(), coefficients(h0, exec), exec);
}

LinearizationBundle linearize(const HProfile& h0, Exec exec) {
  LinearizationBundle b;
  b.coeffs = coefficients(h0, exec);
  b.frechet = assemble_frechet_from(h0.grid(), b.coeffs, exec);
  b.model = assemble_A(h0.grid(), b.coeffs.a1, exec);
  return b;
}

Matrix pinned_block(const Matrix& m) {
  if (m.rows() != m.cols() || m.rows() < 3) throw std::invalid_argument("pinned_block: need a square matrix");
  const Eigen::Index k = m.rows() - 2;
  return m.block(1, 1, k, k);
}

std::vector<std::complex<double>> default_lambdas(double max_real_part) {
  const double omega = 1.0 + std::max(max_real_part, 0.0);
  const std::complex<double> tilt = std::polar(1.0, std::numbers::pi / 4.0);
  return {omega + 1.0, omega + 10.0, omega + 1.0 * tilt, omega + 10.0 * tilt};
}

SpectrumReport spectrum(const Matrix& m, std::span<const std::complex<double>> lambdas,
                        const SpectrumOptions& opts) {
  if (m.rows() != m.cols()) throw std::invalid_argument("spectrum: matrix must be square");
  const Eigen::Index size = m.rows();
  SpectrumReport rep;
  rep.kernel_residual = (m * Eigen::VectorXd::Ones(size)).cwiseAbs().maxCoeff();

  if (opts.compute_eigenvalues) {
    Eigen::EigenSolver<Matrix> es(m, false);
    if (es.info() != Eigen::Success) {
      rep.converged = false;
    } else {
      const auto ev = es.eigenvalues();
      rep.eigenvalues.assign(ev.data(), ev.data() + ev.size());
      std::stable_sort(rep.eigenvalues.begin(), rep.eigenvalues.end(),
                       [](auto x, auto y) { return x.real() > y.real(); });
      rep.max_real_part = rep.eigenvalues.empty() ? 0.0 : rep.eigenvalues.front().real();
    }
  }

  std::vector<std::complex<double>> lams(lambdas.begin(), lambdas.end());
  if (lams.empty()) lams = default_lambdas(rep.max_real_part);

  // Probes are drawn up front so results do not depend on scheduling.
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  Eigen::MatrixXd probes(size, opts.probes);
  for (Eigen::Index p = 0; p < probes.cols(); ++p)
    for (Eigen::Index i = 0; i < size; ++i) probes(i, p) = uni(rng);

  const double dx = std::numbers::pi / static_cast<double>(std::max<Eigen::Index>(size - 1, 1));
  auto d2_norm = [&](const Eigen::VectorXcd& h) {
    double best = 0.0;
    auto at = [&](Eigen::Index i) { return h(i < 0 ? -i : (i >= size ? 2 * (size - 1) - i : i)); };
    for (Eigen::Index i = 0; i < size; ++i) best = std::max(best, std::abs(at(i + 1) - 2.0 * h(i) + at(i - 1)) / (dx * dx));
    return best;
  };

  rep.resolvent.resize(lams.size());
  const int nl = static_cast<int>(lams.size());
#pragma omp parallel for schedule(dynamic)
  for (int l = 0; l < nl; ++l) {
    const std::complex<double> lam = lams[l];
    Eigen::MatrixXcd shifted = -m.cast<std::complex<double>>();
    shifted.diagonal().array() += lam;
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    const Eigen::MatrixXcd sol = lu.solve(probes.cast<std::complex<double>>());
    double kappa = 0.0;
    for (Eigen::Index p = 0; p < sol.cols(); ++p) {
      const Eigen::VectorXcd h = sol.col(p);
      const double hn = h.cwiseAbs().maxCoeff();
      const double fn = probes.col(p).cwiseAbs().maxCoeff();
      kappa = std::max(kappa, (std::abs(lam) * hn + hn + d2_norm(h)) / fn);
    }
    rep.resolvent[l] = {lam, kappa};
  }
  if (!rep.resolvent.empty()) {
    const auto [lo, hi] = std::minmax_element(rep.resolvent.begin(), rep.resolvent.end(),
                                              [](const auto& x, const auto& y) { return x.kappa < y.kappa; });
    rep.kappa_bounded = std::isfinite(hi->kappa) && hi->kappa <= 10.0 * lo->kappa;
  }
  return rep;
}

Field range_weights(const Grid& grid) {
  static std::mutex mu;
  static std::map<int, Field> cache;
  std::lock_guard lock(mu);
  if (auto it = cache.find(grid.n()); it != cache.end()) return it->second;

  // Left null vector of the unweighted operator h'' + h'/tan. Since the
  // model operator is diag(A1) times it, y / A1 annihilates its range
  // exactly, and y approximates sin dtheta.
  const Field one(grid.size(), 1.0);
  const Matrix l = assemble_A(grid, one, Exec::serial);
  const Eigen::FullPivLU<Matrix> lu(l.transpose());
  const Matrix k = lu.kernel();
  if (k.cols() != 1) throw std::runtime_error("range_weights: cokernel is not one-dimensional");
  Eigen::VectorXd y = k.col(0);
  y *= 2.0 / y.sum();
  return cache.emplace(grid.n(), Field(y.data(), y.data() + y.size())).first->second;
}

double range_integral(const Grid& grid, std::span<const double> a1, std::span<const double> f) {
  const Field w = range_weights(grid);
  double acc = 0.0;
  for (int j = 0; j <= grid.n(); ++j) acc += w[j] * f[j] / a1[j];
  return acc;
}

double range_solve_residual(const Matrix& model, std::span<const double> f) {
  const Eigen::Map<const Eigen::VectorXd> rhs(f.data(), static_cast<Eigen::Index>(f.size()));
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(model);
  const Eigen::VectorXd h = cod.solve(rhs);
  const double fn = rhs.cwiseAbs().maxCoeff();
  return (model * h - rhs).cwiseAbs().maxCoeff() / (fn > 0.0 ? fn : 1.0);
}

}  // namespace axiflow
