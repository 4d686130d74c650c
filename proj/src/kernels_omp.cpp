#include <limits>
#include <vector>

#include <omp.h>

#include "axiflow/kernels.hpp"
#include "pointwise.hpp"

namespace axiflow::kernels::omp {

Phi1Result phi1(const PointwiseInputs& in, std::span<double> out) {
  const int n = static_cast<int>(in.h.size()) - 1;
  const int threads = omp_get_max_threads();
  // Per-thread minima, merged in thread order so ties resolve to the lowest
  // node exactly as in the serial loop.
  std::vector<Phi1Result> partial(threads, Phi1Result{std::numeric_limits<double>::infinity(), -1});
#pragma omp parallel num_threads(threads)
  {
    Phi1Result local{std::numeric_limits<double>::infinity(), -1};
#pragma omp for schedule(static)
    for (int j = 1; j < n; ++j) {
      const detail::Point p = detail::point(in, j);
      const double D = detail::denominator(in, p);
      if (D < local.min_denominator) {
        local.min_denominator = D;
        local.argmin = j;
      }
      out[j] = detail::phi1_at(in, p, D);
    }
    partial[omp_get_thread_num()] = local;
  }
  Phi1Result res{std::numeric_limits<double>::infinity(), -1};
  for (const auto& p : partial) {
    if (p.min_denominator < res.min_denominator ||
        (p.min_denominator == res.min_denominator && p.argmin >= 0 && p.argmin < res.argmin)) {
      res = p;
    }
  }
  out[0] = 0.0;
  out[n] = 0.0;
  return res;
}

void frechet_coefficients(const PointwiseInputs& in, const CoefficientOutputs& out) {
  const int m = static_cast<int>(in.h.size());
#pragma omp parallel for schedule(static)
  for (int j = 0; j < m; ++j) {
    double a[6];
    detail::coefficients_at(in, detail::point(in, j), a);
    out.a1[j] = a[0];
    out.a2[j] = a[1];
    out.a3[j] = a[2];
    out.a4[j] = a[3];
    out.a5[j] = a[4];
    out.a6[j] = a[5];
  }
}

void row_scaled_sum(std::span<const RowScaledTerm> terms, std::span<double> out, int n) {
#pragma omp parallel for schedule(static)
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto& t : terms) acc += t.scale[i] * t.op[static_cast<std::size_t>(k) * n + i];
      out[static_cast<std::size_t>(k) * n + i] = acc;
    }
  }
}

}  // namespace axiflow::kernels::omp
