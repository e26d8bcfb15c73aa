// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#include "monoloc/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "monoloc/errors.hpp"

namespace monoloc::fft {
namespace {

// FFTW planning is not thread-safe; execution through the new-array interface
// is, provided the arrays share the planning alignment (fftw_malloc).
struct PlanCache {
  std::mutex mutex;
  std::map<std::pair<std::size_t, bool>, fftw_plan> plans;

  fftw_plan get(std::size_t n, bool inverse) {
    std::lock_guard lock(mutex);
    auto key = std::make_pair(n, inverse);
    if (auto it = plans.find(key); it != plans.end()) return it->second;
    auto* real = static_cast<double*>(fftw_malloc(sizeof(double) * n));
    auto* cplx = static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * (n / 2 + 1)));
    const int len = static_cast<int>(n);
    fftw_plan plan = inverse ? fftw_plan_dft_c2r_1d(len, cplx, real, FFTW_ESTIMATE)
                             : fftw_plan_dft_r2c_1d(len, real, cplx, FFTW_ESTIMATE);
    fftw_free(real);
    fftw_free(cplx);
    plans.emplace(key, plan);
    return plan;
  }

  ~PlanCache() {
    for (auto& [key, plan] : plans) fftw_destroy_plan(plan);
  }
};

PlanCache& cache() {
  static PlanCache instance;
  return instance;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> aligned(std::size_t n) {
  return std::unique_ptr<T[], FftwFree>(static_cast<T*>(fftw_malloc(sizeof(T) * std::max<std::size_t>(n, 1))));
}

}  // namespace

void forward_real(std::span<const double> in, std::span<std::complex<double>> out) {
  const std::size_t n = in.size();
  if (n == 0 || out.size() != n / 2 + 1) throw InvalidInput("fft: bad buffer sizes");
  auto real = aligned<double>(n);
  auto cplx = aligned<fftw_complex>(n / 2 + 1);
  std::copy(in.begin(), in.end(), real.get());
  fftw_execute_dft_r2c(cache().get(n, false), real.get(), cplx.get());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = {cplx[k][0], cplx[k][1]};
}

void inverse_real(std::span<const std::complex<double>> in, std::span<double> out) {
  const std::size_t n = out.size();
  if (n == 0 || in.size() != n / 2 + 1) throw InvalidInput("fft: bad buffer sizes");
  auto real = aligned<double>(n);
  auto cplx = aligned<fftw_complex>(n / 2 + 1);
  for (std::size_t k = 0; k < in.size(); ++k) {
    cplx[k][0] = in[k].real();
    cplx[k][1] = in[k].imag();
  }
  fftw_execute_dft_c2r(cache().get(n, true), cplx.get(), real.get());
  const double scale = 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = real[i] * scale;
}

std::size_t next_fast_size(std::size_t n) {
  std::size_t best = 1;
  while (best < n) best <<= 1;
  // 3 * 2^k and 5 * 2^k are as fast as powers of two in FFTW and often smaller.
  for (std::size_t base : {3u, 5u}) {
    std::size_t candidate = base;
    while (candidate < n) candidate <<= 1;
    best = std::min(best, candidate);
  }
  return best;
}

std::vector<double> convolve(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) return {};
  const std::size_t out_len = a.size() + b.size() - 1;
  std::vector<double> out(out_len, 0.0);
  if (std::min(a.size(), b.size()) <= 64) {
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += a[i] * b[j];
    }
    return out;
  }
  const std::size_t n = next_fast_size(out_len);
  std::vector<double> pa(n, 0.0), pb(n, 0.0);
  std::copy(a.begin(), a.end(), pa.begin());
  std::copy(b.begin(), b.end(), pb.begin());
  std::vector<std::complex<double>> fa(n / 2 + 1), fb(n / 2 + 1);
  forward_real(pa, fa);
  forward_real(pb, fb);
  for (std::size_t k = 0; k < fa.size(); ++k) fa[k] *= fb[k];
  std::vector<double> full(n);
  inverse_real(fa, full);
  std::copy(full.begin(), full.begin() + static_cast<std::ptrdiff_t>(out_len), out.begin());
  return out;
}

}  // namespace monoloc::fft
