// Copyright 2026 The monoloc Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace monoloc::fft {

// Real-to-complex DFT of length in.size(); out must hold in.size()/2 + 1 bins.
// X[k] = sum_n x[n] exp(-2 pi i k n / N), unnormalized.
void forward_real(std::span<const double> in, std::span<std::complex<double>> out);

// Inverse of forward_real, normalized so that inverse(forward(x)) == x.
void inverse_real(std::span<const std::complex<double>> in, std::span<double> out);

// Full linear convolution, length a.size() + b.size() - 1.
std::vector<double> convolve(std::span<const double> a, std::span<const double> b);

std::size_t next_fast_size(std::size_t n);

}  // namespace monoloc::fft
