// core/include/tandem/signal/fft.hpp

// Copyright 2026  Tandem Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef TANDEM_SIGNAL_FFT_HPP
#define TANDEM_SIGNAL_FFT_HPP

#include <complex>
#include <cstddef>
#include <vector>

namespace tandem::signal {

// Iterative radix-2 complex FFT with precomputed twiddles. Size must be a
// power of two.
class Fft {
 public:
  explicit Fft(std::size_t n);

  std::size_t size() const { return n_; }

  // In-place forward transform: X_k = sum_t x_t e^{-2 pi i k t / n}.
  void forward(std::complex<double>* data) const;

  // In-place inverse transform, including the 1/n factor.
  void inverse(std::complex<double>* data) const;

  static bool is_power_of_two(std::size_t n) {
    return n != 0 && (n & (n - 1)) == 0;
  }

 private:
  void transform(std::complex<double>* data, bool invert) const;

  std::size_t n_;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_fwd_;
  std::vector<std::complex<double>> twiddle_inv_;
};

}  // namespace tandem::signal

#endif  // TANDEM_SIGNAL_FFT_HPP
