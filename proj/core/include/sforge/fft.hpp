#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace sforge {

// In-place radix-2 FFT with precomputed bit-reversal and twiddle tables.
// Forward transform uses the e^{-ikx} sign convention and is unnormalized;
// inverse includes the 1/n factor.
class Fft {
public:
  explicit Fft(std::size_t n);

  void forward(std::complex<double>* data) const { transform(data, -1.0); }
  void inverse(std::complex<double>* data) const;
  std::size_t size() const { return n_; }

  static bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

private:
  void transform(std::complex<double>* data, double sign) const;

  std::size_t n_ = 0;
  std::vector<std::size_t> bitrev_;
  std::vector<std::complex<double>> twiddle_;  // e^{-2pi i j / n}, j < n/2
};

// Angular wavenumbers k_j = pi*j/L in FFT storage order for a periodic box
// [-L, L) sampled at n points.
std::vector<double> fft_wavenumbers(std::size_t n, double box_half_length);

}  // namespace sforge
