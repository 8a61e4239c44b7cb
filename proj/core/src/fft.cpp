#include "sforge/fft.hpp"

#include <cmath>
#include <numbers>

#include "sforge/errors.hpp"

namespace sforge {

Fft::Fft(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) throw ConfigError("Fft: size must be a power of two");
  bitrev_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b)
      if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (bits - 1 - b);
    bitrev_[i] = r;
  }
  twiddle_.resize(n / 2);
  for (std::size_t j = 0; j < n / 2; ++j) {
    const double ang = -2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
    twiddle_[j] = {std::cos(ang), std::sin(ang)};
  }
}

void Fft::transform(std::complex<double>* data, double sign) const {
  for (std::size_t i = 0; i < n_; ++i) {
    const std::size_t j = bitrev_[i];
    if (j > i) std::swap(data[i], data[j]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        std::complex<double> w = twiddle_[j * stride];
        if (sign > 0) w = std::conj(w);
        const std::complex<double> u = data[start + j];
        const std::complex<double> v = data[start + j + half] * w;
        data[start + j] = u + v;
        data[start + j + half] = u - v;
      }
    }
  }
}

void Fft::inverse(std::complex<double>* data) const {
  transform(data, +1.0);
  const double scale = 1.0 / static_cast<double>(n_);
  for (std::size_t i = 0; i < n_; ++i) data[i] *= scale;
}

std::vector<double> fft_wavenumbers(std::size_t n, double box_half_length) {
  std::vector<double> k(n);
  const double dk = std::numbers::pi / box_half_length;
  for (std::size_t j = 0; j < n; ++j) {
    const auto sj = static_cast<long long>(j);
    const long long half = static_cast<long long>(n) / 2;
    k[j] = dk * static_cast<double>(sj < half ? sj : sj - static_cast<long long>(n));
  }
  return k;
}

}  // namespace sforge
