#pragma once

/// Radix-2 FFT, Bluestein DFT for other lengths, and the zero-padded
/// convolution used to run MA filters over a finite sample.

#include <bit>
#include <complex>
#include <concepts>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "nonfrac/error.hpp"

namespace nonfrac {

enum class Direction { forward, inverse };

using ComplexBuffer = std::vector<std::complex<double>>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && std::has_single_bit(n); }

inline std::size_t next_power_of_two(std::size_t n) { return n <= 1 ? 1 : std::bit_ceil(n); }

/// In-place iterative Cooley-Tukey transform.  Forward uses e^{-2 pi i k n / N};
/// inverse uses the conjugate kernel and divides by N.
template <std::floating_point Real>
void fft_inplace(std::span<std::complex<Real>> data, Direction dir) {
    const std::size_t n = data.size();
    if (!is_power_of_two(n)) {
        throw LengthError("fft: length " + std::to_string(n) + " is not a power of two");
    }
    if (n == 1) return;

    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }

    const Real sign = dir == Direction::forward ? Real(-1) : Real(1);
    std::vector<std::complex<Real>> twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const Real angle = sign * Real(2) * std::numbers::pi_v<Real> * static_cast<Real>(k) /
                           static_cast<Real>(n);
        twiddle[k] = std::polar(Real(1), angle);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n / len;
        for (std::size_t start = 0; start < n; start += len) {
            for (std::size_t k = 0; k < half; ++k) {
                const auto w = twiddle[k * stride];
                const auto u = data[start + k];
                const auto v = data[start + k + half] * w;
                data[start + k] = u + v;
                data[start + k + half] = u - v;
            }
        }
    }

    if (dir == Direction::inverse) {
        const Real scale = Real(1) / static_cast<Real>(n);
        for (auto& v : data) v *= scale;
    }
}

inline ComplexBuffer fft(ComplexBuffer buf, Direction dir) {
    fft_inplace<double>(buf, dir);
    return buf;
}

/// DFT of any length.  Powers of two go straight to the radix-2 kernel; other
/// lengths use Bluestein's chirp-z identity on a padded radix-2 convolution.
inline ComplexBuffer dft(std::span<const std::complex<double>> x, Direction dir) {
    const std::size_t n = x.size();
    if (n == 0) throw LengthError("dft: empty input");
    if (is_power_of_two(n)) return fft(ComplexBuffer(x.begin(), x.end()), dir);

    const double sign = dir == Direction::forward ? -1.0 : 1.0;
    // chirp_k = exp(sign * i * pi * k^2 / n), with k^2 reduced mod 2n
    ComplexBuffer chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto k2 = static_cast<unsigned long long>(k) * k % (2ULL * n);
        chirp[k] = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(k2) /
                                       static_cast<double>(n));
    }

    const std::size_t m = next_power_of_two(2 * n - 1);
    ComplexBuffer a(m), b(m);
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    b[0] = std::conj(chirp[0]);
    for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

    fft_inplace<double>(a, Direction::forward);
    fft_inplace<double>(b, Direction::forward);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_inplace<double>(a, Direction::inverse);

    ComplexBuffer out(n);
    const double scale = dir == Direction::inverse ? 1.0 / static_cast<double>(n) : 1.0;
    for (std::size_t k = 0; k < n; ++k) out[k] = a[k] * chirp[k] * scale;
    return out;
}

/// Causal filter applied through a zero-padded FFT product.  The weights'
/// transform is computed once, so the same filter can be run over many
/// innovation sequences of the same length.
class PrefixConvolver {
public:
    explicit PrefixConvolver(std::span<const double> weights)
        : length_(weights.size()),
          padded_(weights.empty() ? 1 : next_power_of_two(2 * weights.size() - 1)) {
        if (length_ == 0) throw LengthError("PrefixConvolver: empty weights");
        transformed_.assign(padded_, {0.0, 0.0});
        for (std::size_t i = 0; i < length_; ++i) transformed_[i] = weights[i];
        fft_inplace<double>(transformed_, Direction::forward);
    }

    std::size_t length() const { return length_; }
    std::size_t padded_length() const { return padded_; }

    /// out[t] = sum_{j <= t} weights[j] x[t - j] for t < length().
    std::vector<double> apply(std::span<const double> x) const {
        if (x.size() != length_) {
            throw LengthError("PrefixConvolver: input length " + std::to_string(x.size()) +
                              " != filter length " + std::to_string(length_));
        }
        ComplexBuffer buf(padded_, {0.0, 0.0});
        for (std::size_t i = 0; i < length_; ++i) buf[i] = x[i];
        fft_inplace<double>(buf, Direction::forward);
        for (std::size_t k = 0; k < padded_; ++k) buf[k] *= transformed_[k];
        fft_inplace<double>(buf, Direction::inverse);
        std::vector<double> out(length_);
        for (std::size_t i = 0; i < length_; ++i) out[i] = buf[i].real();
        return out;
    }

private:
    std::size_t length_;
    std::size_t padded_;
    ComplexBuffer transformed_;
};

/// First T entries of the linear convolution of x and y (both length T),
/// padded to the next power of two >= 2T - 1.
inline std::vector<double> circular_convolve(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw LengthError("circular_convolve: inputs differ in length");
    }
    return PrefixConvolver(y).apply(x);
}

}  // namespace nonfrac
