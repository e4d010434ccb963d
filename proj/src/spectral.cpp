#include "fredo/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "fredo/errors.hpp"

namespace fredo {

namespace {

using cvec = std::vector<std::complex<double>>;

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

/// In-place iterative radix-2 transform. Unnormalized in both directions;
/// `inverse` only flips the twiddle sign.
void fft_pow2(cvec& a, bool inverse) {
    const std::size_t n = a.size();
    if (n < 2) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j |= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    // one directly-evaluated twiddle table shared by all stages
    const double sign = inverse ? 1.0 : -1.0;
    cvec twiddle(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k) {
        const double ang = sign * 2.0 * M_PI * static_cast<double>(k) / static_cast<double>(n);
        twiddle[k] = {std::cos(ang), std::sin(ang)};
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t step = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> w = twiddle[k * step];
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
            }
        }
    }
}

cvec fft_any(const cvec& x, bool inverse);

/// Chirp-z (Bluestein) transform for arbitrary length, via one power-of-two
/// circular convolution. Forward direction only.
cvec bluestein(const cvec& x) {
    const std::size_t n = x.size();
    const std::size_t m = next_pow2(2 * n - 1);

    // chirp_j = exp(-i*pi*j^2/n); exponent reduced mod 2n to keep the
    // trig argument small.
    cvec chirp(n);
    for (std::size_t j = 0; j < n; ++j) {
        const std::uint64_t e = (static_cast<std::uint64_t>(j) * j) % (2 * n);
        const double ang = -M_PI * static_cast<double>(e) / static_cast<double>(n);
        chirp[j] = {std::cos(ang), std::sin(ang)};
    }

    cvec a(m, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) a[j] = x[j] * chirp[j];

    cvec b(m, {0.0, 0.0});
    b[0] = std::conj(chirp[0]);
    for (std::size_t j = 1; j < n; ++j) {
        b[j] = std::conj(chirp[j]);
        b[m - j] = std::conj(chirp[j]);
    }

    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t j = 0; j < m; ++j) a[j] *= b[j];
    fft_pow2(a, true);

    cvec out(n);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < n; ++k) {
        out[k] = a[k] * scale * chirp[k];
    }
    return out;
}

cvec fft_any(const cvec& x, bool inverse) {
    if (inverse) {
        cvec conj_x(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) conj_x[i] = std::conj(x[i]);
        cvec y = fft_any(conj_x, false);
        for (auto& v : y) v = std::conj(v);
        return y;  // unnormalized inverse; caller divides by L
    }
    if (is_pow2(x.size())) {
        cvec a = x;
        fft_pow2(a, false);
        return a;
    }
    return bluestein(x);
}

/// Number of real-part slots in the packed layout (k = 0..n_re-1).
std::size_t re_count(std::size_t len) { return len / 2 + 1; }

} // namespace

std::vector<std::complex<double>> dft(std::span<const double> x) {
    if (x.empty()) {
        throw EmptyInput("dft of empty vector");
    }
    cvec in(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) in[i] = {x[i], 0.0};
    return fft_any(in, false);
}

SpectralVector dft_extract(std::span<const double> x) {
    if (x.empty()) {
        throw EmptyInput("dft_extract of empty vector");
    }
    if (x.size() < 2) {
        throw TooShort("dft_extract needs at least 2 samples");
    }
    const std::size_t len = x.size();
    const cvec z = dft(x);

    SpectralVector s;
    s.parity = (len % 2 == 0) ? Parity::even : Parity::odd;
    s.packed.resize(len);
    const std::size_t n_re = re_count(len);
    for (std::size_t k = 0; k < n_re; ++k) {
        s.packed[k] = z[k].real();
    }
    for (std::size_t k = 1; k + n_re - 1 < len; ++k) {
        s.packed[n_re - 1 + k] = z[k].imag();
    }
    return s;
}

std::vector<double> insert_idft(const SpectralVector& s) {
    const std::size_t len = s.size();
    if (len < 2) {
        throw TooShort("SpectralVector must pack at least 2 values");
    }
    const std::size_t n_re = re_count(len);

    cvec z(len, {0.0, 0.0});
    z[0] = {s.packed[0], 0.0};
    for (std::size_t k = 1; k < n_re; ++k) {
        // Nyquist bin of an even-length signal has no imaginary slot.
        const bool has_im = (k + n_re - 1 < len);
        const double im = has_im ? s.packed[n_re - 1 + k] : 0.0;
        z[k] = {s.packed[k], im};
        z[len - k] = std::conj(z[k]);
    }

    cvec y = fft_any(z, true);
    std::vector<double> out(len);
    const double scale = 1.0 / static_cast<double>(len);
    for (std::size_t j = 0; j < len; ++j) {
        out[j] = y[j].real() * scale;
    }
    return out;
}

std::vector<double> insert_idft_adjoint(std::span<const double> grad) {
    if (grad.size() < 2) {
        throw TooShort("insert_idft_adjoint needs at least 2 samples");
    }
    const std::size_t len = grad.size();
    const std::size_t n_re = re_count(len);

    // The time-domain output is y = (1/L) * [z_0 + (+-1)^j z_{L/2} +
    // 2 * sum_k (Re z_k cos - Im z_k sin)], so the adjoint is the forward
    // packing with weight 1/L on the self-conjugate bins and 2/L elsewhere.
    SpectralVector packed = dft_extract(grad);
    std::vector<double> out(len);
    const double inv = 1.0 / static_cast<double>(len);
    for (std::size_t i = 0; i < len; ++i) {
        const bool self_conjugate =
            (i == 0) || (len % 2 == 0 && i == len / 2);
        out[i] = packed.packed[i] * (self_conjugate ? inv : 2.0 * inv);
    }
    return out;
}

std::size_t peak_bin(std::span<const double> amplitudes) {
    if (amplitudes.empty()) {
        throw EmptyInput("peak_bin of empty vector");
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < amplitudes.size(); ++i) {
        if (amplitudes[i] > amplitudes[best]) best = i;  // ties keep smaller index
    }
    return best;
}

std::size_t estimate_period(std::span<const double> x, std::size_t max_period) {
    if (max_period < 1) {
        throw ConfigError("max_period must be >= 1");
    }
    if (x.size() < 2 * max_period || x.size() < 2) {
        throw TooShort("estimate_period needs at least 2*max_period samples");
    }
    const std::size_t len = x.size();
    const cvec z = dft(x);

    // amplitude spectrum over k = 1..floor(L/2)
    std::vector<double> amps(len / 2);
    for (std::size_t k = 1; k <= len / 2; ++k) {
        amps[k - 1] = std::abs(z[k]);
    }

    const std::size_t k_star = peak_bin(amps) + 1;
    const double peak = amps[k_star - 1];

    std::vector<double> sorted = amps;
    std::sort(sorted.begin(), sorted.end());
    const std::size_t mid = sorted.size() / 2;
    const double median = (sorted.size() % 2 == 1)
                              ? sorted[mid]
                              : 0.5 * (sorted[mid - 1] + sorted[mid]);

    // No dominant bin: flat (noise-like) or empty spectrum beyond DC.
    if (peak <= 0.0 || peak < 3.0 * median) {
        return 1;
    }

    const double ratio = static_cast<double>(len) / static_cast<double>(k_star);
    auto period = static_cast<std::size_t>(std::llround(ratio));
    period = std::clamp<std::size_t>(period, 2, max_period);
    return period;
}

} // namespace fredo
