#ifndef FREDO_SPECTRAL_HPP
#define FREDO_SPECTRAL_HPP

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace fredo {

enum class Parity { even, odd };

/// Real-valued packing of the non-redundant spectrum of a real signal of
/// length L. Layout for even L:
///   [Re z_0 .. Re z_{L/2}, Im z_1 .. Im z_{L/2-1}]
/// and for odd L:
///   [Re z_0 .. Re z_{(L-1)/2}, Im z_1 .. Im z_{(L-1)/2}]
/// Both pack exactly L reals, so the transform preserves vector length.
struct SpectralVector {
    std::vector<double> packed;
    Parity parity = Parity::even;

    std::size_t size() const { return packed.size(); }
};

/// Unnormalized forward transform: z_k = sum_j x_j exp(-2*pi*i*j*k/L).
/// Works for any L >= 1 (radix-2 when L is a power of two, Bluestein
/// otherwise). Throws EmptyInput.
std::vector<std::complex<double>> dft(std::span<const double> x);

/// Forward transform followed by packing into a SpectralVector.
/// Throws EmptyInput / TooShort (L must be >= 2).
SpectralVector dft_extract(std::span<const double> x);

/// Rebuild the conjugate-symmetric spectrum from the packed vector, apply the
/// 1/L inverse transform, and return the (real) time-domain signal.
std::vector<double> insert_idft(const SpectralVector& s);

/// Adjoint of insert_idft as a linear map R^L -> R^L: maps a gradient with
/// respect to the time-domain output onto a gradient with respect to the
/// packed spectrum. Needed to backpropagate losses through insert_idft.
std::vector<double> insert_idft_adjoint(std::span<const double> grad);

/// Index (into `amplitudes`, 0-based) of the maximum entry; the smallest
/// index wins ties. Exposed so the deterministic tie rule is testable.
std::size_t peak_bin(std::span<const double> amplitudes);

/// Dominant-period estimate from the amplitude spectrum over bins
/// k = 1..floor(L/2): P = round(L / argmax k), clamped to [2, max_period].
/// Returns 1 when no bin stands out (max amplitude below 3x the median
/// amplitude, or an all-zero spectrum beyond DC). Requires L >= 2*max_period
/// (TooShort otherwise).
std::size_t estimate_period(std::span<const double> x, std::size_t max_period);

} // namespace fredo

#endif // FREDO_SPECTRAL_HPP
