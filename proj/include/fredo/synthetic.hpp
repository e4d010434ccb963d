#ifndef FREDO_SYNTHETIC_HPP
#define FREDO_SYNTHETIC_HPP

#include <cstddef>
#include <cstdint>

#include "fredo/dataio.hpp"

namespace fredo {

/// Bundled multi-sinusoid + AR-noise generator. Every experiment in the test
/// suite runs on data from here, so nothing external has to be downloaded;
/// real CSV datasets go through the same loading path.
struct SyntheticSpec {
    std::size_t n_series = 24;
    std::size_t t_len = 1600;
    std::size_t period = 24;
    std::size_t harmonics = 3;   // sinusoids at 1x..harmonics x the base frequency
    double noise_scale = 0.3;    // std of the AR(1) innovation
    double ar_coeff = 0.6;       // lag-1 coefficient of the noise process
    std::uint64_t seed = 1;
};

/// Each series: random-amplitude, random-phase harmonics of the shared base
/// period, a random level offset, plus AR(1) noise. Deterministic per spec.
TimeSeriesMatrix gen_synthetic(const SyntheticSpec& spec);

} // namespace fredo

#endif // FREDO_SYNTHETIC_HPP
