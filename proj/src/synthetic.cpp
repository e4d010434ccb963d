#include "fredo/synthetic.hpp"

#include <cmath>
#include <random>

#include "fredo/errors.hpp"
#include "fredo/rng.hpp"

namespace fredo {

TimeSeriesMatrix gen_synthetic(const SyntheticSpec& spec) {
    if (spec.n_series == 0 || spec.t_len == 0 || spec.period < 2 || spec.harmonics == 0) {
        throw ConfigError("synthetic spec needs n_series, t_len, harmonics > 0 and period >= 2");
    }
    TimeSeriesMatrix m;
    m.t_len = spec.t_len;
    m.n_series = spec.n_series;
    m.values.resize(spec.t_len * spec.n_series);
    m.series_names.reserve(spec.n_series);

    for (std::size_t n = 0; n < spec.n_series; ++n) {
        m.series_names.push_back("series_" + std::to_string(n));
        std::mt19937_64 shape_rng(derive_seed(spec.seed, 2 * n));
        NormalSampler noise(derive_seed(spec.seed, 2 * n + 1));

        const double offset = 2.0 * uniform01(shape_rng) - 1.0;
        std::vector<double> amplitude(spec.harmonics);
        std::vector<double> phase(spec.harmonics);
        for (std::size_t h = 0; h < spec.harmonics; ++h) {
            // base amplitude in [0.5, 1.5], decaying with the harmonic index
            amplitude[h] = (0.5 + uniform01(shape_rng)) / static_cast<double>(h + 1);
            phase[h] = 2.0 * M_PI * uniform01(shape_rng);
        }

        double ar_state = 0.0;
        for (std::size_t t = 0; t < spec.t_len; ++t) {
            double v = offset;
            for (std::size_t h = 0; h < spec.harmonics; ++h) {
                const double freq = 2.0 * M_PI * static_cast<double>(h + 1) /
                                    static_cast<double>(spec.period);
                v += amplitude[h] * std::sin(freq * static_cast<double>(t) + phase[h]);
            }
            ar_state = spec.ar_coeff * ar_state + spec.noise_scale * noise.next();
            m.at(t, n) = v + ar_state;
        }
    }
    return m;
}

} // namespace fredo
