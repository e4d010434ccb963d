#ifndef FREDO_NN_HPP
#define FREDO_NN_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace fredo {

/// Dense layer y = W x + b with W stored row-major (out_dim x in_dim).
struct LinearLayer {
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    std::vector<double> weights;  // out_dim * in_dim
    std::vector<double> bias;     // out_dim
};

LinearLayer make_linear(std::size_t in_dim, std::size_t out_dim);

/// Two square layers with a ReLU in between: second(relu(first(x))).
struct MixerBlock {
    LinearLayer first;
    LinearLayer second;
};

/// Input projection followed by a stack of Mixer blocks. One parameter set is
/// shared by all series of a dataset. Immutable while reading, single writer
/// while training.
struct ModelParams {
    LinearLayer input_proj;
    std::vector<MixerBlock> mixers;
};

/// All parameter tensors in a fixed order (projection W, b, then per block:
/// first W, first b, second W, second b). The order is the contract for Adam
/// state, gradients, and checkpoints.
std::vector<std::vector<double>*> tensors(ModelParams& p);
std::vector<const std::vector<double>*> tensors(const ModelParams& p);

/// Zero-valued parameters of the given shape.
ModelParams make_params(std::size_t input_len, std::size_t output_len, std::size_t depth);

/// Seeded initialization: projection and the first layer of each block draw
/// uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)); each block's second layer starts
/// at zero, so the whole stack initially outputs zero.
ModelParams init_params(std::size_t input_len, std::size_t output_len,
                        std::size_t depth, std::uint64_t seed);

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x);
std::vector<double> mixer_forward(const MixerBlock& block, std::span<const double> x);

double mse(std::span<const double> pred, std::span<const double> target);
double mae(std::span<const double> pred, std::span<const double> target);

/// Intermediate activations captured by stack_forward, consumed by backward.
struct ForwardCache {
    std::vector<double> input;
    std::vector<std::vector<double>> block_inputs;  // h_0 .. h_{depth-1}
    std::vector<std::vector<double>> preacts;       // first-layer pre-activations
    std::vector<std::vector<double>> relus;         // relu(preact)
    std::vector<double> output;
};

/// Projection + Mixer stack. When `cache` is non-null the intermediate
/// activations needed by backward are recorded.
std::vector<double> stack_forward(const ModelParams& params, std::span<const double> x,
                                  ForwardCache* cache = nullptr);

struct Gradients {
    ModelParams wrt_params;        // same shapes as the model
    std::vector<double> wrt_input;
};

/// Exact reverse-mode gradients of the stack for the given upstream
/// d(loss)/d(output). ReLU's subgradient at exactly 0 is taken as 0.
Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   std::span<const double> upstream);

/// In-place accumulate: dst += scale * src (matching tensor layouts).
void axpy_params(ModelParams& dst, const ModelParams& src, double scale);

struct AdamState {
    ModelParams first_moment;
    ModelParams second_moment;
    std::int64_t step_count = 0;
    double lr = 1e-4;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

AdamState make_adam_state(const ModelParams& shape, double lr = 1e-4,
                          double beta1 = 0.9, double beta2 = 0.999,
                          double eps = 1e-8);

/// One bias-corrected Adam update. Deterministic given inputs.
void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state);

} // namespace fredo

#endif // FREDO_NN_HPP
