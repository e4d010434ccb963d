#include "fredo/nn.hpp"

#include <cmath>
#include <random>
#include <string>

#include "fredo/errors.hpp"
#include "fredo/rng.hpp"

namespace fredo {

namespace {

void check_len(std::span<const double> x, std::size_t expected, const char* where) {
    if (x.size() != expected) {
        throw ShapeMismatch(std::string(where) + ": expected length " +
                            std::to_string(expected) + ", got " + std::to_string(x.size()));
    }
}

void fill_uniform(std::vector<double>& v, double bound, std::mt19937_64& rng) {
    for (double& x : v) {
        x = bound * (2.0 * uniform01(rng) - 1.0);
    }
}

} // namespace

LinearLayer make_linear(std::size_t in_dim, std::size_t out_dim) {
    LinearLayer layer;
    layer.in_dim = in_dim;
    layer.out_dim = out_dim;
    layer.weights.assign(in_dim * out_dim, 0.0);
    layer.bias.assign(out_dim, 0.0);
    return layer;
}

std::vector<std::vector<double>*> tensors(ModelParams& p) {
    std::vector<std::vector<double>*> out;
    out.push_back(&p.input_proj.weights);
    out.push_back(&p.input_proj.bias);
    for (auto& block : p.mixers) {
        out.push_back(&block.first.weights);
        out.push_back(&block.first.bias);
        out.push_back(&block.second.weights);
        out.push_back(&block.second.bias);
    }
    return out;
}

std::vector<const std::vector<double>*> tensors(const ModelParams& p) {
    std::vector<const std::vector<double>*> out;
    out.push_back(&p.input_proj.weights);
    out.push_back(&p.input_proj.bias);
    for (const auto& block : p.mixers) {
        out.push_back(&block.first.weights);
        out.push_back(&block.first.bias);
        out.push_back(&block.second.weights);
        out.push_back(&block.second.bias);
    }
    return out;
}

ModelParams make_params(std::size_t input_len, std::size_t output_len, std::size_t depth) {
    if (input_len == 0 || output_len == 0 || depth == 0) {
        throw ShapeMismatch("model dimensions must be positive");
    }
    ModelParams p;
    p.input_proj = make_linear(input_len, output_len);
    p.mixers.resize(depth);
    for (auto& block : p.mixers) {
        block.first = make_linear(output_len, output_len);
        block.second = make_linear(output_len, output_len);
    }
    return p;
}

ModelParams init_params(std::size_t input_len, std::size_t output_len,
                        std::size_t depth, std::uint64_t seed) {
    ModelParams p = make_params(input_len, output_len, depth);
    std::mt19937_64 rng(seed);
    const double proj_bound = 1.0 / std::sqrt(static_cast<double>(input_len));
    fill_uniform(p.input_proj.weights, proj_bound, rng);
    fill_uniform(p.input_proj.bias, proj_bound, rng);
    const double mixer_bound = 1.0 / std::sqrt(static_cast<double>(output_len));
    for (auto& block : p.mixers) {
        fill_uniform(block.first.weights, mixer_bound, rng);
        fill_uniform(block.first.bias, mixer_bound, rng);
        // second layer stays zero: the stack starts as the zero map
    }
    return p;
}

std::vector<double> linear_forward(const LinearLayer& layer, std::span<const double> x) {
    check_len(x, layer.in_dim, "linear_forward");
    std::vector<double> y(layer.out_dim);
    for (std::size_t o = 0; o < layer.out_dim; ++o) {
        double acc = layer.bias[o];
        const double* row = layer.weights.data() + o * layer.in_dim;
        for (std::size_t i = 0; i < layer.in_dim; ++i) {
            acc += row[i] * x[i];
        }
        y[o] = acc;
    }
    return y;
}

std::vector<double> mixer_forward(const MixerBlock& block, std::span<const double> x) {
    std::vector<double> h = linear_forward(block.first, x);
    for (double& v : h) v = v > 0.0 ? v : 0.0;
    return linear_forward(block.second, h);
}

double mse(std::span<const double> pred, std::span<const double> target) {
    check_len(pred, target.size(), "mse");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double d = pred[i] - target[i];
        acc += d * d;
    }
    return acc / static_cast<double>(pred.size());
}

double mae(std::span<const double> pred, std::span<const double> target) {
    check_len(pred, target.size(), "mae");
    double acc = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        acc += std::abs(pred[i] - target[i]);
    }
    return acc / static_cast<double>(pred.size());
}

std::vector<double> stack_forward(const ModelParams& params, std::span<const double> x,
                                  ForwardCache* cache) {
    std::vector<double> h = linear_forward(params.input_proj, x);
    if (cache) {
        cache->input.assign(x.begin(), x.end());
        cache->block_inputs.clear();
        cache->preacts.clear();
        cache->relus.clear();
    }
    for (const auto& block : params.mixers) {
        if (cache) cache->block_inputs.push_back(h);
        std::vector<double> pre = linear_forward(block.first, h);
        std::vector<double> act = pre;
        for (double& v : act) v = v > 0.0 ? v : 0.0;
        if (cache) {
            cache->preacts.push_back(pre);
            cache->relus.push_back(act);
        }
        h = linear_forward(block.second, act);
    }
    if (cache) cache->output = h;
    return h;
}

Gradients backward(const ModelParams& params, const ForwardCache& cache,
                   std::span<const double> upstream) {
    const std::size_t depth = params.mixers.size();
    if (cache.block_inputs.size() != depth || cache.preacts.size() != depth) {
        throw ShapeMismatch("forward cache does not match model depth");
    }
    const std::size_t out_dim = params.input_proj.out_dim;
    check_len(upstream, out_dim, "backward");

    Gradients g;
    g.wrt_params = make_params(params.input_proj.in_dim, out_dim, depth);

    std::vector<double> grad(upstream.begin(), upstream.end());
    for (std::size_t bi = depth; bi-- > 0;) {
        const MixerBlock& block = params.mixers[bi];
        MixerBlock& gblock = g.wrt_params.mixers[bi];
        const auto& act = cache.relus[bi];
        const auto& pre = cache.preacts[bi];
        const auto& block_in = cache.block_inputs[bi];

        // second layer: y = W2 a + b2
        std::vector<double> grad_act(out_dim, 0.0);
        for (std::size_t o = 0; o < out_dim; ++o) {
            gblock.second.bias[o] += grad[o];
            double* wrow = gblock.second.weights.data() + o * out_dim;
            const double* w = block.second.weights.data() + o * out_dim;
            for (std::size_t i = 0; i < out_dim; ++i) {
                wrow[i] += grad[o] * act[i];
                grad_act[i] += w[i] * grad[o];
            }
        }
        // relu: subgradient 0 at exactly 0
        for (std::size_t i = 0; i < out_dim; ++i) {
            if (!(pre[i] > 0.0)) grad_act[i] = 0.0;
        }
        // first layer
        std::vector<double> grad_in(out_dim, 0.0);
        for (std::size_t o = 0; o < out_dim; ++o) {
            gblock.first.bias[o] += grad_act[o];
            double* wrow = gblock.first.weights.data() + o * out_dim;
            const double* w = block.first.weights.data() + o * out_dim;
            for (std::size_t i = 0; i < out_dim; ++i) {
                wrow[i] += grad_act[o] * block_in[i];
                grad_in[i] += w[i] * grad_act[o];
            }
        }
        grad = std::move(grad_in);
    }

    // input projection
    const std::size_t in_dim = params.input_proj.in_dim;
    g.wrt_input.assign(in_dim, 0.0);
    for (std::size_t o = 0; o < out_dim; ++o) {
        g.wrt_params.input_proj.bias[o] += grad[o];
        double* wrow = g.wrt_params.input_proj.weights.data() + o * in_dim;
        const double* w = params.input_proj.weights.data() + o * in_dim;
        for (std::size_t i = 0; i < in_dim; ++i) {
            wrow[i] += grad[o] * cache.input[i];
            g.wrt_input[i] += w[i] * grad[o];
        }
    }
    return g;
}

void axpy_params(ModelParams& dst, const ModelParams& src, double scale) {
    auto d = tensors(dst);
    auto s = tensors(src);
    if (d.size() != s.size()) {
        throw ShapeMismatch("parameter structures differ");
    }
    for (std::size_t t = 0; t < d.size(); ++t) {
        if (d[t]->size() != s[t]->size()) {
            throw ShapeMismatch("parameter tensor sizes differ");
        }
        for (std::size_t i = 0; i < d[t]->size(); ++i) {
            (*d[t])[i] += scale * (*s[t])[i];
        }
    }
}

AdamState make_adam_state(const ModelParams& shape, double lr, double beta1,
                          double beta2, double eps) {
    AdamState state;
    const std::size_t depth = shape.mixers.size();
    state.first_moment = make_params(shape.input_proj.in_dim, shape.input_proj.out_dim, depth);
    state.second_moment = make_params(shape.input_proj.in_dim, shape.input_proj.out_dim, depth);
    state.lr = lr;
    state.beta1 = beta1;
    state.beta2 = beta2;
    state.eps = eps;
    return state;
}

void adam_step(ModelParams& params, const ModelParams& grads, AdamState& state) {
    auto p = tensors(params);
    auto g = tensors(grads);
    auto m = tensors(state.first_moment);
    auto v = tensors(state.second_moment);
    if (p.size() != g.size()) {
        throw ShapeMismatch("gradient structure does not match parameters");
    }
    state.step_count += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step_count));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step_count));
    for (std::size_t t = 0; t < p.size(); ++t) {
        if (p[t]->size() != g[t]->size()) {
            throw ShapeMismatch("gradient tensor sizes differ from parameters");
        }
        for (std::size_t i = 0; i < p[t]->size(); ++i) {
            double& mi = (*m[t])[i];
            double& vi = (*v[t])[i];
            const double gi = (*g[t])[i];
            mi = state.beta1 * mi + (1.0 - state.beta1) * gi;
            vi = state.beta2 * vi + (1.0 - state.beta2) * gi * gi;
            const double m_hat = mi / bc1;
            const double v_hat = vi / bc2;
            (*p[t])[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

} // namespace fredo
