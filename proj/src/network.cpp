#include "geonet/network.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "geonet/error.hpp"
#include "geonet/optim.hpp"

namespace geonet {

std::size_t Network::input_dim() const {
    for (const auto& l : layers) {
        if (l.in_dim() != 0) return l.in_dim();
    }
    return 0;
}

std::size_t Network::output_dim() const {
    for (auto it = layers.rbegin(); it != layers.rend(); ++it) {
        if (it->out_dim() != 0) return it->out_dim();
    }
    return 0;
}

void Network::validate() const {
    if (layers.empty()) fail(errc::invalid_argument, "network has no layers");
    std::size_t width = 0; // 0 = not yet pinned by a weight-bearing layer
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const Layer& l = layers[i];
        const std::size_t in = l.in_dim();
        if (in != 0) {
            if (width != 0 && width != in) {
                fail(errc::dimension_mismatch,
                     "layer " + std::to_string(i) + " expects width " + std::to_string(in) +
                         " but receives " + std::to_string(width));
            }
            width = l.out_dim();
        }
        if (l.has_weights()) {
            if (l.b.rows() != 1 || l.b.cols() != l.w.cols()) {
                fail(errc::dimension_mismatch, "layer " + std::to_string(i) + " bias shape");
            }
            if (!l.mask.empty() &&
                (l.mask.rows() != l.w.rows() || l.mask.cols() != l.w.cols())) {
                fail(errc::dimension_mismatch, "layer " + std::to_string(i) + " mask shape");
            }
            if (!l.w.all_finite() || !l.b.all_finite()) {
                fail(errc::non_finite, "layer " + std::to_string(i) + " has non-finite parameters");
            }
        }
        if (l.kind == LayerKind::polynomial && l.degree < 1) {
            fail(errc::invalid_argument, "polynomial degree must be >= 1");
        }
        if (l.kind == LayerKind::rbf) {
            if (l.sigma.rows() != 1 || l.sigma.cols() != l.centers.rows() ||
                l.w.rows() != l.centers.rows()) {
                fail(errc::dimension_mismatch, "layer " + std::to_string(i) + " rbf shapes");
            }
            for (std::size_t u = 0; u < l.sigma.cols(); ++u) {
                if (!(l.sigma(0, u) > 0.0)) {
                    fail(errc::invalid_argument, "rbf spread must be positive");
                }
            }
        }
        if (l.kind == LayerKind::leaky_relu || l.kind == LayerKind::parametric_relu) {
            if (l.alpha.size() != 1 || !(l.alpha(0, 0) > 0.0 && l.alpha(0, 0) < 1.0)) {
                fail(errc::invalid_argument, "leaky slope must be in (0,1)");
            }
        }
    }
}

Matrix forward(const Network& net, const Matrix& x) {
    Matrix y = x;
    for (const auto& l : net.layers) y = layer_forward(l, y);
    return y;
}

Matrix forward_train(const Network& net, const Matrix& x, double dropout_p, Rng& rng,
                     ForwardCache& cache) {
    if (!(dropout_p >= 0.0 && dropout_p < 1.0)) {
        fail(errc::invalid_argument, "dropout probability must be in [0,1)");
    }
    const std::size_t L = net.layers.size();
    cache.inputs.assign(L, Matrix());
    cache.phi.assign(L, Matrix());
    cache.dropout.assign(L, Matrix());

    Matrix y = x;
    for (std::size_t i = 0; i < L; ++i) {
        cache.inputs[i] = y;
        y = layer_forward(net.layers[i], y, &cache.phi[i]);
        if (dropout_p > 0.0 && i + 1 < L) {
            const double keep = 1.0 - dropout_p;
            Matrix mask(y.rows(), y.cols());
            for (std::size_t e = 0; e < mask.size(); ++e) {
                mask.data()[e] = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
            }
            for (std::size_t e = 0; e < y.size(); ++e) y.data()[e] *= mask.data()[e];
            cache.dropout[i] = std::move(mask);
        }
    }
    cache.output = y;
    return y;
}

Matrix backward(Network& net, const ForwardCache& cache, const Matrix& grad_output) {
    if (cache.inputs.size() != net.layers.size()) {
        fail(errc::invalid_argument, "forward cache does not match the network");
    }
    Matrix grad = grad_output;
    for (std::size_t i = net.layers.size(); i-- > 0;) {
        const Matrix& drop = cache.dropout[i];
        if (!drop.empty()) {
            for (std::size_t e = 0; e < grad.size(); ++e) grad.data()[e] *= drop.data()[e];
        }
        grad = layer_backward(net.layers[i], cache.inputs[i], cache.phi[i], grad);
    }
    return grad;
}

std::pair<double, Matrix> cross_entropy_loss(const Matrix& logits,
                                             const std::vector<int>& labels) {
    const std::size_t n = logits.rows();
    const std::size_t c = logits.cols();
    if (labels.size() != n) fail(errc::count_mismatch, "one label per logit row required");
    Matrix grad(n, c);
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int y = labels[i];
        if (y < 0 || static_cast<std::size_t>(y) >= c) {
            fail(errc::label_out_of_range,
                 "label " + std::to_string(y) + " outside [0," + std::to_string(c) + ")");
        }
        double mx = logits(i, 0);
        for (std::size_t j = 1; j < c; ++j) mx = std::max(mx, logits(i, j));
        double sum = 0.0;
        for (std::size_t j = 0; j < c; ++j) sum += std::exp(logits(i, j) - mx);
        loss += std::log(sum) - (logits(i, y) - mx);
        for (std::size_t j = 0; j < c; ++j) {
            const double soft = std::exp(logits(i, j) - mx) / sum;
            grad(i, j) = (soft - (static_cast<std::size_t>(y) == j ? 1.0 : 0.0)) /
                         static_cast<double>(n);
        }
    }
    return {loss / static_cast<double>(n), std::move(grad)};
}

std::pair<double, Matrix> mse_loss(const Matrix& pred, const Matrix& target) {
    if (pred.rows() != target.rows() || pred.cols() != target.cols()) {
        fail(errc::dimension_mismatch, "prediction and target shapes differ");
    }
    const double n = static_cast<double>(pred.rows());
    Matrix grad(pred.rows(), pred.cols());
    double loss = 0.0;
    for (std::size_t e = 0; e < pred.size(); ++e) {
        const double diff = pred.data()[e] - target.data()[e];
        loss += diff * diff;
        grad.data()[e] = 2.0 * diff / n;
    }
    return {loss / n, std::move(grad)};
}

void apply_masks(Network& net) {
    for (auto& l : net.layers) {
        if (l.mask.empty()) continue;
        for (std::size_t e = 0; e < l.w.size(); ++e) {
            if (l.mask.data()[e] == 0.0) l.w.data()[e] = 0.0;
        }
    }
}

namespace {

TrainingReport train_loop(Network& net, const Matrix& x, const std::vector<int>* labels,
                          const Matrix* target, const TrainConfig& config) {
    net.validate();
    const std::size_t n = x.rows();
    if (n == 0) fail(errc::invalid_argument, "training data is empty");
    if (config.batch_size < 1) fail(errc::invalid_argument, "batch size must be >= 1");
    if (config.optimizer != "adam" && config.optimizer != "sgd") {
        fail(errc::invalid_argument, "unknown optimizer '" + config.optimizer + "'");
    }

    OptimizerConfig oc;
    oc.adam = config.optimizer == "adam";
    oc.lr = config.lr;
    oc.weight_decay = config.weight_decay;
    Optimizer opt(oc);

    Rng rng(config.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;

    TrainingReport report;
    const auto t0 = std::chrono::steady_clock::now();
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        std::size_t correct = 0;
        for (std::size_t start = 0; start < n; start += config.batch_size) {
            const std::size_t bsz = std::min(config.batch_size, n - start);
            Matrix xb(bsz, x.cols());
            for (std::size_t i = 0; i < bsz; ++i) {
                const std::size_t src = order[start + i];
                for (std::size_t j = 0; j < x.cols(); ++j) xb(i, j) = x(src, j);
            }

            ForwardCache cache;
            const Matrix out = forward_train(net, xb, config.dropout_p, rng, cache);

            double loss = 0.0;
            Matrix grad;
            if (labels != nullptr) {
                std::vector<int> yb(bsz);
                for (std::size_t i = 0; i < bsz; ++i) yb[i] = (*labels)[order[start + i]];
                std::tie(loss, grad) = cross_entropy_loss(out, yb);
                for (std::size_t i = 0; i < bsz; ++i) {
                    std::size_t best = 0;
                    for (std::size_t j = 1; j < out.cols(); ++j) {
                        if (out(i, j) > out(i, best)) best = j;
                    }
                    if (static_cast<int>(best) == yb[i]) ++correct;
                }
            } else {
                Matrix tb(bsz, target->cols());
                for (std::size_t i = 0; i < bsz; ++i) {
                    const std::size_t src = order[start + i];
                    for (std::size_t j = 0; j < target->cols(); ++j) tb(i, j) = (*target)(src, j);
                }
                std::tie(loss, grad) = mse_loss(out, tb);
            }
            if (!std::isfinite(loss)) {
                fail(errc::non_finite, "training diverged at epoch " + std::to_string(epoch) +
                                           ", batch " + std::to_string(batches));
            }

            backward(net, cache, grad);
            opt.step(net);
            apply_masks(net);
            loss_sum += loss;
            ++batches;
        }
        report.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
        if (labels != nullptr) {
            report.epoch_accuracy.push_back(static_cast<double>(correct) /
                                            static_cast<double>(n));
        }
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return report;
}

} // namespace

TrainingReport train(Network& net, const Dataset& data, const TrainConfig& config) {
    return train_loop(net, data.features, &data.labels, nullptr, config);
}

TrainingReport train_regression(Network& net, const Matrix& x, const Matrix& target,
                                const TrainConfig& config) {
    if (x.rows() != target.rows()) {
        fail(errc::count_mismatch, "input and target row counts differ");
    }
    return train_loop(net, x, nullptr, &target, config);
}

EvalResult evaluate(const Network& net, const Dataset& data) {
    net.validate();
    const std::size_t n = data.size();
    if (n == 0) fail(errc::invalid_argument, "evaluation data is empty");
    const std::size_t classes = net.output_dim();
    for (int l : data.labels) {
        if (l < 0 || static_cast<std::size_t>(l) >= classes) {
            fail(errc::label_out_of_range, "label " + std::to_string(l) +
                                               " outside the network's " +
                                               std::to_string(classes) + " classes");
        }
    }

    EvalResult result;
    result.predictions.assign(n, 0);
    constexpr std::size_t kChunk = 256;
    const auto n_chunks = static_cast<std::int64_t>((n + kChunk - 1) / kChunk);

    // Read-only forward passes; every chunk writes only its own slots, so the
    // merged result is independent of scheduling.
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t chunk = 0; chunk < n_chunks; ++chunk) {
        const std::size_t start = static_cast<std::size_t>(chunk) * kChunk;
        const std::size_t bsz = std::min(kChunk, n - start);
        Matrix xb(bsz, data.dim());
        for (std::size_t i = 0; i < bsz; ++i) {
            for (std::size_t j = 0; j < data.dim(); ++j) xb(i, j) = data.features(start + i, j);
        }
        const Matrix out = forward(net, xb);
        for (std::size_t i = 0; i < bsz; ++i) {
            std::size_t best = 0;
            for (std::size_t j = 1; j < out.cols(); ++j) {
                if (out(i, j) > out(i, best)) best = j;
            }
            result.predictions[start + i] = static_cast<int>(best);
        }
    }

    result.confusion = Matrix(classes, classes);
    std::size_t correct = 0;
    for (std::size_t i = 0; i < n; ++i) {
        result.confusion(data.labels[i], result.predictions[i]) += 1.0;
        if (result.predictions[i] == data.labels[i]) ++correct;
    }
    result.accuracy = static_cast<double>(correct) / static_cast<double>(n);
    return result;
}

} // namespace geonet
