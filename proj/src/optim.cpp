#include "geonet/optim.hpp"

#include <algorithm>
#include <cmath>

#include "geonet/error.hpp"

namespace geonet {

std::vector<ParamSlot> trainable_params(Network& net) {
    std::vector<ParamSlot> slots;
    for (auto& layer : net.layers) {
        switch (layer.kind) {
        case LayerKind::affine:
        case LayerKind::polynomial:
            slots.push_back({&layer.w, &layer.gw, true, false});
            slots.push_back({&layer.b, &layer.gb, false, false});
            break;
        case LayerKind::rbf:
            slots.push_back({&layer.w, &layer.gw, true, false});
            slots.push_back({&layer.b, &layer.gb, false, false});
            if (layer.train_kernel) {
                slots.push_back({&layer.centers, &layer.gcenters, false, false});
                slots.push_back({&layer.sigma, &layer.gsigma, false, false});
            }
            break;
        case LayerKind::parametric_relu:
            slots.push_back({&layer.alpha, &layer.galpha, false, true});
            break;
        case LayerKind::leaky_relu:
            break;
        }
    }
    return slots;
}

void Optimizer::step(Network& net) {
    auto slots = trainable_params(net);
    if (config_.adam && m_.empty()) {
        m_.resize(slots.size());
        v_.resize(slots.size());
        for (std::size_t s = 0; s < slots.size(); ++s) {
            m_[s] = Matrix(slots[s].value->rows(), slots[s].value->cols());
            v_[s] = Matrix(slots[s].value->rows(), slots[s].value->cols());
        }
    }
    if (config_.adam && m_.size() != slots.size()) {
        fail(errc::invalid_argument, "optimizer bound to a different network shape");
    }
    ++t_;

    for (std::size_t s = 0; s < slots.size(); ++s) {
        auto& slot = slots[s];
        Matrix& p = *slot.value;
        const Matrix& g = *slot.grad;
        if (g.rows() != p.rows() || g.cols() != p.cols()) {
            fail(errc::dimension_mismatch, "gradient shape does not match parameter");
        }

        if (config_.adam) {
            Matrix& m = m_[s];
            Matrix& v = v_[s];
            const double b1 = config_.beta1;
            const double b2 = config_.beta2;
            const double bias1 = 1.0 - std::pow(b1, static_cast<double>(t_));
            const double bias2 = 1.0 - std::pow(b2, static_cast<double>(t_));
            for (std::size_t i = 0; i < p.size(); ++i) {
                const double gi = g.data()[i];
                m.data()[i] = b1 * m.data()[i] + (1.0 - b1) * gi;
                v.data()[i] = b2 * v.data()[i] + (1.0 - b2) * gi * gi;
                const double mhat = m.data()[i] / bias1;
                const double vhat = v.data()[i] / bias2;
                p.data()[i] -= config_.lr * mhat / (std::sqrt(vhat) + config_.eps);
            }
        } else {
            for (std::size_t i = 0; i < p.size(); ++i) {
                p.data()[i] -= config_.lr * g.data()[i];
            }
        }

        if (slot.weight_decay && config_.weight_decay > 0.0) {
            const double shrink = config_.lr * config_.weight_decay;
            for (std::size_t i = 0; i < p.size(); ++i) {
                p.data()[i] -= shrink * p.data()[i];
            }
        }
        if (slot.clamp01) {
            for (std::size_t i = 0; i < p.size(); ++i) {
                p.data()[i] = std::clamp(p.data()[i], 1e-4, 1.0 - 1e-4);
            }
        }
    }
}

} // namespace geonet
