#include "geonet/layers.hpp"

#include <cmath>

#include "geonet/error.hpp"

namespace geonet {

namespace {

Matrix xavier(std::size_t in, std::size_t out, Rng& rng) {
    const double limit = std::sqrt(6.0 / static_cast<double>(in + out));
    Matrix w(in, out);
    for (std::size_t i = 0; i < w.size(); ++i) w.data()[i] = rng.uniform(-limit, limit);
    return w;
}

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        fail(errc::invalid_argument, "leaky slope must be in (0,1), got " + std::to_string(alpha));
    }
}

void check_width(const Layer& layer, const Matrix& x) {
    const std::size_t want = layer.in_dim();
    if (want != 0 && x.cols() != want) {
        fail(errc::dimension_mismatch,
             std::string(layer_kind_name(layer.kind)) + " layer expects " +
                 std::to_string(want) + " inputs, got " + std::to_string(x.cols()));
    }
}

} // namespace

const char* layer_kind_name(LayerKind k) {
    switch (k) {
    case LayerKind::affine: return "affine";
    case LayerKind::polynomial: return "polynomial";
    case LayerKind::rbf: return "rbf";
    case LayerKind::leaky_relu: return "leaky_relu";
    case LayerKind::parametric_relu: return "parametric_relu";
    }
    return "?";
}

std::size_t Layer::in_dim() const {
    switch (kind) {
    case LayerKind::affine:
    case LayerKind::polynomial: return w.rows();
    case LayerKind::rbf: return centers.cols();
    default: return 0;
    }
}

std::size_t Layer::out_dim() const {
    switch (kind) {
    case LayerKind::affine:
    case LayerKind::polynomial:
    case LayerKind::rbf: return w.cols();
    default: return 0;
    }
}

Layer make_affine(std::size_t in, std::size_t out, Rng& rng) {
    if (in == 0 || out == 0) fail(errc::invalid_argument, "layer dims must be positive");
    Layer l;
    l.kind = LayerKind::affine;
    l.w = xavier(in, out, rng);
    l.b = Matrix(1, out);
    return l;
}

Layer make_polynomial(std::size_t in, std::size_t out, unsigned degree, Rng& rng) {
    if (degree < 1) fail(errc::invalid_argument, "polynomial degree must be >= 1");
    Layer l = make_affine(in, out, rng);
    l.kind = LayerKind::polynomial;
    l.degree = degree;
    return l;
}

Layer make_rbf(const Dataset& train, std::size_t n_units, std::size_t out_dim, Rng& rng) {
    if (n_units == 0 || out_dim == 0) fail(errc::invalid_argument, "layer dims must be positive");
    if (n_units > train.size()) {
        fail(errc::invalid_argument, "cannot sample " + std::to_string(n_units) +
                                         " centers from " + std::to_string(train.size()) +
                                         " samples");
    }
    Layer l;
    l.kind = LayerKind::rbf;
    const auto chosen = rng.sample_without_replacement(train.size(), n_units);
    l.centers = Matrix(n_units, train.dim());
    for (std::size_t u = 0; u < n_units; ++u) {
        for (std::size_t j = 0; j < train.dim(); ++j) {
            l.centers(u, j) = train.features(chosen[u], j);
        }
    }

    double sigma = 1.0; // single center: no pairwise distances to average
    if (n_units > 1) {
        double sum = 0.0;
        std::size_t pairs = 0;
        for (std::size_t a = 0; a < n_units; ++a) {
            for (std::size_t b = a + 1; b < n_units; ++b) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < train.dim(); ++j) {
                    const double diff = l.centers(a, j) - l.centers(b, j);
                    d2 += diff * diff;
                }
                sum += std::sqrt(d2);
                ++pairs;
            }
        }
        sigma = sum / static_cast<double>(pairs);
        if (sigma <= 0.0) sigma = 1.0; // all chosen centers coincide
    }
    l.sigma = Matrix(1, n_units);
    for (std::size_t u = 0; u < n_units; ++u) l.sigma(0, u) = sigma;

    l.w = xavier(n_units, out_dim, rng);
    l.b = Matrix(1, out_dim);
    return l;
}

Layer make_leaky_relu(double alpha) {
    check_alpha(alpha);
    Layer l;
    l.kind = LayerKind::leaky_relu;
    l.alpha = Matrix(1, 1);
    l.alpha(0, 0) = alpha;
    return l;
}

Layer make_parametric_relu(double alpha_init) {
    Layer l = make_leaky_relu(alpha_init);
    l.kind = LayerKind::parametric_relu;
    return l;
}

Matrix layer_forward(const Layer& layer, const Matrix& x, Matrix* phi_out) {
    check_width(layer, x);
    switch (layer.kind) {
    case LayerKind::affine: {
        Matrix y = matmul(x, layer.w);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += layer.b(0, j);
        }
        return y;
    }
    case LayerKind::polynomial: {
        Matrix y = matmul(elementwise_pow(x, layer.degree), layer.w);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += layer.b(0, j);
        }
        return y;
    }
    case LayerKind::rbf: {
        const std::size_t units = layer.centers.rows();
        Matrix phi(x.rows(), units);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t u = 0; u < units; ++u) {
                double d2 = 0.0;
                for (std::size_t j = 0; j < x.cols(); ++j) {
                    const double diff = x(i, j) - layer.centers(u, j);
                    d2 += diff * diff;
                }
                const double s = layer.sigma(0, u);
                phi(i, u) = std::exp(-d2 / (2.0 * s * s));
            }
        }
        Matrix y = matmul(phi, layer.w);
        for (std::size_t i = 0; i < y.rows(); ++i) {
            for (std::size_t j = 0; j < y.cols(); ++j) y(i, j) += layer.b(0, j);
        }
        if (phi_out != nullptr) *phi_out = std::move(phi);
        return y;
    }
    case LayerKind::leaky_relu:
    case LayerKind::parametric_relu: {
        const double a = layer.alpha(0, 0);
        Matrix y = x;
        for (std::size_t i = 0; i < y.size(); ++i) {
            if (y.data()[i] <= 0.0) y.data()[i] *= a;
        }
        return y;
    }
    }
    fail(errc::invalid_argument, "unknown layer kind");
}

Matrix layer_backward(Layer& layer, const Matrix& x, const Matrix& phi,
                      const Matrix& upstream) {
    check_width(layer, x);
    if (upstream.rows() != x.rows()) {
        fail(errc::dimension_mismatch, "upstream batch size mismatch");
    }
    switch (layer.kind) {
    case LayerKind::affine: {
        layer.gw = matmul(x.transpose(), upstream);
        layer.gb = col_sums(upstream);
        return matmul(upstream, layer.w.transpose());
    }
    case LayerKind::polynomial: {
        const Matrix xd = elementwise_pow(x, layer.degree);
        layer.gw = matmul(xd.transpose(), upstream);
        layer.gb = col_sums(upstream);
        // dy/dx_i = d * w_i * x_i^(d-1)
        Matrix gx = matmul(upstream, layer.w.transpose());
        const double d = static_cast<double>(layer.degree);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t j = 0; j < x.cols(); ++j) {
                gx(i, j) *= d * ipow(x(i, j), layer.degree - 1);
            }
        }
        return gx;
    }
    case LayerKind::rbf: {
        if (phi.rows() != x.rows() || phi.cols() != layer.centers.rows()) {
            fail(errc::dimension_mismatch, "rbf backward needs the forward-pass activations");
        }
        layer.gw = matmul(phi.transpose(), upstream);
        layer.gb = col_sums(upstream);

        const Matrix dphi = matmul(upstream, layer.w.transpose()); // n x units
        const std::size_t units = layer.centers.rows();
        Matrix gx(x.rows(), x.cols());
        layer.gcenters = Matrix(units, x.cols());
        layer.gsigma = Matrix(1, units);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            for (std::size_t u = 0; u < units; ++u) {
                const double s = layer.sigma(0, u);
                const double coeff = dphi(i, u) * phi(i, u);
                double d2 = 0.0;
                for (std::size_t j = 0; j < x.cols(); ++j) {
                    const double diff = x(i, j) - layer.centers(u, j);
                    d2 += diff * diff;
                    const double g = coeff * diff / (s * s);
                    gx(i, j) -= g;          // d phi/d x = -(x-c)/s^2 * phi
                    layer.gcenters(u, j) += g; // d phi/d c = +(x-c)/s^2 * phi
                }
                layer.gsigma(0, u) += coeff * d2 / (s * s * s);
            }
        }
        return gx;
    }
    case LayerKind::leaky_relu:
    case LayerKind::parametric_relu: {
        const double a = layer.alpha(0, 0);
        Matrix gx = upstream;
        double ga = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x.data()[i] <= 0.0) {
                ga += upstream.data()[i] * x.data()[i];
                gx.data()[i] *= a;
            }
        }
        layer.galpha = Matrix(1, 1);
        layer.galpha(0, 0) = layer.kind == LayerKind::parametric_relu ? ga : 0.0;
        return gx;
    }
    }
    fail(errc::invalid_argument, "unknown layer kind");
}

ActivationSpec parse_activation_spec(const std::string& spec) {
    const auto bad = [&spec]() -> void {
        fail(errc::parse_error, "bad activation spec '" + spec +
                                    "' (want poly:<degree>, rbf:<units>, lrelu:<alpha>, prelu)");
    };
    ActivationSpec out;
    const auto colon = spec.find(':');
    const std::string head = spec.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : spec.substr(colon + 1);
    try {
        if (head == "poly") {
            out.kind = LayerKind::polynomial;
            if (arg.empty()) bad();
            std::size_t used = 0;
            const long v = std::stol(arg, &used);
            if (used != arg.size() || v < 1) bad();
            out.degree = static_cast<unsigned>(v);
        } else if (head == "rbf") {
            out.kind = LayerKind::rbf;
            if (arg.empty()) bad();
            std::size_t used = 0;
            const long v = std::stol(arg, &used);
            if (used != arg.size() || v < 1) bad();
            out.n_units = static_cast<std::size_t>(v);
        } else if (head == "lrelu") {
            out.kind = LayerKind::leaky_relu;
            if (arg.empty()) bad();
            std::size_t used = 0;
            out.alpha = std::stod(arg, &used);
            if (used != arg.size() || !(out.alpha > 0.0 && out.alpha < 1.0)) bad();
        } else if (head == "prelu") {
            out.kind = LayerKind::parametric_relu;
            if (!arg.empty()) bad();
            out.alpha = 0.01;
        } else {
            bad();
        }
    } catch (const Error&) {
        throw;
    } catch (const std::exception&) { // stol/stod failures
        bad();
    }
    return out;
}

} // namespace geonet
