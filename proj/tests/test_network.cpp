#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "geonet/model_io.hpp"
#include "geonet/network.hpp"
#include "geonet/optim.hpp"
#include "test_util.hpp"

using namespace geonet;

namespace {

Network toy_classifier(Rng& rng) {
    Network net;
    net.layers.push_back(make_affine(2, 8, rng));
    net.layers.push_back(make_leaky_relu(0.01));
    net.layers.push_back(make_affine(8, 2, rng));
    return net;
}

Dataset blobs(std::size_t n, Rng& rng) {
    return gen_gaussian_mixture(n, {{-3.0, 0.0}, {3.0, 0.0}}, 0.4, rng);
}

// Total cross-entropy loss of the network on a fixed batch; the quantity the
// finite-difference probes differentiate.
double net_loss(const Network& net, const Matrix& x, const std::vector<int>& labels) {
    return cross_entropy_loss(forward(net, x), labels).first;
}

std::vector<Matrix> snapshot_weights(const Network& net) {
    std::vector<Matrix> out;
    for (const auto& l : net.layers) {
        out.push_back(l.w);
        out.push_back(l.b);
        out.push_back(l.alpha);
    }
    return out;
}

} // namespace

TEST_CASE("validate enforces the width chain and parameter sanity") {
    Rng rng(1);
    Network ok = toy_classifier(rng);
    ok.validate();
    CHECK(ok.input_dim() == 2);
    CHECK(ok.output_dim() == 2);

    Network broken;
    broken.layers.push_back(make_affine(2, 3, rng));
    broken.layers.push_back(make_affine(4, 1, rng));
    CHECK_FAILS_WITH(dimension_mismatch, broken.validate());

    Network empty;
    CHECK_FAILS_WITH(invalid_argument, empty.validate());

    Network poisoned = toy_classifier(rng);
    poisoned.layers[0].w(0, 0) = std::nan("");
    CHECK_FAILS_WITH(non_finite, poisoned.validate());

    // Elementwise layers pass any width through the chain.
    Network mixed;
    mixed.layers.push_back(make_affine(3, 7, rng));
    mixed.layers.push_back(make_leaky_relu(0.1));
    mixed.layers.push_back(make_affine(7, 2, rng));
    mixed.validate();
    CHECK(mixed.input_dim() == 3);
    CHECK(mixed.output_dim() == 2);
}

TEST_CASE("forward composes layers in order") {
    // Identity affine followed by leaky relu: negative entries scale by alpha.
    Network net;
    Layer id;
    id.kind = LayerKind::affine;
    id.w = Matrix::identity(2);
    id.b = Matrix(1, 2);
    net.layers.push_back(id);
    net.layers.push_back(make_leaky_relu(0.5));

    Matrix y = forward(net, Matrix::from_rows({{-2.0, 4.0}}));
    CHECK(y(0, 0) == doctest::Approx(-1.0));
    CHECK(y(0, 1) == doctest::Approx(4.0));
}

TEST_CASE("cross entropy on uniform logits equals log(n_classes)") {
    const std::size_t n = 4, c = 5;
    Matrix logits(n, c); // all zero -> uniform softmax
    std::vector<int> labels = {0, 1, 2, 3};
    auto [loss, grad] = cross_entropy_loss(logits, labels);
    CHECK(loss == doctest::Approx(std::log(static_cast<double>(c))).epsilon(1e-12));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < c; ++j) {
            const double expected =
                (1.0 / c - (labels[i] == static_cast<int>(j) ? 1.0 : 0.0)) / n;
            CHECK(grad(i, j) == doctest::Approx(expected).epsilon(1e-12));
        }

    CHECK_FAILS_WITH(label_out_of_range, cross_entropy_loss(logits, {0, 1, 2, 5}));
    CHECK_FAILS_WITH(count_mismatch, cross_entropy_loss(logits, {0, 1}));
}

TEST_CASE("cross entropy is shift-invariant and matches finite differences") {
    Rng rng(7);
    Matrix logits(3, 4);
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) logits(i, j) = rng.uniform(-2.0, 2.0);
    std::vector<int> labels = {2, 0, 3};

    auto [loss, grad] = cross_entropy_loss(logits, labels);

    // Adding a constant to every logit of a row changes nothing.
    Matrix shifted = logits;
    for (std::size_t j = 0; j < 4; ++j) shifted(1, j) += 1000.0;
    CHECK(cross_entropy_loss(shifted, labels).first == doctest::Approx(loss).epsilon(1e-9));

    const double h = 1e-6;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 4; ++j) {
            Matrix up = logits, dn = logits;
            up(i, j) += h;
            dn(i, j) -= h;
            const double fd = (cross_entropy_loss(up, labels).first -
                               cross_entropy_loss(dn, labels).first) /
                              (2.0 * h);
            CHECK(fd == doctest::Approx(grad(i, j)).epsilon(1e-5));
        }
}

TEST_CASE("mse loss and gradient follow the mean-over-rows definition") {
    Matrix pred = Matrix::from_rows({{1.0, 2.0}, {0.0, -1.0}});
    Matrix target = Matrix::from_rows({{0.0, 0.0}, {0.0, 0.0}});
    auto [loss, grad] = mse_loss(pred, target);
    CHECK(loss == doctest::Approx((1.0 + 4.0 + 0.0 + 1.0) / 2.0)); // n = 2 rows
    CHECK(grad(0, 0) == doctest::Approx(2.0 * 1.0 / 2.0));
    CHECK(grad(0, 1) == doctest::Approx(2.0 * 2.0 / 2.0));
    CHECK(grad(1, 1) == doctest::Approx(2.0 * -1.0 / 2.0));
    CHECK_FAILS_WITH(dimension_mismatch, mse_loss(pred, Matrix(1, 2)));
}

TEST_CASE("full network gradient matches central differences through the loss") {
    Rng rng(11);
    Network net = toy_classifier(rng);
    Matrix x(6, 2);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = rng.uniform(-1.5, 1.5);
    std::vector<int> labels = {0, 1, 0, 1, 1, 0};

    ForwardCache cache;
    Rng drop_rng(0);
    Matrix out = forward_train(net, x, 0.0, drop_rng, cache);
    auto [loss, grad] = cross_entropy_loss(out, labels);
    backward(net, cache, grad);

    // 20+ random parameter probes across both weight layers and biases.
    const double h = 1e-5;
    int probes = 0;
    for (std::size_t li : {std::size_t{0}, std::size_t{2}}) {
        Layer& layer = net.layers[li];
        for (int t = 0; t < 8; ++t) {
            const std::size_t i = rng.uniform_index(layer.w.rows());
            const std::size_t j = rng.uniform_index(layer.w.cols());
            Network up = net, dn = net;
            up.layers[li].w(i, j) += h;
            dn.layers[li].w(i, j) -= h;
            const double fd = (net_loss(up, x, labels) - net_loss(dn, x, labels)) / (2.0 * h);
            const double an = layer.gw(i, j);
            CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(fd), std::abs(an)) + 1e-8);
            ++probes;
        }
        for (int t = 0; t < 4; ++t) {
            const std::size_t j = rng.uniform_index(layer.b.cols());
            Network up = net, dn = net;
            up.layers[li].b(0, j) += h;
            dn.layers[li].b(0, j) -= h;
            const double fd = (net_loss(up, x, labels) - net_loss(dn, x, labels)) / (2.0 * h);
            const double an = layer.gb(0, j);
            CHECK(std::abs(fd - an) <= 1e-5 * std::max(std::abs(fd), std::abs(an)) + 1e-8);
            ++probes;
        }
    }
    CHECK(probes >= 20);
}

TEST_CASE("dropout scales survivors and never touches the output layer") {
    Rng rng(13);
    Network net = toy_classifier(rng);
    Matrix x(10, 2);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = rng.uniform(-1.0, 1.0);

    // p = 0 reproduces the evaluation pass exactly, with all-ones masks.
    ForwardCache cache;
    Rng d0(1);
    Matrix train_out = forward_train(net, x, 0.0, d0, cache);
    CHECK(testutil::max_abs_diff(train_out, forward(net, x)) == 0.0);
    for (const auto& mask : cache.dropout)
        for (std::size_t i = 0; i < mask.rows(); ++i)
            for (std::size_t j = 0; j < mask.cols(); ++j) CHECK(mask(i, j) == 1.0);

    // p = 0.4: kept entries carry 1/(1-p), dropped are 0, final layer exempt.
    const double p = 0.4;
    std::size_t zeros = 0, total = 0;
    double sum = 0.0;
    Rng d1(2);
    for (int rep = 0; rep < 200; ++rep) {
        ForwardCache c;
        forward_train(net, x, p, d1, c);
        REQUIRE(c.dropout.size() == net.layers.size());
        // Final layer mask is identity: no output dropout.
        const Matrix& last = c.dropout.back();
        for (std::size_t i = 0; i < last.rows(); ++i)
            for (std::size_t j = 0; j < last.cols(); ++j) CHECK(last(i, j) == 1.0);
        for (std::size_t li = 0; li + 1 < c.dropout.size(); ++li) {
            const Matrix& m = c.dropout[li];
            for (std::size_t i = 0; i < m.rows(); ++i)
                for (std::size_t j = 0; j < m.cols(); ++j) {
                    const double v = m(i, j);
                    const bool valid = v == 0.0 || std::abs(v - 1.0 / (1.0 - p)) < 1e-12;
                    CHECK(valid);
                    zeros += v == 0.0 ? 1 : 0;
                    sum += v;
                    ++total;
                }
        }
    }
    // Drop rate concentrates near p and the mask mean near 1 (unbiasedness).
    const double drop_rate = static_cast<double>(zeros) / static_cast<double>(total);
    CHECK(drop_rate == doctest::Approx(p).epsilon(0.05));
    CHECK(sum / static_cast<double>(total) == doctest::Approx(1.0).epsilon(0.02));

    Rng d2(3);
    ForwardCache c2;
    CHECK_FAILS_WITH(invalid_argument, forward_train(net, x, 1.0, d2, c2));
    CHECK_FAILS_WITH(invalid_argument, forward_train(net, x, -0.1, d2, c2));
}

TEST_CASE("training separates two distant blobs perfectly within 50 epochs") {
    Rng rng(17);
    Dataset data = blobs(120, rng);
    Network net = toy_classifier(rng);
    TrainConfig tc;
    tc.epochs = 50;
    tc.batch_size = 16;
    tc.lr = 0.01;
    tc.seed = 5;
    TrainingReport report = train(net, data, tc);
    CHECK(report.epoch_loss.size() == 50);
    CHECK(report.epoch_accuracy.size() == 50);
    CHECK(report.epoch_loss.front() > report.epoch_loss.back());
    CHECK(report.wall_seconds > 0.0);
    CHECK(evaluate(net, data).accuracy == doctest::Approx(1.0));
}

TEST_CASE("training is bit-reproducible for a fixed seed") {
    Rng r1(23), r2(23);
    Dataset data = blobs(60, r1);
    Network a = toy_classifier(r2);
    Network b = a; // identical start

    TrainConfig tc;
    tc.epochs = 8;
    tc.batch_size = 8;
    tc.dropout_p = 0.2; // exercises the rng path too
    tc.seed = 99;
    TrainingReport ra = train(a, data, tc);
    TrainingReport rb = train(b, data, tc);

    CHECK(ra.epoch_loss == rb.epoch_loss);
    CHECK(ra.epoch_accuracy == rb.epoch_accuracy);
    auto wa = snapshot_weights(a), wb = snapshot_weights(b);
    REQUIRE(wa.size() == wb.size());
    for (std::size_t i = 0; i < wa.size(); ++i) CHECK(wa[i] == wb[i]);

    // A different seed takes a different path.
    Network c = a;
    TrainConfig tc2 = tc;
    tc2.seed = 100;
    Network d = toy_classifier(r2);
    Network e = d;
    TrainingReport rd = train(d, data, tc);
    TrainingReport re = train(e, data, tc2);
    CHECK_FALSE(rd.epoch_loss == re.epoch_loss);
}

TEST_CASE("lr 0 and zero gradients leave parameters untouched") {
    Rng rng(29);
    Dataset data = blobs(40, rng);
    Network net = toy_classifier(rng);
    auto before = snapshot_weights(net);

    TrainConfig tc;
    tc.epochs = 3;
    tc.lr = 0.0;
    TrainingReport r = train(net, data, tc);
    auto after = snapshot_weights(net);
    for (std::size_t i = 0; i < before.size(); ++i) CHECK(before[i] == after[i]);

    // Adam with an exactly-zero gradient must not drift (regression target
    // equals the current output, so every batch gradient is zero).
    Network reg = toy_classifier(rng);
    Matrix x(12, 2);
    Rng xr(1);
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = xr.uniform(-1.0, 1.0);
    Matrix target = forward(reg, x);
    auto w0 = snapshot_weights(reg);
    TrainConfig tr;
    tr.epochs = 4;
    tr.batch_size = 12; // single full batch -> gradient is identically zero
    tr.lr = 0.05;
    train_regression(reg, x, target, tr);
    auto w1 = snapshot_weights(reg);
    for (std::size_t i = 0; i < w0.size(); ++i) CHECK(w0[i] == w1[i]);
}

TEST_CASE("optimizer steps match their closed forms") {
    Rng rng(31);

    // SGD: w <- w - lr * g exactly.
    Network net;
    net.layers.push_back(make_affine(2, 2, rng));
    Layer& l = net.layers[0];
    l.w = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    l.b = Matrix::from_rows({{0.5, -0.5}});
    l.gw = Matrix::from_rows({{1.0, -1.0}, {0.5, 0.0}});
    l.gb = Matrix::from_rows({{2.0, 0.0}});

    OptimizerConfig sgd;
    sgd.adam = false;
    sgd.lr = 0.1;
    Optimizer opt(sgd);
    opt.step(net);
    CHECK(l.w == Matrix::from_rows({{0.9, 2.1}, {2.95, 4.0}}));
    CHECK(l.b == Matrix::from_rows({{0.3, -0.5}}));
    CHECK(opt.steps_taken() == 1);

    // Adam's first step moves each coordinate by ~lr * sign(g).
    Layer& m = net.layers[0];
    m.w = Matrix::from_rows({{1.0, 2.0}, {3.0, 4.0}});
    m.gw = Matrix::from_rows({{0.3, -0.7}, {0.0, 5.0}});
    m.gb = Matrix(1, 2);
    OptimizerConfig ac;
    ac.adam = true;
    ac.lr = 0.01;
    Optimizer adam(ac);
    adam.step(net);
    CHECK(m.w(0, 0) == doctest::Approx(1.0 - 0.01).epsilon(1e-6));
    CHECK(m.w(0, 1) == doctest::Approx(2.0 + 0.01).epsilon(1e-6));
    CHECK(m.w(1, 0) == doctest::Approx(3.0)); // zero gradient coordinate
    CHECK(m.w(1, 1) == doctest::Approx(4.0 - 0.01).epsilon(1e-6));
}

TEST_CASE("decoupled weight decay shrinks weights, not biases") {
    Rng rng(37);
    Network net;
    net.layers.push_back(make_affine(2, 2, rng));
    Layer& l = net.layers[0];
    l.w = Matrix::from_rows({{1.0, -2.0}, {0.5, 3.0}});
    l.b = Matrix::from_rows({{0.7, -0.7}});
    l.gw = Matrix(2, 2); // zero data gradient isolates the decay term
    l.gb = Matrix(1, 2);

    OptimizerConfig cfg;
    cfg.adam = true;
    cfg.lr = 0.1;
    cfg.weight_decay = 0.1;
    Optimizer opt(cfg);

    Matrix prev = l.w;
    for (int step = 0; step < 5; ++step) {
        opt.step(net);
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j) {
                CHECK(std::abs(l.w(i, j)) < std::abs(prev(i, j)));
                CHECK(l.w(i, j) * prev(i, j) > 0.0); // decay never flips sign
            }
        prev = l.w;
    }
    CHECK(l.b == Matrix::from_rows({{0.7, -0.7}})); // biases exempt
}

TEST_CASE("train rejects bad configurations and data") {
    Rng rng(41);
    Dataset data = blobs(20, rng);
    Network net = toy_classifier(rng);

    TrainConfig bad_batch;
    bad_batch.batch_size = 0;
    CHECK_FAILS_WITH(invalid_argument, train(net, data, bad_batch));

    TrainConfig bad_opt;
    bad_opt.optimizer = "rmsprop";
    CHECK_FAILS_WITH(invalid_argument, train(net, data, bad_opt));

    Dataset empty;
    empty.features = Matrix(0, 2);
    CHECK_FAILS_WITH(invalid_argument, train(net, empty, TrainConfig{}));

    Matrix x(4, 2);
    Matrix target(3, 2);
    CHECK_FAILS_WITH(count_mismatch, train_regression(net, x, target, TrainConfig{}));

    // Divergence is reported with the epoch and batch, not returned as NaN.
    Network poisoned = toy_classifier(rng);
    TrainConfig huge;
    huge.epochs = 1;
    poisoned.layers[0].w(0, 0) = 1e308;
    poisoned.layers[2].w(0, 0) = 1e308;
    try {
        train(poisoned, data, huge);
        FAIL("expected divergence");
    } catch (const Error& e) {
        CHECK(e.code() == errc::non_finite);
        CHECK(std::string(e.what()).find("epoch") != std::string::npos);
    }
}

TEST_CASE("evaluate builds an exact confusion matrix and breaks ties low") {
    // A fixed network whose outputs we can enumerate: identity on 2 inputs.
    Network net;
    Layer id;
    id.kind = LayerKind::affine;
    id.w = Matrix::identity(2);
    id.b = Matrix(1, 2);
    net.layers.push_back(id);

    Dataset d;
    d.features = Matrix::from_rows({{2.0, 1.0},   // predicts 0
                                    {0.0, 3.0},   // predicts 1
                                    {1.0, 1.0},   // tie -> lowest class, 0
                                    {-1.0, 2.0}}); // predicts 1
    d.labels = {0, 1, 1, 0};

    EvalResult r = evaluate(net, d);
    CHECK(r.predictions == std::vector<int>{0, 1, 0, 1});
    CHECK(r.accuracy == doctest::Approx(0.5));
    REQUIRE(r.confusion.rows() == 2);
    // Row = true label, column = prediction.
    CHECK(r.confusion(0, 0) == 1.0);
    CHECK(r.confusion(0, 1) == 1.0);
    CHECK(r.confusion(1, 0) == 1.0);
    CHECK(r.confusion(1, 1) == 1.0);

    // Row sums equal the per-class sample counts.
    for (std::size_t c = 0; c < 2; ++c) {
        double sum = 0.0;
        for (std::size_t j = 0; j < 2; ++j) sum += r.confusion(c, j);
        CHECK(sum == 2.0);
    }

    Dataset out_of_range = d;
    out_of_range.labels = {0, 1, 2, 0};
    CHECK_FAILS_WITH(label_out_of_range, evaluate(net, out_of_range));
}

TEST_CASE("evaluate agrees between large parallel batches and tiny ones") {
    Rng rng(43);
    Dataset data = gen_gaussian_mixture(1200, {{-2, 0}, {2, 0}, {0, 2}}, 1.0, rng);
    Network net;
    net.layers.push_back(make_affine(2, 16, rng));
    net.layers.push_back(make_leaky_relu(0.01));
    net.layers.push_back(make_affine(16, 3, rng));

    EvalResult full = evaluate(net, data);
    // Reference: row-by-row argmax over the plain forward pass.
    std::size_t agree = 0;
    Matrix out = forward(net, data.features);
    for (std::size_t i = 0; i < data.size(); ++i) {
        int arg = 0;
        for (std::size_t j = 1; j < 3; ++j)
            if (out(i, j) > out(i, static_cast<std::size_t>(arg))) arg = static_cast<int>(j);
        if (arg == full.predictions[i]) ++agree;
    }
    CHECK(agree == data.size());
}

TEST_CASE("apply_masks zeroes exactly the masked weights") {
    Rng rng(47);
    Network net = toy_classifier(rng);
    Layer& l = net.layers[0];
    l.mask = Matrix(l.w.rows(), l.w.cols(), 1.0);
    l.mask(0, 0) = 0.0;
    l.mask(1, 3) = 0.0;
    const double keep = l.w(0, 1);
    apply_masks(net);
    CHECK(l.w(0, 0) == 0.0);
    CHECK(l.w(1, 3) == 0.0);
    CHECK(l.w(0, 1) == keep);
}

TEST_CASE("model files round-trip networks exactly") {
    Rng rng(53);
    Network net;
    net.layers.push_back(make_polynomial(2, 6, 2, rng));
    net.layers.push_back(make_leaky_relu(0.05));
    net.layers.push_back(make_affine(6, 3, rng));
    net.layers[2].mask = Matrix(6, 3, 1.0);
    net.layers[2].mask(0, 0) = 0.0;
    net.layers[2].w(0, 0) = 0.0;

    auto path = testutil::scratch_path("net.json");
    save_network(net, path);
    Network loaded = load_network(path);

    REQUIRE(loaded.layers.size() == net.layers.size());
    for (std::size_t i = 0; i < net.layers.size(); ++i) {
        CHECK(loaded.layers[i].kind == net.layers[i].kind);
        CHECK(loaded.layers[i].w == net.layers[i].w);
        CHECK(loaded.layers[i].b == net.layers[i].b);
        CHECK(loaded.layers[i].mask == net.layers[i].mask);
        CHECK(loaded.layers[i].alpha == net.layers[i].alpha);
        CHECK(loaded.layers[i].degree == net.layers[i].degree);
    }

    // Identical predictions bit-for-bit.
    Matrix x(5, 2);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 2; ++j) x(i, j) = rng.uniform(-1.0, 1.0);
    CHECK(testutil::max_abs_diff(forward(net, x), forward(loaded, x)) == 0.0);
    std::remove(path.c_str());
}

TEST_CASE("model loader rejects wrong files with precise errors") {
    CHECK_FAILS_WITH(io_error, load_network("/nonexistent/net.json"));

    auto path = testutil::scratch_path("bad.json");
    {
        std::ofstream f(path);
        f << "{ not json";
    }
    CHECK_FAILS_WITH(parse_error, load_network(path));

    {
        std::ofstream f(path);
        f << "{\"format\":\"something-else\",\"version\":\"1.0.0\"}";
    }
    CHECK_FAILS_WITH(bad_magic, load_network(path));

    {
        std::ofstream f(path);
        f << "{\"format\":\"geonet-model\",\"version\":\"2.0.0\",\"kind\":\"network\"}";
    }
    CHECK_FAILS_WITH(version_mismatch, load_network(path));
    std::remove(path.c_str());

    // A projection file is not a network file.
    Rng rng(59);
    Matrix data(10, 3);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 3; ++j) data(i, j) = rng.uniform(0.0, 1.0);
    auto pca_path = testutil::scratch_path("pca.json");
    save_pca(pca_fit(data, 2), pca_path);
    CHECK_FAILS_WITH(invalid_argument, load_network(pca_path));
    CHECK(load_pca(pca_path).k() == 2); // while the right loader accepts it
    std::remove(pca_path.c_str());
}
