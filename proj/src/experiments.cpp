#include "geonet/experiments.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "geonet/dimred.hpp"
#include "geonet/error.hpp"
#include "geonet/idx.hpp"
#include "geonet/pruning.hpp"
#include "geonet/version.hpp"

namespace geonet {

namespace {

using nlohmann::json;

Dataset make_2d_dataset(const std::string& name, std::size_t n, Rng& rng) {
    if (name == "xor") return gen_xor(n, 0.1, rng);
    if (name == "circles") return gen_circles(n, 0.5, 1.0, 0.05, rng);
    if (name == "moons") return gen_moons(n, 0.05, rng);
    fail(errc::parse_error, "unknown dataset '" + name + "' (expected xor|circles|moons)");
}

json train_config_json(const TrainConfig& tc) {
    return {{"epochs", tc.epochs},       {"batch_size", tc.batch_size},
            {"optimizer", tc.optimizer}, {"lr", tc.lr},
            {"weight_decay", tc.weight_decay}, {"dropout_p", tc.dropout_p}};
}

json environment_json(std::uint64_t seed) {
    return {{"version", kVersion}, {"seed", seed}};
}

std::size_t parse_count_arg(const std::string& method, const std::string& arg) {
    std::size_t pos = 0;
    std::size_t value = 0;
    try {
        value = std::stoul(arg, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != arg.size() || value == 0) {
        fail(errc::parse_error, "bad count in method '" + method + "'");
    }
    return value;
}

double parse_fraction_arg(const std::string& method, const std::string& arg) {
    std::size_t pos = 0;
    double value = 0.0;
    try {
        value = std::stod(arg, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != arg.size() || !(value >= 0.0 && value <= 1.0)) {
        fail(errc::parse_error, "bad fraction in method '" + method + "'");
    }
    return value;
}

Network make_mlp(std::size_t in, std::size_t hidden, std::size_t out, Rng& rng) {
    Network net;
    net.layers.push_back(make_affine(in, hidden, rng));
    net.layers.push_back(make_leaky_relu(0.01));
    net.layers.push_back(make_affine(hidden, out, rng));
    return net;
}

std::size_t count_zero_weights(const Network& net) {
    std::size_t zeros = 0;
    for (const Layer& l : net.layers) {
        if (!l.has_weights()) continue;
        for (std::size_t e = 0; e < l.w.size(); ++e) {
            if (l.w.data()[e] == 0.0) ++zeros;
        }
    }
    return zeros;
}

} // namespace

json ExperimentReport::to_json() const {
    json doc;
    doc["name"] = name;
    doc["config"] = config;
    doc["metrics"] = metrics;
    doc["environment"] = environment;
    return doc;
}

Network make_reference_net(const ActivationSpec& spec, const Dataset& train, Rng& rng) {
    constexpr std::size_t kHidden = 16;
    Network net;
    switch (spec.kind) {
    case LayerKind::polynomial:
        net.layers.push_back(make_polynomial(train.dim(), kHidden, spec.degree, rng));
        net.layers.push_back(make_leaky_relu(0.01));
        net.layers.push_back(make_affine(kHidden, 2, rng));
        break;
    case LayerKind::rbf:
        net.layers.push_back(make_rbf(train, spec.n_units, 2, rng));
        break;
    case LayerKind::leaky_relu:
    case LayerKind::parametric_relu:
        net.layers.push_back(make_affine(train.dim(), kHidden, rng));
        net.layers.push_back(spec.kind == LayerKind::leaky_relu
                                 ? make_leaky_relu(spec.alpha)
                                 : make_parametric_relu(spec.alpha));
        net.layers.push_back(make_affine(kHidden, 2, rng));
        break;
    default:
        fail(errc::invalid_argument, "no reference architecture for affine spec");
    }
    return net;
}

std::string decision_grid_csv(const Network& net, const Dataset& data, std::size_t grid) {
    if (data.dim() != 2) {
        fail(errc::invalid_argument, "decision grid requires 2-d features");
    }
    if (grid < 2) fail(errc::invalid_argument, "grid resolution must be >= 2");
    double lo[2];
    double hi[2];
    for (std::size_t d = 0; d < 2; ++d) {
        lo[d] = data.features(0, d);
        hi[d] = data.features(0, d);
        for (std::size_t i = 1; i < data.size(); ++i) {
            lo[d] = std::min(lo[d], data.features(i, d));
            hi[d] = std::max(hi[d], data.features(i, d));
        }
    }

    Matrix points(grid * grid, 2);
    for (std::size_t i = 0; i < grid; ++i) {
        const double x0 = lo[0] + (hi[0] - lo[0]) * static_cast<double>(i) /
                                      static_cast<double>(grid - 1);
        for (std::size_t j = 0; j < grid; ++j) {
            const double x1 = lo[1] + (hi[1] - lo[1]) * static_cast<double>(j) /
                                          static_cast<double>(grid - 1);
            points(i * grid + j, 0) = x0;
            points(i * grid + j, 1) = x1;
        }
    }
    const Matrix out = forward(net, points);

    std::ostringstream csv;
    csv << "x0,x1,label\n";
    for (std::size_t r = 0; r < out.rows(); ++r) {
        std::size_t best = 0;
        for (std::size_t c = 1; c < out.cols(); ++c) {
            if (out(r, c) > out(r, best)) best = c;
        }
        csv << points(r, 0) << ',' << points(r, 1) << ',' << best << '\n';
    }
    return csv.str();
}

ExperimentReport run_activation_experiment(const ActivationExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    const ActivationSpec spec = parse_activation_spec(cfg.activation);
    Rng rng(cfg.seed);
    const Dataset data = make_2d_dataset(cfg.dataset, cfg.n, rng);
    const auto [train_set, test_set] = split(data, cfg.train_fraction, rng);

    Network net = make_reference_net(spec, train_set, rng);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    const TrainingReport tr = train(net, train_set, tc);
    const EvalResult on_train = evaluate(net, train_set);
    const EvalResult on_test = evaluate(net, test_set);

    ExperimentReport report;
    report.name = "activation-" + cfg.dataset + "-" + cfg.activation;
    report.config = {{"experiment", "activation"},
                     {"dataset", cfg.dataset},
                     {"activation", cfg.activation},
                     {"n", cfg.n},
                     {"train_fraction", cfg.train_fraction},
                     {"seed", cfg.seed},
                     {"grid", cfg.grid},
                     {"train", train_config_json(tc)}};
    report.metrics = {
        {"train_accuracy", on_train.accuracy},
        {"test_accuracy", on_test.accuracy},
        {"final_loss", tr.epoch_loss.empty() ? 0.0 : tr.epoch_loss.back()},
        {"epochs_run", tr.epoch_loss.size()},
        {"train_wall_seconds", tr.wall_seconds},
        {"total_wall_seconds",
         std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count()}};
    report.environment = environment_json(cfg.seed);
    report.grid_csv = decision_grid_csv(net, data, cfg.grid);
    return report;
}

ExperimentReport run_dimred_experiment(const DimredExperimentConfig& cfg) {
    const auto t0 = std::chrono::steady_clock::now();
    if (cfg.train_images.empty() || cfg.train_labels.empty() || cfg.test_images.empty() ||
        cfg.test_labels.empty()) {
        fail(errc::invalid_argument,
             "image data paths are required (set GEONET_DATA_DIR or pass --data-dir)");
    }

    std::string kind = cfg.method;
    std::string arg;
    if (const auto colon = cfg.method.find(':'); colon != std::string::npos) {
        kind = cfg.method.substr(0, colon);
        arg = cfg.method.substr(colon + 1);
    }
    if (kind != "baseline" && kind != "pca" && kind != "ae" && kind != "prune") {
        fail(errc::parse_error, "unknown method '" + cfg.method +
                                    "' (expected baseline|pca:<k>|ae:<latent>|prune:<f>)");
    }
    if (kind == "baseline" && !arg.empty()) {
        fail(errc::parse_error, "method 'baseline' takes no argument");
    }

    const Dataset train_set = load_idx(cfg.train_images, cfg.train_labels, cfg.train_cap);
    const Dataset test_set = load_idx(cfg.test_images, cfg.test_labels, cfg.test_cap);

    Rng rng(cfg.seed);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.seed;
    constexpr std::size_t kHidden = 128;
    constexpr std::size_t kClasses = 10;

    ExperimentReport report;
    report.name = "dimred-" + cfg.method;
    report.config = {{"experiment", "dimred"},
                     {"method", cfg.method},
                     {"train_images", cfg.train_images},
                     {"train_labels", cfg.train_labels},
                     {"test_images", cfg.test_images},
                     {"test_labels", cfg.test_labels},
                     {"train_cap", cfg.train_cap},
                     {"test_cap", cfg.test_cap},
                     {"seed", cfg.seed},
                     {"fine_tune_epochs", cfg.fine_tune_epochs},
                     {"ae_epochs", cfg.ae_epochs},
                     {"train", train_config_json(tc)}};
    report.environment = environment_json(cfg.seed);

    json metrics;
    metrics["train_samples"] = train_set.size();
    metrics["test_samples"] = test_set.size();

    if (kind == "baseline") {
        Network net = make_mlp(train_set.dim(), kHidden, kClasses, rng);
        const TrainingReport tr = train(net, train_set, tc);
        metrics["test_accuracy"] = evaluate(net, test_set).accuracy;
        metrics["final_loss"] = tr.epoch_loss.back();
        metrics["train_wall_seconds"] = tr.wall_seconds;
        metrics["input_dim"] = train_set.dim();
    } else if (kind == "pca") {
        const std::size_t k = parse_count_arg(cfg.method, arg);
        const PCAModel model = pca_fit(train_set.features, k);
        Dataset red_train{pca_transform(model, train_set.features), train_set.labels,
                          train_set.name};
        Dataset red_test{pca_transform(model, test_set.features), test_set.labels,
                         test_set.name};
        Network net = make_mlp(k, kHidden, kClasses, rng);
        const TrainingReport tr = train(net, red_train, tc);
        metrics["test_accuracy"] = evaluate(net, red_test).accuracy;
        metrics["final_loss"] = tr.epoch_loss.back();
        metrics["train_wall_seconds"] = tr.wall_seconds;
        metrics["components"] = k;
        metrics["explained_variance_ratio"] = model.explained_variance_ratio();
    } else if (kind == "ae") {
        const std::size_t latent = parse_count_arg(cfg.method, arg);
        Autoencoder ae = make_autoencoder(train_set.dim(), kHidden, latent, rng);
        TrainConfig ae_tc = tc;
        ae_tc.epochs = cfg.ae_epochs;
        const TrainingReport ae_tr = ae_train(ae, train_set.features, ae_tc);
        Dataset red_train{ae_encode(ae, train_set.features), train_set.labels,
                          train_set.name};
        Dataset red_test{ae_encode(ae, test_set.features), test_set.labels, test_set.name};
        Network net = make_mlp(latent, kHidden, kClasses, rng);
        const TrainingReport tr = train(net, red_train, tc);
        metrics["test_accuracy"] = evaluate(net, red_test).accuracy;
        metrics["final_loss"] = tr.epoch_loss.back();
        metrics["train_wall_seconds"] = tr.wall_seconds + ae_tr.wall_seconds;
        metrics["latent_dim"] = latent;
        metrics["reconstruction_error"] = reconstruction_error(
            test_set.features, ae_decode(ae, ae_encode(ae, test_set.features)));
    } else { // prune
        const double fraction = parse_fraction_arg(cfg.method, arg);
        Network net = make_mlp(train_set.dim(), kHidden, kClasses, rng);
        const TrainingReport tr = train(net, train_set, tc);
        const double baseline_accuracy = evaluate(net, test_set).accuracy;
        const SensitivityReport sens = layer_sensitivity(net, test_set);
        json sens_rows = json::array();
        for (const LayerAblation& la : sens.layers) {
            sens_rows.push_back({{"layer", la.layer},
                                 {"kind", la.kind},
                                 {"ablatable", la.ablatable},
                                 {"baseline_accuracy", la.baseline_accuracy},
                                 {"ablated_accuracy", la.ablated_accuracy},
                                 {"accuracy_drop", la.drop}});
        }
        metrics["sensitivity"] = std::move(sens_rows);
        const PruneMask mask = magnitude_prune(net, fraction);
        TrainConfig ft = tc;
        ft.epochs = cfg.fine_tune_epochs;
        const TrainingReport ftr = fine_tune(net, mask, train_set, ft);
        metrics["test_accuracy"] = evaluate(net, test_set).accuracy;
        metrics["baseline_accuracy"] = baseline_accuracy;
        metrics["fraction"] = fraction;
        metrics["mask_zeros"] = mask.zeros();
        metrics["mask_total"] = mask.total();
        metrics["weight_zeros"] = count_zero_weights(net);
        metrics["final_loss"] = ftr.epoch_loss.empty() ? tr.epoch_loss.back()
                                                       : ftr.epoch_loss.back();
        metrics["train_wall_seconds"] = tr.wall_seconds + ftr.wall_seconds;
    }

    metrics["total_wall_seconds"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report.metrics = std::move(metrics);
    return report;
}

} // namespace geonet
