// Unified command-line interface: graph generation, gap encoding, scalability
// benchmarks, activation/dimensionality experiments, pruning, and graph
// metrics. Exit codes: 0 success, 1 usage error, 2 runtime failure.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "geonet/bench.hpp"
#include "geonet/error.hpp"
#include "geonet/experiments.hpp"
#include "geonet/gapcode.hpp"
#include "geonet/graph.hpp"
#include "geonet/graph_metrics.hpp"
#include "geonet/version.hpp"

namespace {

using namespace geonet;

bool has_extension(const std::string& path, const std::string& ext) {
    return path.size() >= ext.size() &&
           path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
}

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out << content;
    if (!out) fail(errc::io_error, "short write to '" + path + "'");
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(errc::io_error, "cannot open '" + path + "' for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(errc::io_error, "short write to '" + path + "'");
}

std::string default_data_dir() {
    const char* env = std::getenv("GEONET_DATA_DIR");
    return env == nullptr ? std::string() : std::string(env);
}

struct DataPaths {
    std::string train_images, train_labels, test_images, test_labels;
};

DataPaths mnist_paths(const std::string& dir) {
    if (dir.empty()) {
        fail(errc::invalid_argument,
             "no data directory: pass --data-dir or set GEONET_DATA_DIR");
    }
    return {dir + "/train-images-idx3-ubyte", dir + "/train-labels-idx1-ubyte",
            dir + "/t10k-images-idx3-ubyte", dir + "/t10k-labels-idx1-ubyte"};
}

// Shared flag values, bound before parsing.
struct Args {
    // gen-graph
    std::string model = "er";
    std::size_t n = 100;
    double p = 0.05;
    std::size_t k_ring = 6;
    double beta = 0.1;
    std::size_t m_attach = 2;
    // encode
    std::string in_path;
    std::string partition = "range";
    unsigned workers = 0;
    // bench
    std::vector<std::size_t> sizes{100, 500, 1000, 2000, 5000};
    std::size_t repeats = 3;
    std::vector<unsigned> bench_workers;
    std::size_t adjacency_cap = 20000;
    // train
    std::string dataset = "xor";
    std::string activation = "poly:2";
    std::size_t points = 600;
    double train_fraction = 0.75;
    std::size_t grid = 200;
    std::string grid_out;
    // dimred / prune
    std::string method = "baseline";
    std::string data_dir = default_data_dir();
    std::size_t train_cap = 10000;
    std::size_t test_cap = 2000;
    double fraction = 0.5;
    std::size_t fine_tune_epochs = 2;
    std::size_t ae_epochs = 5;
    // training hyper-parameters
    std::size_t epochs = 500;
    std::size_t batch = 32;
    std::string optimizer = "adam";
    double lr = 1e-3;
    double weight_decay = 0.0;
    double dropout = 0.0;
    // metrics
    int threads = 0;
    // shared
    std::uint64_t seed = 0;
    std::string out_path;
};

TrainConfig train_config(const Args& a) {
    TrainConfig tc;
    tc.epochs = a.epochs;
    tc.batch_size = a.batch;
    tc.optimizer = a.optimizer;
    tc.lr = a.lr;
    tc.weight_decay = a.weight_decay;
    tc.dropout_p = a.dropout;
    tc.seed = a.seed;
    return tc;
}

int run_gen_graph(const Args& a) {
    Rng rng(a.seed);
    Graph g;
    if (a.model == "er") {
        g = gen_er(a.n, a.p, rng);
    } else if (a.model == "ws") {
        g = gen_ws(a.n, a.k_ring, a.beta, rng);
    } else { // "ba" enforced by the flag's value check
        g = gen_ba(a.n, a.m_attach, rng);
    }
    save_edge_list(g, a.out_path);
    std::cout << "model=" << a.model << " nodes=" << g.node_count()
              << " edges=" << g.edge_count() << " -> " << a.out_path << "\n";
    return 0;
}

int run_encode(const Args& a) {
    const EdgeListLoad loaded = load_edge_list(a.in_path);
    const Partition part = make_partition(loaded.graph, a.partition, a.seed);
    const GapEncodedGraph enc =
        a.workers > 0 ? encode_parallel(loaded.graph, part, static_cast<int>(a.workers))
                      : encode(loaded.graph, part);
    const std::vector<std::uint8_t> bytes = serialize(enc);
    std::size_t inter = 0;
    for (const auto& group : enc.inter) inter += group.edges.size();
    if (!a.out_path.empty()) write_bytes(a.out_path, bytes);
    std::cout << "nodes=" << loaded.graph.node_count()
              << " edges=" << loaded.graph.edge_count() << " clusters=" << enc.clusters.size()
              << " bytes=" << bytes.size() << " inter_edges=" << inter;
    if (!a.out_path.empty()) std::cout << " -> " << a.out_path;
    std::cout << "\n";
    return 0;
}

int run_bench(const Args& a) {
    BenchConfig config;
    config.sizes = a.sizes;
    config.p = a.p;
    config.repeats = a.repeats;
    config.partition_strategy = a.partition;
    config.seed = a.seed;
    config.workers = a.bench_workers;
    config.adjacency_cap = a.adjacency_cap;
    const std::vector<BenchRecord> records = bench_scalability(config);
    if (a.out_path.empty() || has_extension(a.out_path, ".csv")) {
        const std::string csv = bench_csv(records);
        if (a.out_path.empty()) {
            std::cout << csv;
        } else {
            write_text(a.out_path, csv);
        }
    } else if (has_extension(a.out_path, ".json")) {
        write_text(a.out_path, bench_json(config, records));
    } else {
        fail(errc::invalid_argument, "--out must end in .csv or .json");
    }
    return 0;
}

int run_train(const Args& a) {
    ActivationExperimentConfig cfg;
    cfg.dataset = a.dataset;
    cfg.activation = a.activation;
    cfg.n = a.points;
    cfg.train_fraction = a.train_fraction;
    cfg.seed = a.seed;
    cfg.train = train_config(a);
    cfg.grid = a.grid;
    const ExperimentReport report = run_activation_experiment(cfg);
    if (a.out_path.empty()) {
        std::cout << report.to_json_string();
    } else if (has_extension(a.out_path, ".json")) {
        write_text(a.out_path, report.to_json_string());
    } else if (has_extension(a.out_path, ".csv")) {
        write_text(a.out_path, report.grid_csv);
    } else {
        fail(errc::invalid_argument, "--out must end in .csv or .json");
    }
    if (!a.grid_out.empty()) write_text(a.grid_out, report.grid_csv);
    return 0;
}

int run_dimred_like(const Args& a, const std::string& method) {
    DimredExperimentConfig cfg;
    cfg.method = method;
    const DataPaths paths = mnist_paths(a.data_dir);
    cfg.train_images = paths.train_images;
    cfg.train_labels = paths.train_labels;
    cfg.test_images = paths.test_images;
    cfg.test_labels = paths.test_labels;
    cfg.train_cap = a.train_cap;
    cfg.test_cap = a.test_cap;
    cfg.seed = a.seed;
    cfg.train = train_config(a);
    cfg.fine_tune_epochs = a.fine_tune_epochs;
    cfg.ae_epochs = a.ae_epochs;
    const ExperimentReport report = run_dimred_experiment(cfg);
    if (a.out_path.empty()) {
        std::cout << report.to_json_string();
    } else if (has_extension(a.out_path, ".json")) {
        write_text(a.out_path, report.to_json_string());
    } else {
        fail(errc::invalid_argument, "--out must end in .json");
    }
    return 0;
}

int run_metrics(const Args& a) {
    const EdgeListLoad loaded = load_edge_list(a.in_path);
    const Graph& g = loaded.graph;
    const double cc = clustering_coefficient(g);
    const PathLengthStats apl = average_path_length(g, a.threads);
    nlohmann::json doc;
    doc["nodes"] = g.node_count();
    doc["edges"] = g.edge_count();
    doc["clustering_coefficient"] = cc;
    doc["average_path_length"] = apl.value;
    doc["reachable_pairs"] = apl.reachable_pairs;
    doc["total_pairs"] = apl.total_pairs;
    doc["reachable_fraction"] = apl.reachable_fraction();
    if (a.out_path.empty() || has_extension(a.out_path, ".json")) {
        const std::string text = doc.dump(2) + "\n";
        if (a.out_path.empty()) {
            std::cout << text;
        } else {
            write_text(a.out_path, text);
        }
    } else if (has_extension(a.out_path, ".csv")) {
        std::ostringstream csv;
        csv << "nodes,edges,clustering_coefficient,average_path_length,reachable_pairs,"
               "total_pairs\n"
            << g.node_count() << ',' << g.edge_count() << ',' << cc << ',' << apl.value
            << ',' << apl.reachable_pairs << ',' << apl.total_pairs << "\n";
        write_text(a.out_path, csv.str());
    } else {
        fail(errc::invalid_argument, "--out must end in .csv or .json");
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"geonet: geometric network optimization toolkit"};
    app.failure_message(CLI::FailureMessage::help);
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1);

    Args a;

    CLI::App* gen = app.add_subcommand("gen-graph", "Generate a random graph as an edge list");
    gen->add_option("--model", a.model, "Graph model")
        ->check(CLI::IsMember({"er", "ws", "ba"}))
        ->capture_default_str();
    gen->add_option("--n", a.n, "Node count")->required()->check(CLI::PositiveNumber);
    gen->add_option("--p", a.p, "Edge probability (er)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--k", a.k_ring, "Ring degree (ws, even)")->capture_default_str();
    gen->add_option("--beta", a.beta, "Rewiring probability (ws)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    gen->add_option("--m", a.m_attach, "Edges per new node (ba)")->capture_default_str();
    gen->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    gen->add_option("--out", a.out_path, "Output edge-list path")->required();

    CLI::App* enc = app.add_subcommand("encode", "Gap-encode a graph");
    enc->add_option("--in", a.in_path, "Input edge-list path")->required();
    enc->add_option("--partition", a.partition, "range | range:<k> | louvain")
        ->capture_default_str();
    enc->add_option("--workers", a.workers, "Encode with this many parallel workers");
    enc->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    enc->add_option("--out", a.out_path, "Output binary path");

    CLI::App* bench = app.add_subcommand("bench", "Scalability benchmark over graph sizes");
    bench->add_option("--sizes", a.sizes, "Comma-separated graph sizes")
        ->delimiter(',')
        ->capture_default_str();
    bench->add_option("--p", a.p, "Edge probability")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    bench->add_option("--repeats", a.repeats, "Timed runs per measurement")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    bench->add_option("--partition", a.partition, "range | range:<k> | louvain")
        ->capture_default_str();
    bench->add_option("--workers", a.bench_workers,
                      "Also time parallel encoding with these worker counts")
        ->delimiter(',');
    bench->add_option("--cap", a.adjacency_cap, "Skip adjacency baseline above this n")
        ->capture_default_str();
    bench->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    bench->add_option("--out", a.out_path, "Report path (.csv or .json; default stdout CSV)");

    CLI::App* train = app.add_subcommand("train", "Train on a 2-d dataset, report accuracy "
                                                  "and the decision boundary");
    train->add_option("--dataset", a.dataset, "xor | circles | moons")
        ->required()
        ->check(CLI::IsMember({"xor", "circles", "moons"}));
    train->add_option("--activation", a.activation,
                      "poly:<d> | rbf:<units> | lrelu:<alpha> | prelu")
        ->required();
    train->add_option("--points", a.points, "Dataset size before split")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_option("--train-fraction", a.train_fraction, "Training split fraction")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    train->add_option("--epochs", a.epochs, "Training epochs")->capture_default_str();
    train->add_option("--batch", a.batch, "Batch size")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    train->add_option("--optimizer", a.optimizer, "adam | sgd")
        ->check(CLI::IsMember({"adam", "sgd"}))
        ->capture_default_str();
    train->add_option("--lr", a.lr, "Learning rate")->capture_default_str();
    train->add_option("--weight-decay", a.weight_decay, "Decoupled weight decay")
        ->capture_default_str();
    train->add_option("--dropout", a.dropout, "Dropout probability")
        ->check(CLI::Range(0.0, 0.999))
        ->capture_default_str();
    train->add_option("--grid", a.grid, "Decision-boundary grid resolution")
        ->capture_default_str();
    train->add_option("--seed", a.seed, "Random seed")->capture_default_str();
    train->add_option("--out", a.out_path,
                      "Report path (.json = metrics, .csv = boundary grid)");
    train->add_option("--grid-out", a.grid_out, "Also write the boundary grid CSV here");

    CLI::App* dimred = app.add_subcommand("dimred", "Image-classification pipeline with "
                                                    "optional reduction or pruning");
    dimred->add_option("--method", a.method, "baseline | pca:<k> | ae:<latent> | prune:<f>")
        ->required();
    CLI::App* prune = app.add_subcommand("prune", "Magnitude-prune a trained classifier, "
                                                  "fine-tune, and report");
    prune->add_option("--fraction", a.fraction, "Fraction of weights to prune")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    for (CLI::App* sub : {dimred, prune}) {
        sub->add_option("--data-dir", a.data_dir,
                        "Directory with IDX files (default $GEONET_DATA_DIR)");
        sub->add_option("--train-cap", a.train_cap, "Max training samples (0 = all)")
            ->capture_default_str();
        sub->add_option("--test-cap", a.test_cap, "Max test samples (0 = all)")
            ->capture_default_str();
        sub->add_option("--epochs", a.epochs, "Training epochs")->capture_default_str();
        sub->add_option("--batch", a.batch, "Batch size")
            ->check(CLI::PositiveNumber)
            ->capture_default_str();
        sub->add_option("--optimizer", a.optimizer, "adam | sgd")
            ->check(CLI::IsMember({"adam", "sgd"}))
            ->capture_default_str();
        sub->add_option("--lr", a.lr, "Learning rate")->capture_default_str();
        sub->add_option("--fine-tune-epochs", a.fine_tune_epochs,
                        "Fine-tuning epochs after pruning")
            ->capture_default_str();
        sub->add_option("--seed", a.seed, "Random seed")->capture_default_str();
        sub->add_option("--out", a.out_path, "Report path (.json; default stdout)");
    }
    dimred->add_option("--ae-epochs", a.ae_epochs, "Autoencoder pre-training epochs")
        ->capture_default_str();

    CLI::App* metrics = app.add_subcommand("metrics", "Clustering coefficient and average "
                                                      "path length of a graph");
    metrics->add_option("--in", a.in_path, "Input edge-list path")->required();
    metrics->add_option("--threads", a.threads, "BFS threads (0 = all available)")
        ->capture_default_str();
    metrics->add_option("--out", a.out_path, "Report path (.json or .csv; default stdout)");

    // Per-pipeline training defaults: the 2-d experiments run 500 epochs with
    // a 0.01 step size; the image pipelines run 10 epochs at 1e-3, batch 64.
    train->parse_complete_callback([&] {
        if (train->count("--lr") == 0) a.lr = 0.01;
    });
    dimred->parse_complete_callback([&] {
        if (dimred->count("--epochs") == 0) a.epochs = 10;
        if (dimred->count("--batch") == 0) a.batch = 64;
    });
    prune->parse_complete_callback([&] {
        if (prune->count("--epochs") == 0) a.epochs = 10;
        if (prune->count("--batch") == 0) a.batch = 64;
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    // Report-path extensions are part of the CLI contract: reject them as
    // usage errors before doing any work.
    if (!a.out_path.empty()) {
        const bool csv_ok = *bench || *train || *metrics;
        const bool json_ok = *bench || *train || *dimred || *prune || *metrics;
        const bool is_csv = has_extension(a.out_path, ".csv");
        const bool is_json = has_extension(a.out_path, ".json");
        if ((*bench || *train || *dimred || *prune || *metrics) &&
            !((csv_ok && is_csv) || (json_ok && is_json))) {
            std::cerr << "--out must end in " << (csv_ok ? ".csv or .json" : ".json")
                      << "\n";
            return 1;
        }
    }

    try {
        if (*gen) return run_gen_graph(a);
        if (*enc) return run_encode(a);
        if (*bench) return run_bench(a);
        if (*train) return run_train(a);
        if (*dimred) return run_dimred_like(a, a.method);
        if (*prune) {
            std::ostringstream method;
            method << "prune:" << a.fraction;
            return run_dimred_like(a, method.str());
        }
        if (*metrics) return run_metrics(a);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
