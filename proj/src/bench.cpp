#include "geonet/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "json.hpp"

#include "geonet/error.hpp"
#include "geonet/gapcode.hpp"
#include "geonet/rng.hpp"
#include "geonet/version.hpp"

namespace geonet {

namespace {

constexpr std::size_t kWarmupRuns = 1;

double median_ms(std::vector<double> samples) {
    std::sort(samples.begin(), samples.end());
    const std::size_t m = samples.size() / 2;
    if (samples.size() % 2 == 1) return samples[m];
    return 0.5 * (samples[m - 1] + samples[m]);
}

template <typename Fn>
double time_median_ms(std::size_t repeats, Fn&& fn) {
    for (std::size_t i = 0; i < kWarmupRuns; ++i) fn();
    std::vector<double> samples;
    samples.reserve(repeats);
    for (std::size_t i = 0; i < repeats; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        samples.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return median_ms(std::move(samples));
}

std::size_t count_inter_edges(const GapEncodedGraph& e) {
    std::size_t total = 0;
    for (const auto& group : e.inter) total += group.edges.size();
    return total;
}

std::string format_double(double v) {
    std::ostringstream out;
    out << v;
    return out.str();
}

} // namespace

std::size_t adjacency_matrix_bytes(std::size_t n) {
    const std::size_t pairs = n * (n - 1) / 2;
    return (pairs + 7) / 8 + 16;
}

std::vector<std::uint8_t> adjacency_encode(const Graph& g) {
    const std::size_t n = g.node_count();
    if (n > 0 && g.nodes().back() != n - 1) {
        fail(errc::invalid_argument, "adjacency baseline requires node ids 0..n-1");
    }
    std::vector<std::uint8_t> out(adjacency_matrix_bytes(n), 0);
    out[0] = 'G';
    out[1] = 'A';
    out[2] = 'M';
    out[3] = '1';
    for (int i = 0; i < 8; ++i) {
        out[8 + i] = static_cast<std::uint8_t>((static_cast<std::uint64_t>(n) >> (8 * i)) & 0xff);
    }
    for (const Edge& e : g.edges()) {
        const std::size_t u = e.first;
        const std::size_t v = e.second;
        const std::size_t bit = u * n - u * (u + 1) / 2 + (v - u - 1);
        out[16 + bit / 8] |= static_cast<std::uint8_t>(1u << (bit % 8));
    }
    return out;
}

Partition make_partition(const Graph& g, const std::string& strategy, std::uint64_t seed) {
    if (strategy == "louvain") {
        Rng rng(seed);
        return partition_louvain(g, rng);
    }
    if (strategy == "range") {
        const auto k = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(g.node_count()))));
        return partition_range(g, std::max<std::size_t>(k, 1));
    }
    if (strategy.rfind("range:", 0) == 0) {
        const std::string arg = strategy.substr(6);
        std::size_t pos = 0;
        std::size_t k = 0;
        try {
            k = std::stoul(arg, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != arg.size() || k == 0) {
            fail(errc::parse_error, "bad cluster count in strategy '" + strategy + "'");
        }
        return partition_range(g, k);
    }
    fail(errc::parse_error, "unknown partition strategy '" + strategy + "'");
}

std::vector<BenchRecord> bench_scalability(const BenchConfig& config) {
    if (config.sizes.empty()) fail(errc::invalid_argument, "no graph sizes given");
    if (config.repeats < 1) fail(errc::invalid_argument, "repeats must be >= 1");
    if (!(config.p >= 0.0 && config.p <= 1.0)) {
        fail(errc::invalid_argument, "edge probability must be in [0,1]");
    }

    std::vector<BenchRecord> records;
    for (const std::size_t n : config.sizes) {
        Rng rng(config.seed + n);
        const Graph g = gen_er(n, config.p, rng);
        const Partition part = make_partition(g, config.partition_strategy, config.seed + n);

        BenchRecord base;
        base.n = n;
        base.p = config.p;
        base.seed = config.seed;
        base.repeats = config.repeats;

        {
            BenchRecord rec = base;
            rec.method = "gap";
            rec.partition = config.partition_strategy;
            std::vector<std::uint8_t> bytes;
            rec.encode_ms_median = time_median_ms(config.repeats, [&] {
                bytes = serialize(encode(g, part));
            });
            rec.bytes = bytes.size();
            rec.inter_edges = count_inter_edges(encode(g, part));
            rec.has_inter = true;
            records.push_back(std::move(rec));
        }

        for (const unsigned w : config.workers) {
            if (w == 0) fail(errc::invalid_argument, "worker count must be >= 1");
            BenchRecord rec = base;
            rec.method = "gap_parallel:" + std::to_string(w);
            rec.partition = config.partition_strategy;
            std::vector<std::uint8_t> bytes;
            rec.encode_ms_median = time_median_ms(config.repeats, [&] {
                bytes = serialize(encode_parallel(g, part, static_cast<int>(w)));
            });
            rec.bytes = bytes.size();
            rec.inter_edges = count_inter_edges(encode_parallel(g, part, static_cast<int>(w)));
            rec.has_inter = true;
            records.push_back(std::move(rec));
        }

        {
            BenchRecord rec = base;
            rec.method = "adjacency";
            if (n > config.adjacency_cap) {
                rec.skipped = true;
            } else {
                std::vector<std::uint8_t> bytes;
                rec.encode_ms_median =
                    time_median_ms(config.repeats, [&] { bytes = adjacency_encode(g); });
                rec.bytes = bytes.size();
            }
            records.push_back(std::move(rec));
        }
    }
    return records;
}

std::string bench_csv(const std::vector<BenchRecord>& records) {
    std::ostringstream out;
    out << "n,p,method,partition,encode_ms_median,bytes,inter_edges,seed,repeats\n";
    for (const BenchRecord& r : records) {
        out << r.n << ',' << format_double(r.p) << ',' << r.method << ',' << r.partition
            << ',';
        if (!r.skipped) out << format_double(r.encode_ms_median);
        out << ',';
        if (!r.skipped) out << r.bytes;
        out << ',';
        if (r.has_inter) out << r.inter_edges;
        out << ',' << r.seed << ',' << r.repeats << '\n';
    }
    return out.str();
}

std::string bench_json(const BenchConfig& config, const std::vector<BenchRecord>& records) {
    nlohmann::json doc;
    doc["config"] = {{"sizes", config.sizes},
                     {"p", config.p},
                     {"repeats", config.repeats},
                     {"partition", config.partition_strategy},
                     {"seed", config.seed},
                     {"workers", config.workers},
                     {"adjacency_cap", config.adjacency_cap},
                     {"warmup_runs", kWarmupRuns}};
    doc["environment"] = {{"version", kVersion}, {"seed", config.seed}};
    nlohmann::json rows = nlohmann::json::array();
    for (const BenchRecord& r : records) {
        nlohmann::json row;
        row["n"] = r.n;
        row["p"] = r.p;
        row["method"] = r.method;
        row["partition"] = r.partition;
        row["skipped"] = r.skipped;
        if (!r.skipped) {
            row["encode_ms_median"] = r.encode_ms_median;
            row["bytes"] = r.bytes;
        }
        if (r.has_inter) row["inter_edges"] = r.inter_edges;
        row["seed"] = r.seed;
        row["repeats"] = r.repeats;
        rows.push_back(std::move(row));
    }
    doc["records"] = std::move(rows);
    return doc.dump(2) + "\n";
}

} // namespace geonet
