#include "geonet/gapcode.hpp"

#include <algorithm>
#include <cstring>
#include <optional>
#include <string>

#include "geonet/varint.hpp"

namespace geonet {

namespace {

constexpr char kMagic[4] = {'G', 'G', 'E', '1'};
constexpr std::uint64_t kMaxPosition = 0xFFFFFFFFull;

std::vector<std::uint64_t> seq_from_ids(const std::vector<NodeId>& ids) {
    std::vector<std::uint64_t> seq;
    seq.reserve(ids.size());
    if (ids.empty()) return seq;
    seq.push_back(ids[0]);
    for (std::size_t i = 1; i < ids.size(); ++i) seq.push_back(ids[i] - ids[i - 1]);
    return seq;
}

// Walks a gap sequence looking for id; the IDs are ascending, so the walk
// stops as soon as it passes id.
std::optional<std::uint32_t> find_in_seq(const std::vector<std::uint64_t>& seq, NodeId id) {
    std::uint64_t cur = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        cur = (i == 0) ? seq[0] : cur + seq[i];
        if (cur == id) return static_cast<std::uint32_t>(i);
        if (cur > id) return std::nullopt;
    }
    return std::nullopt;
}

struct Located {
    std::uint32_t cluster;
    std::uint32_t pos;
};

std::optional<Located> find_node_anywhere(const GapEncodedGraph& e, NodeId id) {
    for (std::size_t c = 0; c < e.clusters.size(); ++c) {
        if (auto pos = find_in_seq(e.clusters[c].seq, id)) {
            return Located{static_cast<std::uint32_t>(c), *pos};
        }
    }
    return std::nullopt;
}

using PosPair = std::pair<std::uint32_t, std::uint32_t>;

// Shift positions >= from by +1 (monotone, so order is preserved).
void shift_up(std::vector<PosPair>& pairs, bool first_side, std::uint32_t from) {
    for (auto& [a, b] : pairs) {
        auto& x = first_side ? a : b;
        if (x >= from) ++x;
    }
}

// Drop pairs whose chosen side equals pos, then shift the remainder down.
void drop_and_shift_down(std::vector<PosPair>& pairs, bool first_side, std::uint32_t pos) {
    std::erase_if(pairs, [&](const PosPair& pr) {
        return (first_side ? pr.first : pr.second) == pos;
    });
    for (auto& [a, b] : pairs) {
        auto& x = first_side ? a : b;
        if (x > pos) --x;
    }
}

GapEncodedGraph encode_impl(const Graph& g,
                            const std::vector<std::vector<NodeId>>& clusters,
                            int workers) {
    // Cover check: concatenated cluster members must equal the node set.
    std::vector<NodeId> all;
    for (const auto& c : clusters) {
        for (std::size_t i = 1; i < c.size(); ++i) {
            if (c[i] <= c[i - 1]) {
                fail(errc::invalid_argument, "cluster node list must be strictly ascending");
            }
        }
        all.insert(all.end(), c.begin(), c.end());
    }
    std::sort(all.begin(), all.end());
    if (all != g.nodes()) {
        fail(errc::partition_mismatch, "cluster layout does not cover the graph's nodes");
    }

    const std::size_t k = clusters.size();
    // assign[i] = cluster of the i-th node (in g.nodes() order).
    std::vector<std::uint32_t> assign(g.node_count());
    for (std::size_t c = 0; c < k; ++c) {
        for (NodeId v : clusters[c]) {
            assign[g.node_index(v)] = static_cast<std::uint32_t>(c);
        }
    }

    // Classify edges; positions are resolved in the parallel phase.
    std::vector<std::vector<Edge>> intra_raw(k);
    std::vector<Edge> inter_raw;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> inter_cl; // (cu, cv) per raw edge
    for (const auto& [u, v] : g.edges()) {
        const std::uint32_t cu = assign[g.node_index(u)];
        const std::uint32_t cv = assign[g.node_index(v)];
        if (cu == cv) {
            intra_raw[cu].emplace_back(u, v);
        } else {
            inter_raw.emplace_back(u, v);
            inter_cl.emplace_back(cu, cv);
        }
    }

    GapEncodedGraph out;
    out.clusters.resize(k);

    auto pos_in = [&clusters](std::uint32_t c, NodeId v) {
        const auto& list = clusters[c];
        return static_cast<std::uint32_t>(
            std::lower_bound(list.begin(), list.end(), v) - list.begin());
    };

    [[maybe_unused]] const int nt = workers; // callers pass >= 1

    // Per-cluster phase: gap sequence + intra positions. Iterations are
    // independent; results land in preassigned slots, so scheduling cannot
    // change the output.
#pragma omp parallel for num_threads(nt) schedule(dynamic)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(k); ++ci) {
        auto& sub = out.clusters[ci];
        sub.seq = seq_from_ids(clusters[ci]);
        sub.intra.reserve(intra_raw[ci].size());
        for (const auto& [u, v] : intra_raw[ci]) {
            sub.intra.emplace_back(pos_in(static_cast<std::uint32_t>(ci), u),
                                   pos_in(static_cast<std::uint32_t>(ci), v));
        }
        std::sort(sub.intra.begin(), sub.intra.end());
    }

    // Inter phase: resolve positions per edge (index-addressed, deterministic).
    struct InterTuple {
        std::uint32_t p, q, pp, pq;
    };
    std::vector<InterTuple> tuples(inter_raw.size());
#pragma omp parallel for num_threads(nt) schedule(static)
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(inter_raw.size()); ++i) {
        const auto [u, v] = inter_raw[i];
        const auto [cu, cv] = inter_cl[i];
        InterTuple t{};
        if (cu < cv) {
            t = {cu, cv, pos_in(cu, u), pos_in(cv, v)};
        } else {
            t = {cv, cu, pos_in(cv, v), pos_in(cu, u)};
        }
        tuples[i] = t;
    }
    std::sort(tuples.begin(), tuples.end(), [](const InterTuple& a, const InterTuple& b) {
        return std::tie(a.p, a.q, a.pp, a.pq) < std::tie(b.p, b.q, b.pp, b.pq);
    });

    for (const auto& t : tuples) {
        if (out.inter.empty() || out.inter.back().p != t.p || out.inter.back().q != t.q) {
            out.inter.push_back(InterGroup{t.p, t.q, {}});
        }
        out.inter.back().edges.emplace_back(t.pp, t.pq);
    }
    return out;
}

} // namespace

std::vector<NodeId> GapSubgraph::decode_ids() const {
    std::vector<NodeId> ids;
    ids.reserve(seq.size());
    std::uint64_t cur = 0;
    for (std::size_t i = 0; i < seq.size(); ++i) {
        if (i == 0) {
            cur = seq[0];
        } else {
            if (seq[i] == 0) {
                fail(errc::malformed_encoding, "zero gap in gap sequence");
            }
            cur += seq[i];
        }
        ids.push_back(cur);
    }
    return ids;
}

GapEncodedGraph encode(const Graph& g, const Partition& p) {
    if (!p.covers(g)) fail(errc::partition_mismatch, "partition does not cover the graph");
    return encode_impl(g, p.clusters(), 1);
}

GapEncodedGraph encode_clusters(const Graph& g,
                                const std::vector<std::vector<NodeId>>& clusters) {
    return encode_impl(g, clusters, 1);
}

GapEncodedGraph encode_parallel(const Graph& g, const Partition& p, int workers) {
    if (workers < 1) fail(errc::invalid_argument, "worker count must be >= 1");
    if (!p.covers(g)) fail(errc::partition_mismatch, "partition does not cover the graph");
    return encode_impl(g, p.clusters(), workers);
}

Graph decode(const GapEncodedGraph& e) {
    std::vector<std::vector<NodeId>> ids(e.clusters.size());
    std::vector<NodeId> nodes;
    for (std::size_t c = 0; c < e.clusters.size(); ++c) {
        ids[c] = e.clusters[c].decode_ids();
        nodes.insert(nodes.end(), ids[c].begin(), ids[c].end());
    }
    {
        auto sorted = nodes;
        std::sort(sorted.begin(), sorted.end());
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            fail(errc::duplicate_node, "node ID appears in more than one cluster");
        }
    }

    std::vector<Edge> edges;
    for (std::size_t c = 0; c < e.clusters.size(); ++c) {
        for (const auto& [a, b] : e.clusters[c].intra) {
            if (a >= b || b >= ids[c].size()) {
                fail(errc::malformed_encoding, "intra edge position out of range");
            }
            edges.emplace_back(ids[c][a], ids[c][b]);
        }
    }
    for (const auto& grp : e.inter) {
        if (grp.p >= grp.q || grp.q >= e.clusters.size()) {
            fail(errc::malformed_encoding, "bad inter-group cluster pair");
        }
        for (const auto& [pp, pq] : grp.edges) {
            if (pp >= ids[grp.p].size() || pq >= ids[grp.q].size()) {
                fail(errc::malformed_encoding, "inter edge position out of range");
            }
            const NodeId vi = ids[grp.p][pp];
            const NodeId vj = ids[grp.q][pq];
            edges.emplace_back(std::min(vi, vj), std::max(vi, vj));
        }
    }
    return Graph::from_parts(std::move(nodes), std::move(edges));
}

std::uint64_t inter_edge_gap(NodeId vi, NodeId vj) {
    if (vi == vj) fail(errc::invalid_argument, "inter-edge endpoints must differ");
    return vi > vj ? vi - vj : vj - vi;
}

std::vector<InterEdge> inter_edges(const GapEncodedGraph& e) {
    std::vector<InterEdge> out;
    std::vector<std::vector<NodeId>> ids(e.clusters.size());
    for (std::size_t c = 0; c < e.clusters.size(); ++c) ids[c] = e.clusters[c].decode_ids();
    for (const auto& grp : e.inter) {
        if (grp.q >= e.clusters.size()) {
            fail(errc::malformed_encoding, "bad inter-group cluster pair");
        }
        for (const auto& [pp, pq] : grp.edges) {
            if (pp >= ids[grp.p].size() || pq >= ids[grp.q].size()) {
                fail(errc::malformed_encoding, "inter edge position out of range");
            }
            InterEdge ie;
            ie.p = grp.p;
            ie.q = grp.q;
            ie.vi = ids[grp.p][pp];
            ie.vj = ids[grp.q][pq];
            ie.gap = inter_edge_gap(ie.vi, ie.vj);
            out.push_back(ie);
        }
    }
    return out;
}

UpdateStats add_node(GapEncodedGraph& e, NodeId id, std::uint32_t cluster) {
    if (cluster >= e.clusters.size()) {
        fail(errc::invalid_argument,
             "cluster index " + std::to_string(cluster) + " out of range");
    }
    if (find_node_anywhere(e, id)) {
        fail(errc::duplicate_node, "node " + std::to_string(id) + " already present");
    }

    auto& sub = e.clusters[cluster];
    auto ids = sub.decode_ids();
    const auto it = std::lower_bound(ids.begin(), ids.end(), id);
    const auto pos = static_cast<std::uint32_t>(it - ids.begin());
    ids.insert(it, id);
    sub.seq = seq_from_ids(ids);

    shift_up(sub.intra, true, pos);
    shift_up(sub.intra, false, pos);
    for (auto& grp : e.inter) {
        if (grp.p == cluster) shift_up(grp.edges, true, pos);
        if (grp.q == cluster) shift_up(grp.edges, false, pos);
    }
    return UpdateStats{1};
}

UpdateStats remove_node(GapEncodedGraph& e, NodeId id) {
    const auto loc = find_node_anywhere(e, id);
    if (!loc) fail(errc::missing_node, "node " + std::to_string(id) + " not present");
    const auto [cluster, pos] = *loc;

    auto& sub = e.clusters[cluster];
    auto ids = sub.decode_ids();
    ids.erase(ids.begin() + pos);
    sub.seq = seq_from_ids(ids);

    drop_and_shift_down(sub.intra, true, pos);
    drop_and_shift_down(sub.intra, false, pos);
    for (auto& grp : e.inter) {
        if (grp.p == cluster) drop_and_shift_down(grp.edges, true, pos);
        if (grp.q == cluster) drop_and_shift_down(grp.edges, false, pos);
    }
    std::erase_if(e.inter, [](const InterGroup& grp) { return grp.edges.empty(); });
    return UpdateStats{1};
}

UpdateStats add_edge(GapEncodedGraph& e, NodeId u, NodeId v) {
    if (u == v) fail(errc::invalid_argument, "self-loops are not representable");
    const auto lu = find_node_anywhere(e, u);
    if (!lu) fail(errc::missing_node, "node " + std::to_string(u) + " not present");
    const auto lv = find_node_anywhere(e, v);
    if (!lv) fail(errc::missing_node, "node " + std::to_string(v) + " not present");

    if (lu->cluster == lv->cluster) {
        auto& intra = e.clusters[lu->cluster].intra;
        const PosPair pr{std::min(lu->pos, lv->pos), std::max(lu->pos, lv->pos)};
        const auto it = std::lower_bound(intra.begin(), intra.end(), pr);
        if (it != intra.end() && *it == pr) {
            fail(errc::duplicate_edge, "edge already present");
        }
        intra.insert(it, pr);
        return UpdateStats{1};
    }

    const bool u_first = lu->cluster < lv->cluster;
    const std::uint32_t p = u_first ? lu->cluster : lv->cluster;
    const std::uint32_t q = u_first ? lv->cluster : lu->cluster;
    const PosPair pr = u_first ? PosPair{lu->pos, lv->pos} : PosPair{lv->pos, lu->pos};

    auto git = std::lower_bound(e.inter.begin(), e.inter.end(), std::make_pair(p, q),
                                [](const InterGroup& g, const std::pair<std::uint32_t, std::uint32_t>& key) {
                                    return std::make_pair(g.p, g.q) < key;
                                });
    if (git == e.inter.end() || git->p != p || git->q != q) {
        git = e.inter.insert(git, InterGroup{p, q, {pr}});
        return UpdateStats{2};
    }
    const auto it = std::lower_bound(git->edges.begin(), git->edges.end(), pr);
    if (it != git->edges.end() && *it == pr) {
        fail(errc::duplicate_edge, "edge already present");
    }
    git->edges.insert(it, pr);
    return UpdateStats{2};
}

UpdateStats remove_edge(GapEncodedGraph& e, NodeId u, NodeId v) {
    if (u == v) fail(errc::invalid_argument, "self-loops are not representable");
    const auto lu = find_node_anywhere(e, u);
    const auto lv = find_node_anywhere(e, v);
    if (!lu || !lv) fail(errc::missing_edge, "edge not present");

    if (lu->cluster == lv->cluster) {
        auto& intra = e.clusters[lu->cluster].intra;
        const PosPair pr{std::min(lu->pos, lv->pos), std::max(lu->pos, lv->pos)};
        const auto it = std::lower_bound(intra.begin(), intra.end(), pr);
        if (it == intra.end() || *it != pr) fail(errc::missing_edge, "edge not present");
        intra.erase(it);
        return UpdateStats{1};
    }

    const bool u_first = lu->cluster < lv->cluster;
    const std::uint32_t p = u_first ? lu->cluster : lv->cluster;
    const std::uint32_t q = u_first ? lv->cluster : lu->cluster;
    const PosPair pr = u_first ? PosPair{lu->pos, lv->pos} : PosPair{lv->pos, lu->pos};

    auto git = std::find_if(e.inter.begin(), e.inter.end(), [&](const InterGroup& g) {
        return g.p == p && g.q == q;
    });
    if (git == e.inter.end()) fail(errc::missing_edge, "edge not present");
    const auto it = std::lower_bound(git->edges.begin(), git->edges.end(), pr);
    if (it == git->edges.end() || *it != pr) fail(errc::missing_edge, "edge not present");
    git->edges.erase(it);
    if (git->edges.empty()) e.inter.erase(git);
    return UpdateStats{2};
}

std::vector<std::uint8_t> serialize(const GapEncodedGraph& e) {
    std::vector<std::uint8_t> out;
    out.insert(out.end(), kMagic, kMagic + 4);
    varint_append(out, e.clusters.size());
    for (const auto& sub : e.clusters) {
        varint_append(out, sub.seq.size());
        for (std::uint64_t v : sub.seq) varint_append(out, v);
        varint_append(out, sub.intra.size());
        for (const auto& [a, b] : sub.intra) {
            varint_append(out, a);
            varint_append(out, b);
        }
    }
    varint_append(out, e.inter.size());
    for (const auto& grp : e.inter) {
        varint_append(out, grp.p);
        varint_append(out, grp.q);
        varint_append(out, grp.edges.size());
        std::uint32_t prev_p = 0;
        std::uint32_t prev_q = 0;
        bool first = true;
        for (const auto& [pp, pq] : grp.edges) {
            if (first) {
                varint_append(out, pp);
                varint_append(out, pq);
                first = false;
            } else {
                const std::uint32_t dp = pp - prev_p;
                varint_append(out, dp);
                varint_append(out, dp > 0 ? pq : pq - prev_q);
            }
            prev_p = pp;
            prev_q = pq;
        }
    }
    return out;
}

GapEncodedGraph deserialize(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 4) fail(errc::truncated_file, "input shorter than the magic");
    if (std::memcmp(bytes.data(), "GGE", 3) != 0) {
        fail(errc::bad_magic, "not a gap-encoded graph");
    }
    if (bytes[3] != '1') {
        fail(errc::version_mismatch,
             std::string("unsupported format version '") + static_cast<char>(bytes[3]) + "'");
    }

    std::size_t off = 4;
    const auto remaining = [&] { return bytes.size() - off; };
    const auto read_u32 = [&](const char* what) {
        const std::uint64_t v = varint_read(bytes, off);
        if (v > kMaxPosition) {
            fail(errc::malformed_encoding, std::string(what) + " exceeds 32-bit range");
        }
        return static_cast<std::uint32_t>(v);
    };

    GapEncodedGraph e;
    const std::uint64_t k = varint_read(bytes, off);
    if (k > remaining()) fail(errc::truncated_file, "cluster count exceeds input size");
    e.clusters.resize(k);
    for (auto& sub : e.clusters) {
        const std::uint64_t nc = varint_read(bytes, off);
        if (nc > remaining() + 1) fail(errc::truncated_file, "node count exceeds input size");
        sub.seq.reserve(nc);
        for (std::uint64_t i = 0; i < nc; ++i) {
            const std::uint64_t v = varint_read(bytes, off);
            if (i > 0 && v == 0) fail(errc::malformed_encoding, "zero gap in gap sequence");
            sub.seq.push_back(v);
        }
        const std::uint64_t ic = varint_read(bytes, off);
        if (ic > remaining() / 2 + 1) {
            fail(errc::truncated_file, "intra edge count exceeds input size");
        }
        sub.intra.reserve(ic);
        for (std::uint64_t i = 0; i < ic; ++i) {
            const std::uint32_t a = read_u32("intra position");
            const std::uint32_t b = read_u32("intra position");
            if (a >= b || b >= nc) {
                fail(errc::malformed_encoding, "intra edge position out of range");
            }
            if (!sub.intra.empty() && sub.intra.back() >= PosPair{a, b}) {
                fail(errc::malformed_encoding, "intra edges not strictly ascending");
            }
            sub.intra.emplace_back(a, b);
        }
    }

    const std::uint64_t gc = varint_read(bytes, off);
    if (gc > remaining() / 5 + 1) fail(errc::truncated_file, "group count exceeds input size");
    e.inter.reserve(gc);
    for (std::uint64_t gi = 0; gi < gc; ++gi) {
        InterGroup grp;
        grp.p = read_u32("cluster index");
        grp.q = read_u32("cluster index");
        if (grp.p >= grp.q || grp.q >= e.clusters.size()) {
            fail(errc::malformed_encoding, "bad inter-group cluster pair");
        }
        if (!e.inter.empty() &&
            std::make_pair(e.inter.back().p, e.inter.back().q) >= std::make_pair(grp.p, grp.q)) {
            fail(errc::malformed_encoding, "inter groups not strictly ascending");
        }
        const std::uint64_t ec = varint_read(bytes, off);
        if (ec == 0) fail(errc::malformed_encoding, "empty inter group");
        if (ec > remaining() / 2 + 1) {
            fail(errc::truncated_file, "inter edge count exceeds input size");
        }
        grp.edges.reserve(ec);
        const std::size_t np = e.clusters[grp.p].node_count();
        const std::size_t nq = e.clusters[grp.q].node_count();
        std::uint32_t pp = 0;
        std::uint32_t pq = 0;
        for (std::uint64_t i = 0; i < ec; ++i) {
            if (i == 0) {
                pp = read_u32("inter position");
                pq = read_u32("inter position");
            } else {
                const std::uint32_t dp = read_u32("inter position delta");
                if (dp > 0) {
                    pp += dp;
                    pq = read_u32("inter position");
                } else {
                    const std::uint32_t dq = read_u32("inter position delta");
                    if (dq == 0) {
                        fail(errc::malformed_encoding, "inter edges not strictly ascending");
                    }
                    pq += dq;
                }
            }
            if (pp >= np || pq >= nq) {
                fail(errc::malformed_encoding, "inter edge position out of range");
            }
            grp.edges.emplace_back(pp, pq);
        }
        e.inter.push_back(std::move(grp));
    }

    if (off != bytes.size()) {
        fail(errc::malformed_encoding, "trailing bytes after encoding");
    }
    return e;
}

std::size_t serialized_size(const GapEncodedGraph& e) {
    return serialize(e).size();
}

} // namespace geonet
