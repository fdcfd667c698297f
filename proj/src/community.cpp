#include "calnet/community.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <stdexcept>

namespace calnet {

void Partition::canonicalize() {
    std::map<int, int> renumber;
    int next = 1;
    for (int& c : assignment) {
        auto [it, inserted] = renumber.emplace(c, next);
        if (inserted) ++next;
        c = it->second;
    }
    n_communities = next - 1;
}

Partition single_community(std::size_t n_nodes) {
    Partition p;
    p.assignment.assign(n_nodes, 1);
    p.n_communities = n_nodes > 0 ? 1 : 0;
    return p;
}

namespace {

void check_covers(const NetTradeNetwork& g, const Partition& p) {
    if (p.assignment.size() != g.node_count()) {
        throw std::invalid_argument("partition does not cover every node of the network");
    }
}

}  // namespace

namespace {

// Accumulates per-node internal and total incident weight in one loop so
// that for the single-community partition both sums see bit-identical
// additions and Q comes out exactly zero.
double modularity_on_view(const UndirectedView& u, const std::vector<int>& assignment,
                          bool weighted) {
    std::size_t n = u.nodes.size();
    std::map<int, double> internal_sum;  // community -> sum over members of internal incident weight
    std::map<int, double> strength_sum;  // community -> sum of total degrees/strengths
    double strength_total = 0.0;         // == 2W (2L unweighted)
    for (std::size_t i = 0; i < n; ++i) {
        double internal = 0.0;
        double total = 0.0;
        for (const auto& nbr : u.adjacency[i]) {
            double w = weighted ? nbr.weight : 1.0;
            total += w;
            if (assignment[static_cast<std::size_t>(nbr.node)] == assignment[i]) internal += w;
        }
        internal_sum[assignment[i]] += internal;
        strength_sum[assignment[i]] += total;
        strength_total += total;
    }

    double q = 0.0;
    for (const auto& [community, internal] : internal_sum) {
        double share = strength_sum[community] / strength_total;
        q += internal / strength_total - share * share;
    }
    return q;
}

}  // namespace

std::optional<double> modularity(const NetTradeNetwork& g, const Partition& p, bool weighted) {
    check_covers(g, p);
    if (g.edge_count() == 0) return std::nullopt;
    return modularity_on_view(symmetrize(g), p.assignment, weighted);
}

namespace {

// Working graph for the multi-level optimizer: undirected weighted adjacency
// plus self-loops created by community aggregation.
struct WorkGraph {
    std::size_t n = 0;
    std::vector<std::vector<std::pair<int, double>>> adj;  // no self entries
    std::vector<double> self_loop;                         // weight counted once
    std::vector<double> strength;                          // adj weights + 2*self_loop
    double total_weight = 0.0;                             // W: edges once + self loops

    void finalize() {
        strength.assign(n, 0.0);
        total_weight = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, w] : adj[i]) strength[i] += w;
            strength[i] += 2.0 * self_loop[i];
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto& [j, w] : adj[i]) {
                if (static_cast<std::size_t>(j) > i) total_weight += w;
            }
            total_weight += self_loop[i];
        }
    }
};

WorkGraph from_network(const NetTradeNetwork& g, bool weighted) {
    WorkGraph wg;
    wg.n = g.node_count();
    wg.adj.resize(wg.n);
    wg.self_loop.assign(wg.n, 0.0);
    for (const NetEdge& e : g.edges) {
        double w = weighted ? e.kcal : 1.0;
        wg.adj[e.src].push_back({e.dst, w});
        wg.adj[e.dst].push_back({e.src, w});
    }
    for (auto& nbrs : wg.adj) std::sort(nbrs.begin(), nbrs.end());
    wg.finalize();
    return wg;
}

// One pass of local moves; returns true if any node changed community.
// Nodes are visited in ascending index order and candidate communities in
// ascending id order; rng resolves exact gain ties only.
bool one_level(const WorkGraph& wg, std::vector<int>& comm, double resolution,
               std::mt19937_64& rng) {
    std::vector<double> community_strength(wg.n, 0.0);
    for (std::size_t i = 0; i < wg.n; ++i) community_strength[comm[i]] += wg.strength[i];

    const double two_w = 2.0 * wg.total_weight;
    std::vector<double> weight_to(wg.n, 0.0);  // node -> candidate community weights
    std::vector<int> touched;
    std::vector<int> ties;

    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (std::size_t v = 0; v < wg.n; ++v) {
            int old_comm = comm[v];

            touched.clear();
            weight_to[old_comm] = 0.0;
            touched.push_back(old_comm);
            for (const auto& [u, w] : wg.adj[v]) {
                int c = comm[u];
                if (weight_to[c] == 0.0 &&
                    std::find(touched.begin(), touched.end(), c) == touched.end()) {
                    touched.push_back(c);
                }
                weight_to[c] += w;
            }
            std::sort(touched.begin(), touched.end());

            community_strength[old_comm] -= wg.strength[v];

            auto gain_of = [&](int c) {
                return weight_to[c] - resolution * community_strength[c] * wg.strength[v] / two_w;
            };
            double stay_gain = gain_of(old_comm);

            // A move needs strictly more gain than staying, so every move
            // increases the objective and the pass loop terminates. Exact
            // ties among candidate moves are broken by the seeded rng.
            double best_gain = stay_gain;
            ties.clear();
            for (int c : touched) {
                if (c == old_comm) continue;
                double gain = gain_of(c);
                if (gain > best_gain) {
                    best_gain = gain;
                    ties.clear();
                    ties.push_back(c);
                } else if (!ties.empty() && gain == best_gain) {
                    ties.push_back(c);
                }
            }
            int best = old_comm;
            if (!ties.empty()) {
                best = ties.size() == 1 ? ties[0] : ties[rng() % ties.size()];
            }

            community_strength[best] += wg.strength[v];
            for (int c : touched) weight_to[c] = 0.0;
            if (best != old_comm) {
                comm[v] = best;
                moved = true;
                any_move = true;
            }
        }
    }
    return any_move;
}

// Collapses communities into super-nodes; `comm` is renumbered in place to
// the new node ids (by first appearance in node order).
WorkGraph aggregate(const WorkGraph& wg, std::vector<int>& comm) {
    std::vector<int> renumber(wg.n, -1);
    int next = 0;
    for (std::size_t i = 0; i < wg.n; ++i) {
        if (renumber[comm[i]] == -1) renumber[comm[i]] = next++;
        comm[i] = renumber[comm[i]];
    }

    WorkGraph out;
    out.n = static_cast<std::size_t>(next);
    out.adj.resize(out.n);
    out.self_loop.assign(out.n, 0.0);
    std::map<std::pair<int, int>, double> between;
    for (std::size_t i = 0; i < wg.n; ++i) {
        int ci = comm[i];
        out.self_loop[ci] += wg.self_loop[i];
        for (const auto& [j, w] : wg.adj[i]) {
            int cj = comm[static_cast<std::size_t>(j)];
            if (ci == cj) {
                // Each internal undirected edge appears twice in adj.
                if (static_cast<std::size_t>(j) > i) out.self_loop[ci] += w;
            } else {
                between[{ci, cj}] += w;
            }
        }
    }
    for (const auto& [key, w] : between) {
        out.adj[key.first].push_back({key.second, w});
    }
    out.finalize();
    return out;
}

}  // namespace

std::optional<Partition> detect_communities(const NetTradeNetwork& g, bool weighted,
                                            std::uint64_t seed, double resolution) {
    if (g.edge_count() == 0) return std::nullopt;
    if (!(resolution > 0.0)) throw std::invalid_argument("resolution must be positive");

    std::mt19937_64 rng(seed);
    WorkGraph wg = from_network(g, weighted);

    // node -> community in the original graph, composed across levels
    std::vector<int> node_to_final(g.node_count());
    for (std::size_t i = 0; i < node_to_final.size(); ++i) node_to_final[i] = static_cast<int>(i);

    std::vector<int> comm(wg.n);
    for (std::size_t i = 0; i < wg.n; ++i) comm[i] = static_cast<int>(i);

    while (true) {
        bool improved = one_level(wg, comm, resolution, rng);
        if (!improved) break;
        WorkGraph next = aggregate(wg, comm);  // renumbers comm in place
        for (int& c : node_to_final) c = comm[static_cast<std::size_t>(c)];
        if (next.n == wg.n) break;
        wg = std::move(next);
        comm.resize(wg.n);
        for (std::size_t i = 0; i < wg.n; ++i) comm[i] = static_cast<int>(i);
    }

    Partition p;
    p.assignment = std::move(node_to_final);
    for (int& c : p.assignment) ++c;  // community ids are 1-based
    p.canonicalize();

    // Contract: never worse than the all-in-one partition (Q = 0).
    auto q = modularity(g, p, weighted);
    if (!q || *q < 0.0) return single_community(g.node_count());
    return p;
}

namespace {

// Restricted growth strings enumerate canonical assignments in lexicographic
// order, so keeping strict improvements yields the lexicographically smallest
// maximizer.
template <typename Fn>
void for_each_set_partition(std::size_t n, Fn&& fn) {
    std::vector<int> a(n, 0);  // a[i] in 0..max(a[0..i-1])+1
    std::vector<int> b(n, 0);  // b[i] = max(a[0..i-1])
    while (true) {
        fn(a);
        std::size_t i = n - 1;
        while (i >= 1 && a[i] > b[i]) --i;
        if (i == 0) return;  // a[0] can never increase
        ++a[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            b[j] = std::max(b[j - 1], a[j - 1]);
            a[j] = 0;
        }
    }
}

}  // namespace

BestPartition brute_force_best_partition(const NetTradeNetwork& g, bool weighted,
                                         std::size_t max_n) {
    std::size_t n = g.node_count();
    if (n > max_n) {
        throw std::invalid_argument("brute_force_best_partition: network exceeds max_n nodes");
    }
    if (n == 0 || g.edge_count() == 0) {
        throw std::invalid_argument("brute_force_best_partition: network has no edges");
    }

    UndirectedView view = symmetrize(g);
    BestPartition best;
    bool have_best = false;
    Partition candidate;
    candidate.assignment.resize(n);
    for_each_set_partition(n, [&](const std::vector<int>& a) {
        for (std::size_t i = 0; i < n; ++i) candidate.assignment[i] = a[i] + 1;
        double q = modularity_on_view(view, candidate.assignment, weighted);
        if (!have_best || q > best.q) {
            candidate.n_communities = 1 + *std::max_element(a.begin(), a.end());
            best.q = q;
            best.partition = candidate;
            have_best = true;
        }
    });
    return best;
}

std::vector<CommunityInfo> community_diagnostics(const NetTradeNetwork& g, const Partition& p) {
    check_covers(g, p);
    std::map<int, CommunityInfo> infos;
    for (std::size_t i = 0; i < g.node_count(); ++i) {
        CommunityInfo& info = infos[p.assignment[i]];
        info.community = p.assignment[i];
        info.size += 1;
    }
    for (const NetEdge& e : g.edges) {
        int c = p.assignment[static_cast<std::size_t>(e.src)];
        if (c != p.assignment[static_cast<std::size_t>(e.dst)]) continue;
        CommunityInfo& info = infos[c];
        info.internal_edges += 1;
        info.internal_weight += e.kcal;
    }
    std::vector<CommunityInfo> out;
    out.reserve(infos.size());
    for (auto& [id, info] : infos) {
        if (info.size > 1) {
            double pairs = static_cast<double>(info.size) * static_cast<double>(info.size - 1);
            info.internal_connectivity = static_cast<double>(info.internal_edges) / pairs;
        }
        out.push_back(info);
    }
    return out;
}

}  // namespace calnet
