#include "mot/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <utility>

#include "mot/geometry.hpp"

namespace mot {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double detection_cost(double conf) {
    if (conf <= 0.0) return 20.0;
    if (conf >= 1.0) return -20.0;
    return std::clamp(std::log((1.0 - conf) / conf), -20.0, 20.0);
}

// Incoming transitions per detection, in ascending `from` order.
std::vector<std::vector<std::pair<int, double>>> incoming(const FlowGraph& g) {
    std::vector<std::vector<std::pair<int, double>>> in(g.detections.size());
    for (const auto& t : g.transitions) in[t.to].emplace_back(t.from, t.cost);
    return in;
}

std::vector<std::vector<int>> sort_paths(std::vector<std::vector<int>> paths) {
    // Detections are frame-sorted, so the first index orders by (frame, index).
    std::sort(paths.begin(), paths.end(),
              [](const std::vector<int>& a, const std::vector<int>& b) { return a[0] < b[0]; });
    return paths;
}

}  // namespace

FlowGraph build_flow_graph(const std::vector<Detection>& detections, const ParamSet& params) {
    for (std::size_t i = 1; i < detections.size(); ++i)
        if (detections[i].frame < detections[i - 1].frame)
            throw std::invalid_argument("build_flow_graph: detections must be sorted by frame");

    FlowGraph g;
    g.detections = detections;
    g.entry_cost = params.get("entry_exit_cost");
    g.exit_cost = g.entry_cost;
    g.nms_threshold = params.get("nms_threshold");

    g.det_cost.reserve(detections.size());
    for (const auto& d : detections) g.det_cost.push_back(detection_cost(d.confidence));

    const int max_gap = params.get_int("max_gap");
    const double gate_dist = params.get("gate_dist");
    const double sigma = params.get("sigma_trans");
    const double gap_cost = params.get("gap_cost");
    const int n = static_cast<int>(detections.size());
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const int gap = detections[j].frame - detections[i].frame;
            if (gap > max_gap) break;
            if (gap < 1) continue;
            const double speed =
                center_distance(detections[i].box, detections[j].box) / static_cast<double>(gap);
            if (speed > gate_dist) continue;
            const double cost =
                speed * speed / (2.0 * sigma * sigma) + gap_cost * static_cast<double>(gap - 1);
            g.transitions.push_back({i, j, cost});
        }
    }
    return g;
}

double flow_paths_cost(const FlowGraph& g, const std::vector<std::vector<int>>& paths) {
    const auto in = incoming(g);
    double total = 0.0;
    for (const auto& path : paths) {
        total += g.entry_cost;
        for (std::size_t k = 0; k < path.size(); ++k) {
            total += g.det_cost[path[k]];
            if (k == 0) continue;
            bool found = false;
            for (const auto& [from, cost] : in[path[k]]) {
                if (from != path[k - 1]) continue;
                total += cost;
                found = true;
                break;
            }
            if (!found) throw std::logic_error("flow_paths_cost: path uses a missing transition");
        }
        total += g.exit_cost;
    }
    return total;
}

std::vector<std::vector<int>> min_cost_flow(const FlowGraph& g) {
    const int n = static_cast<int>(g.detections.size());
    if (n == 0) return {};
    const int source = 0, sink = 1, nodes = 2 + 2 * n;
    const auto in_node = [](int i) { return 2 + 2 * i; };
    const auto out_node = [](int i) { return 3 + 2 * i; };

    struct Edge {
        int to;
        int cap;
        double cost;
        int rev;  // index of the paired reverse edge in adj[to]
    };
    std::vector<std::vector<Edge>> adj(nodes);
    const auto add_edge = [&](int u, int v, double cost) {
        adj[u].push_back({v, 1, cost, static_cast<int>(adj[v].size())});
        adj[v].push_back({u, 0, -cost, static_cast<int>(adj[u].size()) - 1});
    };

    for (int i = 0; i < n; ++i) add_edge(source, in_node(i), g.entry_cost);
    for (int i = 0; i < n; ++i) add_edge(in_node(i), out_node(i), g.det_cost[i]);
    std::vector<int> exit_pos(n);
    for (int i = 0; i < n; ++i) {
        exit_pos[i] = static_cast<int>(adj[out_node(i)].size());
        add_edge(out_node(i), sink, g.exit_cost);
    }
    std::vector<std::vector<std::pair<int, int>>> out_trans(n);  // i -> (j, pos in adj[out(i)])
    for (const auto& t : g.transitions) {
        out_trans[t.from].emplace_back(t.to, static_cast<int>(adj[out_node(t.from)].size()));
        add_edge(out_node(t.from), in_node(t.to), t.cost);
    }

    // Initial potentials by relaxation in topological order (frame-sorted
    // detections make index order topological).
    const auto in_trans = incoming(g);
    std::vector<double> pi(nodes, 0.0);
    double best_exit = kInf;
    for (int i = 0; i < n; ++i) {
        double arrive = g.entry_cost;
        for (const auto& [from, cost] : in_trans[i])
            arrive = std::min(arrive, pi[out_node(from)] + cost);
        pi[in_node(i)] = arrive;
        pi[out_node(i)] = arrive + g.det_cost[i];
        best_exit = std::min(best_exit, pi[out_node(i)] + g.exit_cost);
    }
    pi[sink] = best_exit;

    std::vector<double> dist(nodes);
    std::vector<std::pair<int, int>> parent(nodes);  // (node, edge index)
    while (true) {
        std::fill(dist.begin(), dist.end(), kInf);
        dist[source] = 0.0;
        using Item = std::pair<double, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<Item>> pq;
        pq.emplace(0.0, source);
        while (!pq.empty()) {
            const auto [d, u] = pq.top();
            pq.pop();
            if (d > dist[u]) continue;
            for (int e = 0; e < static_cast<int>(adj[u].size()); ++e) {
                const Edge& edge = adj[u][e];
                if (edge.cap <= 0) continue;
                double rc = edge.cost + pi[u] - pi[edge.to];
                if (rc < 0.0) {
                    if (rc < -1e-6) throw std::logic_error("min_cost_flow: potential violated");
                    rc = 0.0;  // rounding noise
                }
                if (d + rc < dist[edge.to]) {
                    dist[edge.to] = d + rc;
                    parent[edge.to] = {u, e};
                    pq.emplace(dist[edge.to], edge.to);
                }
            }
        }
        if (!(dist[sink] < kInf)) break;
        if (dist[sink] + pi[sink] >= 0.0) break;  // next path would not reduce the total
        for (int v = 0; v < nodes; ++v) pi[v] += std::min(dist[v], dist[sink]);
        for (int v = sink; v != source;) {
            const auto [u, e] = parent[v];
            adj[u][e].cap -= 1;
            adj[v][adj[u][e].rev].cap += 1;
            v = u;
        }
    }

    std::vector<std::vector<int>> paths;
    for (int i = 0; i < n; ++i) {
        if (adj[source][i].cap != 0) continue;  // entry edge i unused
        std::vector<int> path;
        int cur = i;
        while (true) {
            path.push_back(cur);
            if (adj[out_node(cur)][exit_pos[cur]].cap == 0) break;
            int next = -1;
            for (const auto& [j, pos] : out_trans[cur])
                if (adj[out_node(cur)][pos].cap == 0) {
                    next = j;
                    break;
                }
            if (next < 0) throw std::logic_error("min_cost_flow: broken path decomposition");
            cur = next;
        }
        paths.push_back(std::move(path));
    }
    return sort_paths(std::move(paths));
}

std::vector<std::vector<int>> dp_greedy_paths(const FlowGraph& g) {
    const int n = static_cast<int>(g.detections.size());
    if (n == 0) return {};
    const auto in_trans = incoming(g);

    std::vector<char> alive(n, 1);
    std::vector<double> depart(n);
    std::vector<int> pred(n);
    std::vector<std::vector<int>> paths;
    while (true) {
        int best_end = -1;
        double best_total = 0.0;
        for (int i = 0; i < n; ++i) {
            if (!alive[i]) continue;
            double arrive = g.entry_cost;
            pred[i] = -1;
            for (const auto& [from, cost] : in_trans[i]) {
                if (!alive[from]) continue;
                if (depart[from] + cost < arrive) {
                    arrive = depart[from] + cost;
                    pred[i] = from;
                }
            }
            depart[i] = arrive + g.det_cost[i];
            if (best_end < 0 || depart[i] + g.exit_cost < best_total) {
                best_end = i;
                best_total = depart[i] + g.exit_cost;
            }
        }
        if (best_end < 0 || best_total >= 0.0) break;

        std::vector<int> path;
        for (int v = best_end; v >= 0; v = pred[v]) path.push_back(v);
        std::reverse(path.begin(), path.end());
        for (int v : path) alive[v] = 0;
        for (int v : path) {
            for (int u = 0; u < n; ++u) {
                if (!alive[u] || g.detections[u].frame != g.detections[v].frame) continue;
                if (iou(g.detections[u].box, g.detections[v].box) > g.nms_threshold) alive[u] = 0;
            }
        }
        paths.push_back(std::move(path));
    }
    return sort_paths(std::move(paths));
}

}  // namespace mot
