#include <algorithm>

#include "mot/flow.hpp"
#include "mot/trackers.hpp"

namespace mot {

std::vector<Trajectory> track_dp_nms(const std::vector<Detection>& detections,
                                     const ParamSet& params, DpMode mode) {
    if (detections.empty()) return {};

    // Full-field sort makes the flow cost independent of input order.
    std::vector<Detection> sorted = detections;
    std::sort(sorted.begin(), sorted.end(), [](const Detection& a, const Detection& b) {
        const auto key = [](const Detection& d) {
            return std::make_tuple(d.frame, d.box.left, d.box.top, d.box.width, d.box.height,
                                   d.confidence);
        };
        return key(a) < key(b);
    });

    const FlowGraph g = build_flow_graph(sorted, params);
    const auto paths = mode == DpMode::exact ? min_cost_flow(g) : dp_greedy_paths(g);

    std::vector<Trajectory> out;
    int id = 1;
    for (const auto& path : paths) {
        Trajectory t;
        t.id = id++;
        for (int i : path) t.boxes.emplace(sorted[i].frame, sorted[i].box);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace mot
