#include "mot/tracklets.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "mot/geometry.hpp"
#include "mot/gla.hpp"

namespace mot {

std::vector<Tracklet> link_consecutive(const std::vector<Detection>& detections,
                                       double overlap_min) {
    std::map<int, std::vector<int>> by_frame;
    for (int i = 0; i < static_cast<int>(detections.size()); ++i)
        by_frame[detections[i].frame].push_back(i);

    std::vector<Tracklet> tracklets;
    for (const auto& [frame, dets] : by_frame) {
        std::vector<int> active;  // tracklets ending exactly one frame ago
        for (int t = 0; t < static_cast<int>(tracklets.size()); ++t)
            if (tracklets[t].end_frame() == frame - 1) active.push_back(t);

        std::vector<char> taken(dets.size(), 0);
        if (!active.empty()) {
            Eigen::MatrixXd sim(active.size(), dets.size());
            for (int r = 0; r < static_cast<int>(active.size()); ++r)
                for (int c = 0; c < static_cast<int>(dets.size()); ++c)
                    sim(r, c) =
                        iou(tracklets[active[r]].last_box(), detections[dets[c]].box) -
                        overlap_min;
            for (const auto& [r, c] : gla_solve(sim).pairs) {
                tracklets[active[r]].boxes.emplace_back(frame, detections[dets[c]].box);
                taken[c] = 1;
            }
        }
        for (std::size_t c = 0; c < dets.size(); ++c)
            if (!taken[c]) tracklets.push_back({{{frame, detections[dets[c]].box}}});
    }
    return tracklets;
}

Eigen::Vector2d end_velocity(const Tracklet& t, int window) {
    const int n = t.length();
    if (n < 2) return Eigen::Vector2d::Zero();
    const int first = std::max(0, n - 1 - window);
    const auto& [f0, b0] = t.boxes[first];
    const auto& [f1, b1] = t.boxes[n - 1];
    const double steps = static_cast<double>(f1 - f0);
    return Eigen::Vector2d(b1.cx() - b0.cx(), b1.cy() - b0.cy()) / steps;
}

Tracklet merge_with_interpolation(const Tracklet& a, const Tracklet& b) {
    if (b.start_frame() <= a.end_frame())
        throw std::invalid_argument("merge_with_interpolation: fragments overlap");
    Tracklet out = a;
    const int gap = b.start_frame() - a.end_frame();
    for (int f = a.end_frame() + 1; f < b.start_frame(); ++f) {
        const double t = static_cast<double>(f - a.end_frame()) / static_cast<double>(gap);
        out.boxes.emplace_back(f, lerp(a.last_box(), b.first_box(), t));
    }
    out.boxes.insert(out.boxes.end(), b.boxes.begin(), b.boxes.end());
    return out;
}

std::vector<Tracklet> merge_chains(const std::vector<Tracklet>& tracklets,
                                   const std::vector<std::pair<int, int>>& links) {
    const int n = static_cast<int>(tracklets.size());
    std::vector<int> next(n, -1);
    std::vector<char> has_prev(n, 0);
    for (const auto& [from, to] : links) {
        next[from] = to;
        has_prev[to] = 1;
    }
    std::vector<Tracklet> out;
    for (int head = 0; head < n; ++head) {
        if (has_prev[head]) continue;
        Tracklet merged = tracklets[head];
        for (int cur = next[head]; cur >= 0; cur = next[cur])
            merged = merge_with_interpolation(merged, tracklets[cur]);
        out.push_back(std::move(merged));
    }
    return out;
}

std::vector<Trajectory> tracklets_to_trajectories(const std::vector<Tracklet>& tracklets) {
    std::vector<int> order(tracklets.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return tracklets[a].start_frame() < tracklets[b].start_frame();
    });
    std::vector<Trajectory> out;
    int id = 1;
    for (int i : order) {
        Trajectory t;
        t.id = id++;
        for (const auto& [frame, box] : tracklets[i].boxes) t.boxes.emplace(frame, box);
        out.push_back(std::move(t));
    }
    return out;
}

}  // namespace mot
