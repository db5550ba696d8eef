#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "mot/geometry.hpp"

namespace mot {

/// One detector response. Frames are 1-based.
struct Detection {
    int frame = 1;
    BBox box;
    double confidence = 0.0;

    Detection() = default;
    Detection(int f, BBox b, double conf) : frame(f), box(b), confidence(conf) {
        if (frame < 1) throw std::invalid_argument("Detection: frame must be >= 1");
    }
};

/// Identity-labeled boxes over a (possibly gapped) frame set.
struct Trajectory {
    int id = 1;
    std::map<int, BBox> boxes;

    int start_frame() const { return boxes.begin()->first; }
    int end_frame() const { return boxes.rbegin()->first; }
    bool has_frame(int f) const { return boxes.count(f) != 0; }
    std::size_t size() const { return boxes.size(); }

    bool operator==(const Trajectory& o) const { return id == o.id && boxes == o.boxes; }
};

struct Sequence {
    std::string name = "seq";
    int frame_count = 1;
    double frame_rate = 30.0;
    double image_width = 640.0;
    double image_height = 480.0;
};

}  // namespace mot
