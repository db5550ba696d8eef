#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mot {

/// Axis-aligned box in pixel coordinates, top-left origin.
struct BBox {
    double left = 0.0;
    double top = 0.0;
    double width = 1.0;
    double height = 1.0;

    BBox() = default;
    BBox(double l, double t, double w, double h) : left(l), top(t), width(w), height(h) {
        if (!(width > 0.0) || !(height > 0.0))
            throw std::invalid_argument("BBox: width and height must be positive");
    }

    double right() const { return left + width; }
    double bottom() const { return top + height; }
    double area() const { return width * height; }
    double cx() const { return left + 0.5 * width; }
    double cy() const { return top + 0.5 * height; }

    bool operator==(const BBox& o) const {
        return left == o.left && top == o.top && width == o.width && height == o.height;
    }
};

/// Intersection-over-union. Touching boxes (zero-area overlap) score 0.
inline double iou(const BBox& a, const BBox& b) {
    const double iw = std::min(a.right(), b.right()) - std::max(a.left, b.left);
    if (iw <= 0.0) return 0.0;
    const double ih = std::min(a.bottom(), b.bottom()) - std::max(a.top, b.top);
    if (ih <= 0.0) return 0.0;
    const double inter = iw * ih;
    return inter / (a.area() + b.area() - inter);
}

inline double center_distance(const BBox& a, const BBox& b) {
    const double dx = a.cx() - b.cx();
    const double dy = a.cy() - b.cy();
    return std::sqrt(dx * dx + dy * dy);
}

/// Component-wise linear interpolation, t in [0, 1].
inline BBox lerp(const BBox& a, const BBox& b, double t) {
    return BBox(a.left + t * (b.left - a.left), a.top + t * (b.top - a.top),
                a.width + t * (b.width - a.width), a.height + t * (b.height - a.height));
}

}  // namespace mot
