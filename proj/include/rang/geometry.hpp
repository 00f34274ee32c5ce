#pragma once

#include <cmath>
#include <stdexcept>

namespace rang {

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

inline double dist(const Point2& a, const Point2& b) {
    const double dx = a.x - b.x, dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

struct Rect {
    double xmin, xmax, ymin, ymax;

    Rect(double x0, double x1, double y0, double y1)
        : xmin(x0), xmax(x1), ymin(y0), ymax(y1) {
        if (!(xmin < xmax) || !(ymin < ymax))
            throw std::invalid_argument("Rect: require xmin < xmax and ymin < ymax");
    }

    static Rect unit() { return Rect(0.0, 1.0, 0.0, 1.0); }

    double width() const { return xmax - xmin; }
    double height() const { return ymax - ymin; }
    double area() const { return width() * height(); }

    bool contains(const Point2& p) const {
        return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
    }

    // Affine map from the unit square into this rect.
    Point2 from_unit(const Point2& u) const {
        return {xmin + u.x * width(), ymin + u.y * height()};
    }

    Point2 to_unit(const Point2& p) const {
        return {(p.x - xmin) / width(), (p.y - ymin) / height()};
    }
};

} // namespace rang
