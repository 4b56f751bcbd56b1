#pragma once

#include <array>
#include <string>
#include <vector>

namespace vt {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

// Convex polygon inside the closed square [-1,1]^2, counter-clockwise
// vertex order. May be degenerate (fewer than 3 vertices or zero area).
struct Region {
    std::vector<Point> vertices;
    std::string tag;  // optional provenance label ("R1", "x>0", ...)

    double area() const;
    bool degenerate(double eps = 1e-15) const { return area() <= eps; }
    bool contains(Point p, double eps = 1e-12) const;
};

// Half-plane {p : nx*p.x + ny*p.y <= c}.
struct HalfPlane {
    double nx = 0.0;
    double ny = 0.0;
    double c = 0.0;
};

// The wedge R_i for trade type 1..8 at the given angle, clipped to the
// square. Types 1..4 hug the x-axis in quadrants 1..4 (give t2, get t1);
// types 5..8 hug the y-axis in quadrants 1..4 (give t1, get t2).
// theta at or above pi/2 - 1e-12 yields the full quadrant.
Region wedge_region(int trade_type, double theta);

// Closed quadrant q in 1..4 as a unit square region.
Region quadrant_region(int quadrant);

// Half-square {x>=0}, {x<=0}, {y>=0} or {y<=0}; axis is 'x' or 'y'.
Region half_square(char axis, bool positive);

Region clip(const Region& r, const HalfPlane& h);

// Convex polygon intersection (Sutherland-Hodgman; possibly empty).
Region intersect(const Region& a, const Region& b);

// Split a convex polygon along vertical lines x=c (axis='x') or horizontal
// lines y=c (axis='y'); returns the non-degenerate convex pieces.
std::vector<Region> split_at_lines(const Region& r, char axis, const std::vector<double>& cs);

}  // namespace vt
