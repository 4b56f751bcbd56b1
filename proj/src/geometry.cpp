#include "vt/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "vt/errors.hpp"

namespace vt {

namespace {

constexpr double kPi = 3.14159265358979323846;

double signed_area(const std::vector<Point>& v) {
    double s = 0.0;
    const std::size_t n = v.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = v[i];
        const Point& q = v[(i + 1) % n];
        s += p.x * q.y - q.x * p.y;
    }
    return 0.5 * s;
}

void make_ccw(std::vector<Point>& v) {
    if (v.size() >= 3 && signed_area(v) < 0.0) std::reverse(v.begin(), v.end());
}

Point line_intersection(Point p, Point q, double nx, double ny, double c) {
    // segment p-q against line nx*x + ny*y = c; caller guarantees a crossing
    const double dp = nx * p.x + ny * p.y - c;
    const double dq = nx * q.x + ny * q.y - c;
    const double t = dp / (dp - dq);
    return {p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)};
}

std::vector<Point> clip_vertices(const std::vector<Point>& in, double nx, double ny, double c) {
    std::vector<Point> out;
    const std::size_t n = in.size();
    if (n == 0) return out;
    out.reserve(n + 2);
    for (std::size_t i = 0; i < n; ++i) {
        const Point& p = in[i];
        const Point& q = in[(i + 1) % n];
        const bool pin = nx * p.x + ny * p.y <= c;
        const bool qin = nx * q.x + ny * q.y <= c;
        if (pin) {
            out.push_back(p);
            if (!qin) out.push_back(line_intersection(p, q, nx, ny, c));
        } else if (qin) {
            out.push_back(line_intersection(p, q, nx, ny, c));
        }
    }
    // drop repeated vertices introduced by clips through existing vertices
    std::vector<Point> dedup;
    dedup.reserve(out.size());
    for (const Point& p : out) {
        if (dedup.empty() || std::abs(p.x - dedup.back().x) > 1e-14 ||
            std::abs(p.y - dedup.back().y) > 1e-14) {
            dedup.push_back(p);
        }
    }
    while (dedup.size() > 1 && std::abs(dedup.front().x - dedup.back().x) <= 1e-14 &&
           std::abs(dedup.front().y - dedup.back().y) <= 1e-14) {
        dedup.pop_back();
    }
    return dedup;
}

}  // namespace

double Region::area() const { return std::abs(signed_area(vertices)); }

bool Region::contains(Point p, double eps) const {
    if (vertices.size() < 3) return false;
    const std::size_t n = vertices.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % n];
        const double cross = (b.x - a.x) * (p.y - a.y) - (b.y - a.y) * (p.x - a.x);
        if (cross < -eps) return false;  // CCW polygons keep interior on the left
    }
    return true;
}

Region wedge_region(int trade_type, double theta) {
    if (trade_type < 1 || trade_type > 8)
        throw domain_error("trade_type must be in 1..8");
    if (!(theta >= 0.0) || theta > kPi / 2 + 1e-12)
        throw domain_error("wedge angle must lie in [0, pi/2]");

    // template wedge in quadrant 1 measured from the x-axis
    std::vector<Point> base;
    if (theta <= 0.0) {
        base = {{0.0, 0.0}, {1.0, 0.0}};  // degenerate, zero area
    } else if (theta >= kPi / 2 - 1e-12) {
        base = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}};
    } else {
        const double t = std::tan(theta);
        if (t <= 1.0) {
            base = {{0.0, 0.0}, {1.0, 0.0}, {1.0, t}};
        } else {
            base = {{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {1.0 / t, 1.0}};
        }
    }

    Region r;
    r.tag = "R" + std::to_string(trade_type);
    r.vertices.reserve(base.size());
    for (const Point& p : base) {
        switch (trade_type) {
            case 1: r.vertices.push_back({p.x, p.y}); break;
            case 2: r.vertices.push_back({-p.x, p.y}); break;
            case 3: r.vertices.push_back({-p.x, -p.y}); break;
            case 4: r.vertices.push_back({p.x, -p.y}); break;
            case 5: r.vertices.push_back({p.y, p.x}); break;
            case 6: r.vertices.push_back({-p.y, p.x}); break;
            case 7: r.vertices.push_back({-p.y, -p.x}); break;
            case 8: r.vertices.push_back({p.y, -p.x}); break;
        }
    }
    make_ccw(r.vertices);
    return r;
}

Region quadrant_region(int quadrant) {
    Region r;
    r.tag = "Q" + std::to_string(quadrant);
    switch (quadrant) {
        case 1: r.vertices = {{0, 0}, {1, 0}, {1, 1}, {0, 1}}; break;
        case 2: r.vertices = {{-1, 0}, {0, 0}, {0, 1}, {-1, 1}}; break;
        case 3: r.vertices = {{-1, -1}, {0, -1}, {0, 0}, {-1, 0}}; break;
        case 4: r.vertices = {{0, -1}, {1, -1}, {1, 0}, {0, 0}}; break;
        default: throw domain_error("quadrant must be in 1..4");
    }
    return r;
}

Region half_square(char axis, bool positive) {
    Region r;
    if (axis == 'x') {
        r.tag = positive ? "x>0" : "x<0";
        r.vertices = positive
                         ? std::vector<Point>{{0, -1}, {1, -1}, {1, 1}, {0, 1}}
                         : std::vector<Point>{{-1, -1}, {0, -1}, {0, 1}, {-1, 1}};
    } else if (axis == 'y') {
        r.tag = positive ? "y>0" : "y<0";
        r.vertices = positive
                         ? std::vector<Point>{{-1, 0}, {1, 0}, {1, 1}, {-1, 1}}
                         : std::vector<Point>{{-1, -1}, {1, -1}, {1, 0}, {-1, 0}};
    } else {
        throw domain_error("axis must be 'x' or 'y'");
    }
    return r;
}

Region clip(const Region& r, const HalfPlane& h) {
    Region out;
    out.tag = r.tag;
    out.vertices = clip_vertices(r.vertices, h.nx, h.ny, h.c);
    return out;
}

Region intersect(const Region& a, const Region& b) {
    Region out;
    out.tag = a.tag.empty() ? b.tag : (b.tag.empty() ? a.tag : a.tag + "&" + b.tag);
    if (a.vertices.size() < 3 || b.vertices.size() < 3) return out;
    std::vector<Point> cur = a.vertices;
    const std::size_t n = b.vertices.size();
    for (std::size_t i = 0; i < n && !cur.empty(); ++i) {
        const Point& p = b.vertices[i];
        const Point& q = b.vertices[(i + 1) % n];
        // inside of CCW edge p->q is the left side: (q-p) x (v-p) >= 0,
        // i.e. -(q.y-p.y)*v.x + (q.x-p.x)*v.y <= -(q.y-p.y)*p.x + (q.x-p.x)*p.y
        const double nx = q.y - p.y;
        const double ny = -(q.x - p.x);
        const double c = nx * p.x + ny * p.y;
        cur = clip_vertices(cur, nx, ny, c);
    }
    out.vertices = std::move(cur);
    return out;
}

std::vector<Region> split_at_lines(const Region& r, char axis, const std::vector<double>& cs) {
    std::vector<Region> pieces{r};
    for (double c : cs) {
        std::vector<Region> next;
        for (const Region& piece : pieces) {
            const HalfPlane below = (axis == 'x') ? HalfPlane{1, 0, c} : HalfPlane{0, 1, c};
            const HalfPlane above = (axis == 'x') ? HalfPlane{-1, 0, -c} : HalfPlane{0, -1, -c};
            Region lo = clip(piece, below);
            Region hi = clip(piece, above);
            const bool keep_lo = !lo.degenerate();
            const bool keep_hi = !hi.degenerate();
            if (keep_lo) next.push_back(std::move(lo));
            if (keep_hi) next.push_back(std::move(hi));
            if (!keep_lo && !keep_hi && !piece.degenerate())
                next.push_back(piece);  // numerical corner: keep the original
        }
        pieces = std::move(next);
    }
    return pieces;
}

}  // namespace vt
