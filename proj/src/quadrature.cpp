#include "vt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "vt/errors.hpp"

namespace vt {

namespace {

// 5-point Gauss-Legendre on [0,1]
constexpr int kGL = 5;
constexpr double kGLNode[kGL] = {
    0.046910077030668004, 0.230765344947158450, 0.5,
    0.769234655052841550, 0.953089922969331996,
};
constexpr double kGLWeight[kGL] = {
    0.118463442528094544, 0.239314335249683234, 0.284444444444444444,
    0.239314335249683234, 0.118463442528094544,
};

struct Triangle {
    Point a, b, c;
    double area() const {
        return 0.5 * std::abs((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
    }
};

// Integral over a triangle via the Duffy map of the unit square:
// P(u,v) = A + u (B - A) + u v (C - B), |J| = 2 area u.
template <class F>
double triangle_rule(const Triangle& t, const F& f) {
    const double twice_area = 2.0 * t.area();
    if (twice_area <= 0.0) return 0.0;
    double sum = 0.0;
    for (int i = 0; i < kGL; ++i) {
        const double u = kGLNode[i];
        const double px = t.a.x + u * (t.b.x - t.a.x);
        const double py = t.a.y + u * (t.b.y - t.a.y);
        const double qx = u * (t.c.x - t.b.x);
        const double qy = u * (t.c.y - t.b.y);
        double inner = 0.0;
        for (int j = 0; j < kGL; ++j) {
            const double v = kGLNode[j];
            inner += kGLWeight[j] * f(px + v * qx, py + v * qy);
        }
        sum += kGLWeight[i] * u * inner;
    }
    return twice_area * sum;
}

struct Element {
    Triangle tri;
    double value = 0.0;   // sum of the four child-rule values
    double error = 0.0;   // |parent rule - child sum|
    long order = 0;       // creation index, for deterministic tie-breaks
};

void subdivide(const Triangle& t, Triangle out[4]) {
    const Point ab{0.5 * (t.a.x + t.b.x), 0.5 * (t.a.y + t.b.y)};
    const Point bc{0.5 * (t.b.x + t.c.x), 0.5 * (t.b.y + t.c.y)};
    const Point ca{0.5 * (t.c.x + t.a.x), 0.5 * (t.c.y + t.a.y)};
    out[0] = {t.a, ab, ca};
    out[1] = {ab, t.b, bc};
    out[2] = {ca, bc, t.c};
    out[3] = {ab, bc, ca};
}

template <class F>
Element make_element(const Triangle& t, const F& f, long order) {
    const double parent = triangle_rule(t, f);
    Triangle kids[4];
    subdivide(t, kids);
    double child_sum = 0.0;
    for (const Triangle& k : kids) child_sum += triangle_rule(k, f);
    return Element{t, child_sum, std::abs(parent - child_sum), order};
}

template <class F>
double adaptive_integral(const std::vector<Triangle>& seeds, const F& f, double tol,
                         long budget) {
    std::vector<Element> elems;
    elems.reserve(seeds.size() * 4);
    long order = 0;
    for (const Triangle& t : seeds) {
        if (t.area() <= 0.0) continue;
        elems.push_back(make_element(t, f, order++));
    }

    auto worse = [&](std::size_t lhs, std::size_t rhs) {
        if (elems[lhs].error != elems[rhs].error) return elems[lhs].error < elems[rhs].error;
        return elems[lhs].order > elems[rhs].order;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(worse)> heap(worse);
    double total_error = 0.0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        heap.push(i);
        total_error += elems[i].error;
    }

    std::vector<bool> retired(elems.size(), false);
    while (total_error > tol && !heap.empty()) {
        const std::size_t top = heap.top();
        if (static_cast<long>(elems.size()) + 4 > budget) {
            double best = 0.0;
            for (std::size_t i = 0; i < elems.size(); ++i)
                if (!retired[i]) best += elems[i].value;
            throw quadrature_error("quadrature budget exhausted before reaching tolerance",
                                   best, total_error);
        }
        heap.pop();
        retired[top] = true;
        total_error -= elems[top].error;
        Triangle kids[4];
        subdivide(elems[top].tri, kids);
        for (const Triangle& k : kids) {
            if (k.area() <= 0.0) continue;
            elems.push_back(make_element(k, f, order++));
            retired.push_back(false);
            heap.push(elems.size() - 1);
            total_error += elems.back().error;
        }
    }

    // deterministic summation in creation order
    double sum = 0.0, comp = 0.0;
    for (std::size_t i = 0; i < elems.size(); ++i) {
        if (retired[i]) continue;
        const double y = elems[i].value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    return sum;
}

std::vector<Triangle> prepare(const JointUtilityDistribution& dist, const Region& region) {
    std::vector<Region> pieces = split_at_lines(region, 'x', dist.kink_xs());
    std::vector<Region> ypieces;
    for (const Region& p : pieces) {
        auto split = split_at_lines(p, 'y', dist.kink_ys());
        ypieces.insert(ypieces.end(), split.begin(), split.end());
    }
    std::vector<Triangle> tris;
    for (const Region& p : ypieces) {
        const auto& v = p.vertices;
        for (std::size_t i = 1; i + 1 < v.size(); ++i)
            tris.push_back(Triangle{v[0], v[i], v[i + 1]});
    }
    return tris;
}

constexpr long kElementBudget = 200000;

}  // namespace

double region_integral(const JointUtilityDistribution& dist, const Region& region,
                       const std::function<double(double, double)>& weight, double tol) {
    if (region.degenerate()) return 0.0;
    auto f = [&](double x, double y) { return dist(x, y) * weight(x, y); };
    return adaptive_integral(prepare(dist, region), f, tol, kElementBudget);
}

double region_mass(const JointUtilityDistribution& dist, const Region& region, double tol) {
    if (region.degenerate()) return 0.0;
    auto f = [&](double x, double y) { return dist(x, y); };
    return adaptive_integral(prepare(dist, region), f, tol, kElementBudget);
}

double region_moment(const JointUtilityDistribution& dist, const Region& region, char axis,
                     double tol) {
    if (axis != 'x' && axis != 'y') throw domain_error("moment axis must be 'x' or 'y'");
    if (region.degenerate()) return 0.0;
    const bool xaxis = axis == 'x';
    auto f = [&, xaxis](double x, double y) { return (xaxis ? x : y) * dist(x, y); };
    return adaptive_integral(prepare(dist, region), f, tol, kElementBudget);
}

}  // namespace vt
