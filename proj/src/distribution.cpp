#include "vt/distribution.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

#include "vt/errors.hpp"
#include "vt/quadrature.hpp"

namespace vt {

namespace {

constexpr double kSqrt2Pi = 2.5066282746310005024;

double normal_cdf(double z) { return 0.5 * (1.0 + std::erf(z * 0.70710678118654752440)); }

}  // namespace

const char* family_name(Family f) {
    switch (f) {
        case Family::Uniform: return "uniform";
        case Family::QuadrantConstant: return "quadrant_constant";
        case Family::ProductPower: return "product_power";
        case Family::ProductTent: return "product_tent";
        case Family::ProductVee: return "product_vee";
        case Family::Kde: return "kde";
        case Family::Grid: return "grid";
    }
    return "?";
}

double map_response(int k, SurveyScale scale) {
    return (2.0 * k - scale.lo - scale.hi) / static_cast<double>(scale.hi - scale.lo);
}

struct JointUtilityDistribution::Impl {
    virtual ~Impl() = default;
    virtual double eval(double x, double y) const = 0;
    virtual Family family() const = 0;
    virtual Point sample(RngStream& rng) const = 0;
    virtual double max_density() const = 0;
    virtual double default_tol() const { return 1e-9; }
    std::vector<double> kink_x, kink_y;
};

namespace {

struct UniformImpl final : JointUtilityDistribution::Impl {
    double eval(double, double) const override { return 0.25; }
    Family family() const override { return Family::Uniform; }
    Point sample(RngStream& rng) const override {
        return {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    }
    double max_density() const override { return 0.25; }
};

struct QuadrantImpl final : JointUtilityDistribution::Impl {
    explicit QuadrantImpl(const std::array<double, 4>& weights) {
        double sum = 0.0;
        for (int i = 0; i < 4; ++i) {
            if (!(weights[i] >= 0.0))
                throw construction_error("weights", "quadrant weight " + std::to_string(i + 1) +
                                                        " is negative or NaN");
            sum += weights[i];
        }
        if (sum <= 0.0) throw construction_error("weights", "all quadrant weights are zero");
        for (int i = 0; i < 4; ++i) w[i] = weights[i] / sum;
        kink_x = {0.0};
        kink_y = {0.0};
        cum[0] = w[0];
        for (int i = 1; i < 4; ++i) cum[i] = cum[i - 1] + w[i];
    }
    double eval(double x, double y) const override {
        return x >= 0 ? (y >= 0 ? w[0] : w[3]) : (y >= 0 ? w[1] : w[2]);
    }
    Family family() const override { return Family::QuadrantConstant; }
    Point sample(RngStream& rng) const override {
        const double u = rng.next_double() * cum[3];
        int q = 0;
        while (q < 3 && u > cum[q]) ++q;
        const double sx = (q == 0 || q == 3) ? 1.0 : -1.0;
        const double sy = (q == 0 || q == 1) ? 1.0 : -1.0;
        return {sx * rng.next_double(), sy * rng.next_double()};
    }
    double max_density() const override { return *std::max_element(w, w + 4); }
    double w[4];
    double cum[4];
};

// f(x,y) = g(x) g(y) with a common 1D component g of unit mass
struct ProductImpl : JointUtilityDistribution::Impl {
    double eval(double x, double y) const override { return g(x) * g(y); }
    Point sample(RngStream& rng) const override {
        return {ppf(rng.next_double()), ppf(rng.next_double())};
    }
    virtual double g(double z) const = 0;
    virtual double ppf(double u) const = 0;  // inverse CDF of g
};

struct TentImpl final : ProductImpl {
    TentImpl() { kink_x = kink_y = {0.0}; }
    double g(double z) const override { return 1.0 - std::abs(z); }
    double ppf(double u) const override {
        return u < 0.5 ? std::sqrt(2.0 * u) - 1.0 : 1.0 - std::sqrt(2.0 * (1.0 - u));
    }
    Family family() const override { return Family::ProductTent; }
    double max_density() const override { return 1.0; }
};

struct VeeImpl final : ProductImpl {
    VeeImpl() { kink_x = kink_y = {0.0}; }
    double g(double z) const override { return std::abs(z); }
    double ppf(double u) const override {
        return u < 0.5 ? -std::sqrt(1.0 - 2.0 * u) : std::sqrt(2.0 * u - 1.0);
    }
    Family family() const override { return Family::ProductVee; }
    double max_density() const override { return 1.0; }
};

struct PowerImpl final : ProductImpl {
    explicit PowerImpl(int a) : alpha(a) {
        if (a < 0) throw construction_error("alpha", "must be nonnegative");
        if (a % 2 != 0)
            throw construction_error("alpha", "must be even so the density stays nonnegative");
        if (a > 0) kink_x = kink_y = {0.0};
        scale = (a + 1) / 2.0;
    }
    double g(double z) const override {
        return z < 0 ? scale * std::pow(z, alpha) : scale * std::pow(z - 1.0, alpha);
    }
    double ppf(double u) const override {
        const double inv = 1.0 / (alpha + 1);
        return u < 0.5 ? -std::pow(1.0 - 2.0 * u, inv) : 1.0 - std::pow(2.0 - 2.0 * u, inv);
    }
    Family family() const override { return Family::ProductPower; }
    double max_density() const override { return scale * scale; }
    int alpha;
    double scale;
};

struct KdeImpl final : JointUtilityDistribution::Impl {
    KdeImpl(const std::vector<Point>& centers, double hx_, double hy_,
            const std::vector<double>& weights)
        : pts(centers), hx(hx_), hy(hy_) {
        if (pts.size() < 1) throw construction_error("centers", "need at least one kernel");
        if (!(hx > 0.0) || !(hy > 0.0))
            throw construction_error("bandwidth", "must be positive");
        w = weights.empty() ? std::vector<double>(pts.size(), 1.0) : weights;
        if (w.size() != pts.size())
            throw construction_error("weights", "length does not match centers");
        for (const Point& p : pts)
            if (std::abs(p.x) > 1.0 || std::abs(p.y) > 1.0)
                throw construction_error("centers", "kernel center outside the square");

        double z = 0.0;
        pick.resize(pts.size());
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double px = normal_cdf((1.0 - pts[k].x) / hx) - normal_cdf((-1.0 - pts[k].x) / hx);
            const double py = normal_cdf((1.0 - pts[k].y) / hy) - normal_cdf((-1.0 - pts[k].y) / hy);
            z += w[k] * (hx * kSqrt2Pi * px) * (hy * kSqrt2Pi * py);
            pick[k] = w[k] * px * py;
        }
        norm_inv = 1.0 / z;
        double acc = 0.0;
        for (double& p : pick) {
            acc += p;
            p = acc;
        }
        pick_total = acc;
        inv2hx2 = 0.5 / (hx * hx);
        inv2hy2 = 0.5 / (hy * hy);
    }
    double eval(double x, double y) const override {
        double s = 0.0;
        for (std::size_t k = 0; k < pts.size(); ++k) {
            const double dx = x - pts[k].x;
            const double dy = y - pts[k].y;
            s += w[k] * std::exp(-(dx * dx * inv2hx2 + dy * dy * inv2hy2));
        }
        return s * norm_inv;
    }
    Family family() const override { return Family::Kde; }
    Point sample(RngStream& rng) const override {
        const double u = rng.next_double() * pick_total;
        const std::size_t k = std::lower_bound(pick.begin(), pick.end(), u) - pick.begin();
        const Point& c = pts[std::min(k, pts.size() - 1)];
        auto truncated = [&rng](double mean, double h) {
            for (int tries = 0; tries < 100000; ++tries) {
                const double v = mean + h * rng.normal();
                if (v >= -1.0 && v <= 1.0) return v;
            }
            throw error("kde sampling rejection cap exceeded");
        };
        return {truncated(c.x, hx), truncated(c.y, hy)};
    }
    double max_density() const override {
        return norm_inv * std::accumulate(w.begin(), w.end(), 0.0);
    }
    double default_tol() const override { return 1e-7; }

    std::vector<Point> pts;
    std::vector<double> w;
    double hx, hy;
    double norm_inv;
    double inv2hx2, inv2hy2;
    std::vector<double> pick;
    double pick_total = 0.0;
};

struct GridImpl final : JointUtilityDistribution::Impl {
    GridImpl(const std::vector<double>& node_values, int nx_, int ny_, bool normalize)
        : vals(node_values), nx(nx_), ny(ny_) {
        if (nx < 2 || ny < 2) throw construction_error("grid", "need at least 2x2 nodes");
        if (static_cast<int>(vals.size()) != nx * ny)
            throw construction_error("values", "length does not match nx*ny");
        for (double v : vals)
            if (!(v >= 0.0)) throw construction_error("values", "negative or NaN node value");
        // exact mass of the bilinear interpolant: per cell, area * corner mean
        const double cw = 2.0 / (nx - 1);
        const double ch = 2.0 / (ny - 1);
        double mass = 0.0;
        for (int j = 0; j + 1 < ny; ++j)
            for (int i = 0; i + 1 < nx; ++i)
                mass += 0.25 * (at(i, j) + at(i + 1, j) + at(i, j + 1) + at(i + 1, j + 1));
        mass *= cw * ch;
        if (normalize) {
            if (mass <= 0.0) throw construction_error("values", "zero total mass");
            for (double& v : vals) v /= mass;
        }
        for (int i = 1; i + 1 < nx; ++i) kink_x.push_back(-1.0 + cw * i);
        for (int j = 1; j + 1 < ny; ++j) kink_y.push_back(-1.0 + ch * j);
        peak = *std::max_element(vals.begin(), vals.end());
    }
    double at(int i, int j) const { return vals[static_cast<std::size_t>(j) * nx + i]; }
    double eval(double x, double y) const override {
        const double fx = (x + 1.0) * 0.5 * (nx - 1);
        const double fy = (y + 1.0) * 0.5 * (ny - 1);
        int i = std::clamp(static_cast<int>(fx), 0, nx - 2);
        int j = std::clamp(static_cast<int>(fy), 0, ny - 2);
        const double tx = std::clamp(fx - i, 0.0, 1.0);
        const double ty = std::clamp(fy - j, 0.0, 1.0);
        return (1 - tx) * (1 - ty) * at(i, j) + tx * (1 - ty) * at(i + 1, j) +
               (1 - tx) * ty * at(i, j + 1) + tx * ty * at(i + 1, j + 1);
    }
    Family family() const override { return Family::Grid; }
    Point sample(RngStream& rng) const override {
        for (int tries = 0; tries < 1000000; ++tries) {
            const double x = rng.uniform(-1.0, 1.0);
            const double y = rng.uniform(-1.0, 1.0);
            if (rng.next_double() * peak <= eval(x, y)) return {x, y};
        }
        throw error("grid sampling rejection cap exceeded");
    }
    double max_density() const override { return peak; }
    double default_tol() const override { return 1e-7; }

    std::vector<double> vals;
    int nx, ny;
    double peak = 0.0;
};

}  // namespace

JointUtilityDistribution::JointUtilityDistribution(std::shared_ptr<const Impl> impl)
    : impl_(std::move(impl)) {}

double JointUtilityDistribution::density(double x, double y) const {
    if (!(std::abs(x) <= 1.0) || !(std::abs(y) <= 1.0))
        throw domain_error("density point outside [-1,1]^2");
    return impl_->eval(x, y);
}

double JointUtilityDistribution::eval(double x, double y) const { return impl_->eval(x, y); }

Family JointUtilityDistribution::family() const { return impl_->family(); }

const std::vector<double>& JointUtilityDistribution::kink_xs() const { return impl_->kink_x; }
const std::vector<double>& JointUtilityDistribution::kink_ys() const { return impl_->kink_y; }

Point JointUtilityDistribution::sample(RngStream& rng) const { return impl_->sample(rng); }

double JointUtilityDistribution::default_tol() const { return impl_->default_tol(); }

double JointUtilityDistribution::max_density() const { return impl_->max_density(); }

JointUtilityDistribution JointUtilityDistribution::uniform() {
    return JointUtilityDistribution(std::make_shared<UniformImpl>());
}

JointUtilityDistribution JointUtilityDistribution::quadrant_constant(
    const std::array<double, 4>& weights) {
    return JointUtilityDistribution(std::make_shared<QuadrantImpl>(weights));
}

JointUtilityDistribution JointUtilityDistribution::product_power(int alpha) {
    if (alpha == 0) return uniform();
    return JointUtilityDistribution(std::make_shared<PowerImpl>(alpha));
}

JointUtilityDistribution JointUtilityDistribution::product_tent() {
    return JointUtilityDistribution(std::make_shared<TentImpl>());
}

JointUtilityDistribution JointUtilityDistribution::product_vee() {
    return JointUtilityDistribution(std::make_shared<VeeImpl>());
}

JointUtilityDistribution JointUtilityDistribution::kde(const std::vector<Point>& centers,
                                                       double bandwidth_x, double bandwidth_y,
                                                       const std::vector<double>& weights) {
    return JointUtilityDistribution(
        std::make_shared<KdeImpl>(centers, bandwidth_x, bandwidth_y, weights));
}

JointUtilityDistribution JointUtilityDistribution::grid(const std::vector<double>& node_values,
                                                        int nx, int ny, bool normalize) {
    return JointUtilityDistribution(std::make_shared<GridImpl>(node_values, nx, ny, normalize));
}

KdeParameters kde_parameters(const std::vector<SurveyRecord>& records, SurveyScale scale,
                             std::optional<double> bandwidth) {
    if (scale.hi <= scale.lo) throw construction_error("scale", "upper bound must exceed lower");
    if (records.size() < 2)
        throw construction_error("records", "kernel density estimation needs at least 2 records");
    if (bandwidth) {
        if (!(*bandwidth > 0.0)) throw construction_error("bandwidth", "must be positive");
        return {*bandwidth, *bandwidth};
    }
    // Scott's rule per axis on the mapped samples: sigma * m^(-1/6)
    const double m = static_cast<double>(records.size());
    double sx = 0.0, sy = 0.0, mx = 0.0, my = 0.0;
    for (const SurveyRecord& r : records) {
        mx += map_response(r.response_1, scale);
        my += map_response(r.response_2, scale);
    }
    mx /= m;
    my /= m;
    for (const SurveyRecord& r : records) {
        const double dx = map_response(r.response_1, scale) - mx;
        const double dy = map_response(r.response_2, scale) - my;
        sx += dx * dx;
        sy += dy * dy;
    }
    sx = std::sqrt(sx / (m - 1));
    sy = std::sqrt(sy / (m - 1));
    if (sx <= 0.0 || sy <= 0.0)
        throw construction_error(
            "bandwidth", "samples have zero variance on an axis; pass an explicit bandwidth");
    const double factor = std::pow(m, -1.0 / 6.0);
    return {sx * factor, sy * factor};
}

JointUtilityDistribution kde_from_survey(const std::vector<SurveyRecord>& records,
                                         SurveyScale scale, std::optional<double> bandwidth) {
    const KdeParameters par = kde_parameters(records, scale, bandwidth);
    for (const SurveyRecord& r : records) {
        if (r.response_1 < scale.lo || r.response_1 > scale.hi || r.response_2 < scale.lo ||
            r.response_2 > scale.hi)
            throw construction_error("records", "response outside the declared scale");
    }
    // collapse duplicate responses into weighted kernels
    std::map<std::pair<int, int>, double> counts;
    for (const SurveyRecord& r : records) counts[{r.response_1, r.response_2}] += 1.0;
    std::vector<Point> centers;
    std::vector<double> weights;
    centers.reserve(counts.size());
    for (const auto& [key, count] : counts) {
        centers.push_back({map_response(key.first, scale), map_response(key.second, scale)});
        weights.push_back(count);
    }
    return JointUtilityDistribution::kde(centers, par.bandwidth_x, par.bandwidth_y, weights);
}

namespace {

bool parse_int_field(std::string field, int& out) {
    const auto first = field.find_first_not_of(" \t\r");
    if (first == std::string::npos) return false;
    const auto last = field.find_last_not_of(" \t\r");
    field = field.substr(first, last - first + 1);
    const char* begin = field.data();
    const char* end = begin + field.size();
    auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<SurveyRecord> parse_survey_text(const std::string& text, SurveyScale scale,
                                            const std::string& origin) {
    std::istringstream in(text);
    std::string line;
    std::vector<SurveyRecord> records;
    std::vector<long> bad_lines;
    long line_no = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (!saw_header) {
            saw_header = true;  // header row, contents not interpreted
            continue;
        }
        std::vector<std::string> fields;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = line.find(',', start);
            fields.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        SurveyRecord rec;
        const bool shape_ok = fields.size() == 2 && parse_int_field(fields[0], rec.response_1) &&
                              parse_int_field(fields[1], rec.response_2);
        const bool range_ok = shape_ok && rec.response_1 >= scale.lo &&
                              rec.response_1 <= scale.hi && rec.response_2 >= scale.lo &&
                              rec.response_2 <= scale.hi;
        if (!range_ok) {
            bad_lines.push_back(line_no);
            continue;
        }
        records.push_back(rec);
    }
    if (!bad_lines.empty()) {
        std::ostringstream msg;
        msg << origin << ": " << bad_lines.size() << " row(s) rejected (malformed or outside scale "
            << scale.lo << ".." << scale.hi << "); lines:";
        for (long ln : bad_lines) msg << ' ' << ln;
        throw io_error(msg.str());
    }
    return records;
}

std::vector<SurveyRecord> parse_survey_csv(const std::string& path, SurveyScale scale) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open survey csv: " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_survey_text(buffer.str(), scale, path);
}

ValidationReport validate(const JointUtilityDistribution& dist, double tol) {
    ValidationReport rep;
    rep.tol = tol;
    const double qtol = std::min(tol / 8.0, dist.default_tol());
    for (int q = 1; q <= 4; ++q)
        rep.quadrant_masses[q - 1] = region_mass(dist, quadrant_region(q), qtol);
    rep.total_mass = rep.quadrant_masses[0] + rep.quadrant_masses[1] + rep.quadrant_masses[2] +
                     rep.quadrant_masses[3];
    rep.min_sampled_density = std::numeric_limits<double>::infinity();
    constexpr int kScan = 201;
    for (int i = 0; i < kScan; ++i) {
        for (int j = 0; j < kScan; ++j) {
            const double x = -1.0 + 2.0 * i / (kScan - 1);
            const double y = -1.0 + 2.0 * j / (kScan - 1);
            rep.min_sampled_density = std::min(rep.min_sampled_density, dist.density(x, y));
        }
    }
    rep.pass = std::abs(rep.total_mass - 1.0) <= tol && rep.min_sampled_density >= 0.0;
    return rep;
}

}  // namespace vt
