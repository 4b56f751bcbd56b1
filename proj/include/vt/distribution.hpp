#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "vt/geometry.hpp"
#include "vt/rng.hpp"

namespace vt {

enum class Family {
    Uniform,
    QuadrantConstant,
    ProductPower,
    ProductTent,
    ProductVee,
    Kde,
    Grid,
};

const char* family_name(Family f);

struct SurveyScale {
    int lo = 1;
    int hi = 7;
};

struct SurveyRecord {
    int response_1 = 0;
    int response_2 = 0;
};

// Affine map of an ordinal response onto [-1,1]: lo -> -1, hi -> +1,
// midpoint -> 0.
double map_response(int k, SurveyScale scale);

// Joint utility density on [-1,1]^2, normalized to unit mass, immutable
// after construction and safe to evaluate concurrently.
class JointUtilityDistribution {
public:
    // value of the normalized density; throws domain_error outside the square
    double density(double x, double y) const;

    // unchecked fast path for the quadrature inner loop
    double operator()(double x, double y) const { return eval(x, y); }

    Family family() const;

    // lines x=c / y=c where the density is allowed to be non-smooth;
    // quadrature splits regions along these before integrating
    const std::vector<double>& kink_xs() const;
    const std::vector<double>& kink_ys() const;

    // i.i.d. draw from the density
    Point sample(RngStream& rng) const;

    // suggested absolute quadrature tolerance for this family
    double default_tol() const;

    // upper bound on the density over the square
    double max_density() const;

    static JointUtilityDistribution uniform();
    // weights ordered Q1 (x>0,y>0), Q2 (x<0,y>0), Q3 (x<0,y<0), Q4 (x>0,y<0);
    // nonnegative with positive sum, rescaled to unit total mass
    static JointUtilityDistribution quadrant_constant(const std::array<double, 4>& weights);
    // f(x,y) = g_a(x) g_a(y); alpha must be a nonnegative even integer
    static JointUtilityDistribution product_power(int alpha);
    static JointUtilityDistribution product_tent();
    static JointUtilityDistribution product_vee();
    // product Gaussian kernels at the given centers, truncated to the square
    // and renormalized; weights default to 1 per center
    static JointUtilityDistribution kde(const std::vector<Point>& centers,
                                        double bandwidth_x, double bandwidth_y,
                                        const std::vector<double>& weights = {});
    // node values on a uniform lattice over the square, bilinear between
    // nodes; values row-major with x varying fastest, rows from y=-1 up
    static JointUtilityDistribution grid(const std::vector<double>& node_values,
                                         int nx, int ny, bool normalize = true);

    struct Impl;
    explicit JointUtilityDistribution(std::shared_ptr<const Impl> impl);

private:
    double eval(double x, double y) const;
    std::shared_ptr<const Impl> impl_;
};

// Gaussian KDE from survey responses mapped onto [-1,1]. With no explicit
// bandwidth, Scott's rule per axis on the mapped samples; zero variance on
// an axis then raises construction_error asking for an explicit bandwidth.
JointUtilityDistribution kde_from_survey(const std::vector<SurveyRecord>& records,
                                         SurveyScale scale,
                                         std::optional<double> bandwidth = std::nullopt);

// Resolved KDE parameters (for writing ingested spec files).
struct KdeParameters {
    double bandwidth_x = 0.0;
    double bandwidth_y = 0.0;
};
KdeParameters kde_parameters(const std::vector<SurveyRecord>& records, SurveyScale scale,
                             std::optional<double> bandwidth = std::nullopt);

// Parses a two-column integer CSV with a header row. Rows with malformed
// fields or out-of-scale responses fail the parse; the error message lists
// the offending line numbers.
std::vector<SurveyRecord> parse_survey_csv(const std::string& path, SurveyScale scale);
std::vector<SurveyRecord> parse_survey_text(const std::string& text, SurveyScale scale,
                                            const std::string& origin = "<memory>");

struct ValidationReport {
    double total_mass = 0.0;
    double min_sampled_density = 0.0;
    std::array<double, 4> quadrant_masses{};  // Q1..Q4
    double tol = 0.0;
    bool pass = false;
};

// Integrates the density over the four quadrants and scans a lattice for
// negative values. Passes iff |mass - 1| <= tol and nothing negative.
ValidationReport validate(const JointUtilityDistribution& dist, double tol);

}  // namespace vt
