#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace vt {

struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Bad argument values (point outside the square, even committee size, ...).
struct domain_error : error {
    using error::error;
};

// Invalid parameters at construction time; names the offending field.
struct construction_error : error {
    construction_error(const std::string& field_name, const std::string& what)
        : error("invalid field '" + field_name + "': " + what), field(field_name) {}
    std::string field;
};

// Adaptive integration ran out of budget; carries the best estimate so far.
struct quadrature_error : error {
    quadrature_error(const std::string& what, double est, double bound)
        : error(what), estimate(est), error_bound(bound) {}
    double estimate;
    double error_bound;
};

// Conditioning mass for the trading partner is zero (Appendix-style 0/0).
struct no_partner_error : error {
    using error::error;
};

// Fixed-point iteration did not converge; carries the last iterate and the
// residual history for diagnostics.
struct nonconvergence_error : error {
    nonconvergence_error(const std::string& what, std::vector<double> history,
                         std::vector<double> last)
        : error(what), residual_history(std::move(history)), last_iterate(std::move(last)) {}
    std::vector<double> residual_history;
    std::vector<double> last_iterate;  // eight angles
};

struct io_error : error {
    using error::error;
};

}  // namespace vt
