#pragma once

#include <stdexcept>
#include <string>

namespace lake {

// Parameters outside the admissible region (sigma^2 >= rho + 2b): the
// welfare function is identically -infinity and nothing can be computed.
struct infeasible_error : std::domain_error {
    using std::domain_error::domain_error;
};

// A quantity that is only established for unit ecological weight (c == 1)
// was requested with a different c.
struct unsupported_error : std::domain_error {
    using std::domain_error::domain_error;
};

// Malformed configuration: bad flag values, bad config file, grid/scheme
// combinations that violate the monotonicity condition, and similar.
struct config_error : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// The candidate node values are not strictly decreasing where the scheme
// requires them to be (the forward difference must stay negative).
struct monotone_violation : std::domain_error {
    using std::domain_error::domain_error;
};

// The Hamiltonian was evaluated on the p >= 0 branch, where the supremum
// over controls is +infinity.  Kept as an error type so the value can never
// silently propagate as a float.
struct unbounded_hamiltonian : std::domain_error {
    using std::domain_error::domain_error;
};

} // namespace lake
