#pragma once

#include <stdexcept>
#include <string>

namespace moyal {

// Base class for numerical-domain failures; configuration problems use
// std::invalid_argument so callers can tell the two apart.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct degenerate_quadratic_error : error {
    using error::error;
};
struct branch_ambiguity_error : error {
    using error::error;
};
struct order_too_large_error : error {
    using error::error;
};
struct out_of_range_error : error {
    using error::error;
};
struct non_convergent_error : error {
    using error::error;
};
struct grid_mismatch_error : error {
    using error::error;
};
struct grid_too_large_error : error {
    using error::error;
};
struct degree_overflow_error : error {
    using error::error;
};
struct not_normalized_error : error {
    using error::error;
};
struct unsupported_hamiltonian_error : error {
    using error::error;
};
struct unsupported_family_error : error {
    using error::error;
};
struct window_too_small_error : error {
    using error::error;
};
struct zero_time_error : error {
    using error::error;
};

struct caustic_error : error {
    using error::error;
};
struct caustic_singularity_error : caustic_error {
    using caustic_error::caustic_error;
};
struct caustic_at_endpoint_error : caustic_error {
    using caustic_error::caustic_error;
};
struct caustic_crossing_error : caustic_error {
    using caustic_error::caustic_error;
};

// Cross-route agreement failures (e.g. the two circle propagator forms).
struct consistency_error : error {
    using error::error;
};

}  // namespace moyal
