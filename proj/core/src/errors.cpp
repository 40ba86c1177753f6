#include "nhminor/errors.hpp"

namespace nhminor {

QuadratureNotConverged::QuadratureNotConverged(const std::string& what, double estimate,
                                               double error)
    : NumericalError(what + ": refinement difference " + std::to_string(error) +
                     " above tolerance"),
      estimate_(estimate),
      error_(error) {}

InsufficientReplicas::InsufficientReplicas(std::size_t have, std::size_t need)
    : NumericalError("need at least " + std::to_string(need) + " replicas, got " +
                     std::to_string(have)) {}

}  // namespace nhminor
