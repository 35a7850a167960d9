#ifndef PONPLACE_VALIDATE_HPP
#define PONPLACE_VALIDATE_HPP

#include "ponplace/types.hpp"

namespace ponplace {

/// Structural and feasibility-necessary checks. Violations make the instance
/// unusable; warnings flag instances that are likely (not provably)
/// network-infeasible.
ValidationReport validate_instance(const Instance& inst);

/// Range/shape checks for a generator configuration.
ValidationReport validate_config(const GenConfig& cfg);

}  // namespace ponplace

#endif
