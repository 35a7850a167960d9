#ifndef PONPLACE_GENERATE_HPP
#define PONPLACE_GENERATE_HPP

#include "ponplace/types.hpp"

namespace ponplace {

/// Seeded uniform scenario generation. Deterministic for a given config:
/// draw order is server capacities by ascending id, then VM requirements by
/// ascending id, then ordered VM pairs in lexicographic order (one density
/// coin per pair, one rate draw per hit). Draw counts are value-independent,
/// so two configs differing only in a range produce identical structure.
Instance generate_instance(const GenConfig& cfg);

}  // namespace ponplace

#endif
