#ifndef PONPLACE_SERIALIZE_HPP
#define PONPLACE_SERIALIZE_HPP

#include <stdexcept>
#include <string>

#include "ponplace/types.hpp"

namespace ponplace {

/// Malformed document (syntax, with location) or schema violation (names the
/// offending field).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Instance documents. save emits canonical ordering (servers and vms by id,
// demands by (src,dst)), so load(save(x)) == x and byte output is stable.
std::string save_instance(const Instance& inst);
Instance load_instance(const std::string& text);

std::string save_placement(const Placement& p);
Placement load_placement(const std::string& text);

// Small file helpers shared by the tools.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace ponplace

#endif
