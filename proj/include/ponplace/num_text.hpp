#ifndef PONPLACE_NUM_TEXT_HPP
#define PONPLACE_NUM_TEXT_HPP

#include <charconv>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ponplace {

/// Shortest decimal text that parses back to exactly the same double; keeps
/// exported models and CSV files byte-stable and round-trip exact.
inline std::string num_text(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline double parse_num(std::string_view s) {
    double v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::runtime_error("bad number: \"" + std::string(s) + "\"");
    return v;
}

}  // namespace ponplace

#endif
