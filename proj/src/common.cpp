#include "pabidot/error.hpp"
#include "pabidot/random.hpp"
#include "pabidot/types.hpp"

#include <numbers>

namespace pabidot {

std::string_view to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::axis: return "axis";
    case ErrorKind::shape: return "shape";
    case ErrorKind::constant_column: return "constant_column";
    case ErrorKind::empty_data: return "empty_data";
    case ErrorKind::parameter: return "parameter";
    case ErrorKind::input: return "input";
    case ErrorKind::attack_setup: return "attack_setup";
    case ErrorKind::file_not_found: return "file_not_found";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
    }
    return "unknown";
}

double Degrees::radians() const noexcept
{
    return value * std::numbers::pi / 180.0;
}

Rng derive_stream(std::uint64_t root_seed, Stream stream)
{
    std::seed_seq seq{
        static_cast<std::uint32_t>(root_seed & 0xffffffffu),
        static_cast<std::uint32_t>(root_seed >> 32),
        static_cast<std::uint32_t>(stream),
    };
    return Rng(seq);
}

} // namespace pabidot
