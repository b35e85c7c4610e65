#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pabidot {

enum class ErrorKind {
    dimension,
    axis,
    shape,
    constant_column,
    empty_data,
    parameter,
    input,
    attack_setup,
    file_not_found,
    parse,
    io,
};

std::string_view to_string(ErrorKind kind) noexcept;

// All library failures surface as this exception; the kind drives CLI exit codes.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace pabidot
