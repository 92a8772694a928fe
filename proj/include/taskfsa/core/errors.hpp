#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace taskfsa {

// Root of every error the library throws on purpose.
class error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class precondition_error : public error {
public:
    using error::error;
};

class syntax_error : public error {
public:
    syntax_error(const std::string& what, std::size_t position)
        : error(what + " at position " + std::to_string(position)), _position(position) {}

    [[nodiscard]] std::size_t position() const noexcept { return _position; }

private:
    std::size_t _position;
};

} // namespace taskfsa
