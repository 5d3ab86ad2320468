#pragma once

#include <stdexcept>
#include <string>

namespace tilthall {

// All library failures carry a short machine-readable kind
// (e.g. "Singular", "CapExceeded") next to the human message.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(kind + ": " + what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

} // namespace tilthall
