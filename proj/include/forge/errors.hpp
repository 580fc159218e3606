#pragma once
#include <stdexcept>
#include <string>

namespace forge {

// kind is the stable machine-readable tag (BallEscapesWindow, Infeasible, ...)
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg)
        : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
    const std::string& kind() const { return kind_; }

private:
    std::string kind_;
};

}  // namespace forge
