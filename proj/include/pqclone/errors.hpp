#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace pqclone {

/// Library error carrying a stable machine-readable name alongside the
/// human-readable detail. The CLI maps the name into its JSON error object.
class Error : public std::runtime_error {
public:
    Error(std::string name, const std::string& detail)
        : std::runtime_error(name + ": " + detail), name_(std::move(name)) {}

    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
};

[[noreturn]] inline void fail(std::string name, const std::string& detail) {
    throw Error(std::move(name), detail);
}

} // namespace pqclone
