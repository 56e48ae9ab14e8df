#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace patlab {

// Domain or validation failure.  `code` is the stable machine-readable tag
// surfaced through the CLI ("LevelOutOfRange", "SharedPartMismatch", ...).
class error : public std::runtime_error {
public:
    error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

// Refusal to attempt an enumeration or search beyond the guarded size.
// Mapped to its own exit code so callers can tell "bad input" from
// "input too big to enumerate".
class size_guard_error : public error {
public:
    using error::error;
};

[[noreturn]] inline void fail(std::string code, const std::string& what) {
    throw error(std::move(code), what);
}

[[noreturn]] inline void refuse(std::string code, const std::string& what) {
    throw size_guard_error(std::move(code), what);
}

} // namespace patlab
