#pragma once

#include <stdexcept>
#include <string>

namespace nlsym {

struct BoundExceeded : std::runtime_error {
    explicit BoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct IndexMismatch : std::runtime_error {
    explicit IndexMismatch(const std::string& what) : std::runtime_error(what) {}
};

struct NotInvariant : std::runtime_error {
    explicit NotInvariant(const std::string& what) : std::runtime_error(what) {}
};

struct NotDoublyStochastic : std::runtime_error {
    explicit NotDoublyStochastic(const std::string& what) : std::runtime_error(what) {}
};

struct NotB4 : std::runtime_error {
    explicit NotB4(const std::string& what) : std::runtime_error(what) {}
};

struct NotMagicUnitary : std::runtime_error {
    explicit NotMagicUnitary(const std::string& what) : std::runtime_error(what) {}
};

struct NotDisjoint : std::runtime_error {
    explicit NotDisjoint(const std::string& what) : std::runtime_error(what) {}
};

struct NotAutomorphism : std::runtime_error {
    explicit NotAutomorphism(const std::string& what) : std::runtime_error(what) {}
};

struct NotConnectedRegular : std::runtime_error {
    explicit NotConnectedRegular(const std::string& what) : std::runtime_error(what) {}
};

// A sound verdict failed its own re-verification. Must never happen; mapped
// to exit code 70 by the CLI.
struct InternalInconsistency : std::runtime_error {
    explicit InternalInconsistency(const std::string& what) : std::runtime_error(what) {}
};

struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace nlsym
