#pragma once

#include <stdexcept>
#include <string>

namespace suprad {

/// Failure category; the CLI maps these onto process exit codes.
enum class errc {
    usage,          ///< bad flag, malformed spec string, missing input file
    domain,         ///< argument outside an operation's contract
    precision,      ///< exponent budget exceeded or tolerance unreachable
    bracketing,     ///< root bracket does not contain a sign change
    nontermination, ///< integration ran out of range without its event
    internal,       ///< invariant broken inside the library
    io,             ///< file could not be read or written
};

[[nodiscard]] constexpr const char* errc_name(errc k) noexcept {
    switch (k) {
        case errc::usage: return "usage";
        case errc::domain: return "domain";
        case errc::precision: return "precision";
        case errc::bracketing: return "bracketing";
        case errc::nontermination: return "nontermination";
        case errc::internal: return "internal";
        case errc::io: return "io";
    }
    return "internal";
}

/// Library-wide exception carrying a failure category.
class error : public std::runtime_error {
  public:
    error(errc kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}

    [[nodiscard]] errc kind() const noexcept { return kind_; }

  private:
    errc kind_;
};

[[noreturn]] inline void fail(errc kind, const std::string& message) {
    throw error(kind, message);
}

} // namespace suprad
