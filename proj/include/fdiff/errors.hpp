#pragma once

#include <stdexcept>
#include <string>

namespace fdiff {

enum class errc {
    non_convergent,
    invalid_interval,
    join_mismatch,
    constant_path,
    division_by_zero,
    not_holomorphic,
    length_mismatch,
    order_too_low,
    pole_on_set,
    parse_error,
    invalid_argument,
};

class error : public std::runtime_error {
public:
    error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

inline const char* errc_name(errc c) {
    switch (c) {
    case errc::non_convergent: return "NonConvergent";
    case errc::invalid_interval: return "InvalidInterval";
    case errc::join_mismatch: return "JoinMismatch";
    case errc::constant_path: return "ConstantPath";
    case errc::division_by_zero: return "DivisionByZero";
    case errc::not_holomorphic: return "NotHolomorphic";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::order_too_low: return "OrderTooLow";
    case errc::pole_on_set: return "PoleOnSet";
    case errc::parse_error: return "ParseError";
    case errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

[[noreturn]] inline void raise(errc code, const std::string& detail) {
    throw error(code, std::string(errc_name(code)) + ": " + detail);
}

} // namespace fdiff
