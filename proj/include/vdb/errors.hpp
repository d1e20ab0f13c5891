#pragma once

#include <stdexcept>
#include <string>

namespace vdb {

enum class errc {
    index_out_of_range,
    self_loop,
    duplicate_edge,
    not_connected,
    malformed_header,
    trailing_garbage,
    non_canonical_padding,
    parse_error,
    domain_error,
    parameter_error,
    overflow,
    hypothesis_violated,
    invalid_move,
    infeasible,
    retries_exhausted,
    cap_exceeded,
};

inline const char* errc_name(errc c) {
    switch (c) {
        case errc::index_out_of_range:    return "index_out_of_range";
        case errc::self_loop:             return "self_loop";
        case errc::duplicate_edge:        return "duplicate_edge";
        case errc::not_connected:         return "not_connected";
        case errc::malformed_header:      return "malformed_header";
        case errc::trailing_garbage:      return "trailing_garbage";
        case errc::non_canonical_padding: return "non_canonical_padding";
        case errc::parse_error:           return "parse_error";
        case errc::domain_error:          return "domain_error";
        case errc::parameter_error:       return "parameter_error";
        case errc::overflow:              return "overflow";
        case errc::hypothesis_violated:   return "hypothesis_violated";
        case errc::invalid_move:          return "invalid_move";
        case errc::infeasible:            return "infeasible";
        case errc::retries_exhausted:     return "retries_exhausted";
        case errc::cap_exceeded:          return "cap_exceeded";
    }
    return "unknown";
}

class error : public std::runtime_error {
public:
    error(errc code, const std::string& msg)
        : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

    errc code() const noexcept { return code_; }

private:
    errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& msg) {
    throw error(code, msg);
}

}  // namespace vdb
