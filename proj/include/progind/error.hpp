#ifndef PROGIND_ERROR_HPP
#define PROGIND_ERROR_HPP

#include <stdexcept>
#include <string>

namespace progind {

enum class Errc {
    parse_error,
    unknown_symbol,
    arity_mismatch,
    dimension_mismatch,
    missing_parameter,
    duplicate_parameter,
    format_error,
    missing_variable,
    non_contiguous_timesteps,
    out_of_range,
    no_variable_of_dimension,
    empty_program,
    unknown_function,
    mismatched_trace,
    invalid_config,
};

const char* to_string(Errc code);

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace progind

#endif
