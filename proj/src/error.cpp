#include "thermosdp/error.hpp"

#include <iostream>

namespace thermosdp {

NumericError::NumericError(const std::string& what, long iteration)
    : Error(iteration >= 0 ? what + " (iteration " + std::to_string(iteration) + ")" : what),
      iteration_(iteration) {}

ParseError::ParseError(std::string field, const std::string& what)
    : Error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

void log_warning(const std::string& message) { std::clog << "warning: " << message << '\n'; }

}  // namespace thermosdp
