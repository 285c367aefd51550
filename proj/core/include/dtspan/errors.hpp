#pragma once

#include <stdexcept>
#include <string>

namespace dtspan {

// Structural or schema violation in an input document or constructed object.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// An enumeration-based routine was asked to run beyond its hard size cap.
class cap_exceeded_error : public std::runtime_error {
public:
    explicit cap_exceeded_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Exhaustive enumeration over {0,1}^n is refused above this many variables.
inline constexpr int kMaxEnumerationVars = 20;

void ensure_enumerable(int n, const char* what);

}  // namespace dtspan
