#pragma once

#include <string>

namespace intdiff {

/// Shortest decimal string that parses back to the same double.
std::string to_chars(double value);

}  // namespace intdiff
