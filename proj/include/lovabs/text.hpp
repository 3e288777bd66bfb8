#pragma once

// Compact text forms: labels over {+,-}, reports over {+,0,-}, and
// comma-separated real vectors. Character i describes coordinate i+1.

#include <string>
#include <string_view>
#include <vector>

#include "lovabs/common.hpp"

namespace lovabs {

std::string format_label(const Label& y);
std::string format_report(const AbstainReport& v);
std::string format_vector(const std::vector<double>& x);

/// Throws DomainError on characters outside the alphabet.
Label parse_label(std::string_view s);
AbstainReport parse_report(std::string_view s);
/// "0.5,-0.3"; whitespace around entries is ignored.
std::vector<double> parse_vector(std::string_view s);

}  // namespace lovabs
