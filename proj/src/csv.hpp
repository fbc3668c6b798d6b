#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace dvlae::csv {

// RFC 4180 style: fields containing a comma, quote or line break are quoted,
// embedded quotes doubled.
std::string quote(std::string_view field);

// Splits text into records of fields. Handles quoted fields spanning lines.
std::vector<std::vector<std::string>> parse(std::string_view text);

std::string format_double(double v);

}  // namespace dvlae::csv
