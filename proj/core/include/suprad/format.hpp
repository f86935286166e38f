#pragma once

#include <string>

namespace suprad {

/// Shortest decimal string that parses back to exactly v (JSON payloads).
[[nodiscard]] std::string format_shortest(double v);

/// Fixed %.17g rendering (CSV cells, always exact round-trip).
[[nodiscard]] std::string format_g17(double v);

} // namespace suprad
