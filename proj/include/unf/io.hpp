#pragma once

#include <string>

namespace unf {

/// 17 significant digits, '.' separator,
/// independent of the global locale. Non-finite values print as nan/inf/-inf.
std::string format_double(double v);

}  // namespace unf
