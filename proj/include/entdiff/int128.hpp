#pragma once

#include <cstdint>
#include <string>

namespace entdiff {

using Int128 = __int128;
using UInt128 = unsigned __int128;

inline constexpr Int128 kInt128Max = static_cast<Int128>(~UInt128{0} >> 1);

/// Decimal rendering; iostreams have no overload for 128-bit integers.
std::string to_string(Int128 value);

}  // namespace entdiff
