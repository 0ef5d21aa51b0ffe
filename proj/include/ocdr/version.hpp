#pragma once

namespace ocdr {

inline constexpr const char* toolkit_version = "0.1.0";

} // namespace ocdr
