#pragma once

namespace epc {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace epc
