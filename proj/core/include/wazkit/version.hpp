#pragma once

namespace wazkit {

inline constexpr const char* kVersion = "0.1.0";

}  // namespace wazkit
