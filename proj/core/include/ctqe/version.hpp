#pragma once

namespace ctqe {

inline constexpr const char* kToolName = "ctqe";
inline constexpr const char* kVersion = "0.1.0";

}  // namespace ctqe
