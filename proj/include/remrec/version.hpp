#pragma once

namespace remrec {

inline constexpr const char* kToolVersion = "0.1.0";

}  // namespace remrec
