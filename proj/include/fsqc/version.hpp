#pragma once

namespace fsqc {

inline constexpr const char* kVersion = "fsqc 0.1.0";

}  // namespace fsqc
