#pragma once

namespace tcir {

inline constexpr const char* kVersion = "tcir 0.1.0";

}  // namespace tcir
