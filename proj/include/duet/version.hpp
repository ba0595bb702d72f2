#pragma once

namespace duet {

#ifdef DUET_VERSION
inline constexpr const char* kVersion = DUET_VERSION;
#else
inline constexpr const char* kVersion = "0.0.0";
#endif

}  // namespace duet
