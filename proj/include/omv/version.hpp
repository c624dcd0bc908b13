#ifndef OMV_VERSION_HPP
#define OMV_VERSION_HPP

namespace omv {
inline constexpr const char* kEngineVersion = "0.1.0";
}

#endif
