#ifndef PREYPRED_VERSION_HPP
#define PREYPRED_VERSION_HPP

namespace preypred {

inline constexpr const char* version = "0.1.0";

}  // namespace preypred

#endif
