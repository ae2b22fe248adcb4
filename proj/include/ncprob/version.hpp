#pragma once

#ifndef NCPROB_VERSION
#define NCPROB_VERSION "0.1.0"
#endif

namespace ncprob {

inline constexpr const char* kVersion = NCPROB_VERSION;

}  // namespace ncprob
