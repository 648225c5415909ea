#pragma once

#if defined(__SSE2__)
#include <pmmintrin.h>
#include <xmmintrin.h>
#endif

namespace lagmhd {

/// Flush subnormals to zero. The smooth compactly supported data decays
/// through the subnormal range as it diffuses into the vacuum region, and
/// microcoded subnormal arithmetic would dominate the long explicit runs.
/// The mode is set identically on every execution, so reproducibility is
/// unaffected.
inline void enable_flush_to_zero() {
#if defined(__SSE2__)
    _MM_SET_FLUSH_ZERO_MODE(_MM_FLUSH_ZERO_ON);
    _MM_SET_DENORMALS_ZERO_MODE(_MM_DENORMALS_ZERO_ON);
#endif
}

} // namespace lagmhd
