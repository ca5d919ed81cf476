#pragma once

namespace thresholdci {

/// Grid evaluations and simulations run either on the calling thread or
/// across the OpenMP team. Both give identical results.
enum class Execution { serial, parallel };

}  // namespace thresholdci
