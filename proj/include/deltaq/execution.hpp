#pragma once

namespace deltaq {

/// Serial kernels are the reference; parallel ones must give identical output.
enum class Execution { serial, parallel };

/// Sets the OpenMP thread count when positive; returns the count in effect.
int configure_threads(int requested);

}  // namespace deltaq
