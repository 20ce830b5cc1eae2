#pragma once

#include <cstddef>
#include <functional>

namespace forge {

/// Runs body(i) for i in [0, count) on up to `workers` threads and rethrows
/// the first exception after all workers stop. Results must be written to
/// index-addressed slots by the caller so output order never depends on
/// scheduling.
void parallel_for(std::size_t count, std::size_t workers, const std::function<void(std::size_t)>& body);

}  // namespace forge
