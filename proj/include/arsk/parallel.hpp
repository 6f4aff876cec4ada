#ifndef ARSK_PARALLEL_HPP
#define ARSK_PARALLEL_HPP

#include <cstddef>
#include <functional>

namespace arsk {

// Worker count: `requested` if positive, else $ARSK_THREADS, else 1.
unsigned resolve_threads(int requested = 0);

// Runs body(i) for i in [0, count) on up to `threads` workers. Every index runs
// even if one throws; the exception of the lowest failing index is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace arsk

#endif  // ARSK_PARALLEL_HPP
