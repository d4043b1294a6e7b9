#pragma once

#include <cstdint>

namespace cherenkov {

// Counter-based generator: output i of stream s under seed is a pure function of (seed, s, i),
// so any partition of the work over threads draws the same numbers.
class CounterRng {
public:
    CounterRng(std::uint64_t seed, std::uint64_t stream = 0);

    CounterRng split(std::uint64_t substream) const;

    std::uint64_t next_u64();
    double uniform();                       // [0, 1)
    double uniform(double lo, double hi);
    double normal();                        // standard normal, Box-Muller
    double cauchy();
    std::uint64_t below(std::uint64_t n);   // uniform integer in [0, n)

    std::uint64_t seed() const { return m_seed; }
    std::uint64_t stream() const { return m_stream; }

private:
    std::uint64_t m_seed;
    std::uint64_t m_stream;
    std::uint64_t m_key;
    std::uint64_t m_counter = 0;
};

std::uint64_t mix64(std::uint64_t x);

}  // namespace cherenkov
