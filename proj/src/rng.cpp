#include "cherenkov/rng.hpp"

#include <cmath>
#include <numbers>

namespace cherenkov {

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : m_seed(seed), m_stream(stream), m_key(mix64(mix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL)))
{
}

CounterRng CounterRng::split(std::uint64_t substream) const
{
    return CounterRng(mix64(m_key ^ 0x2545f4914f6cdd1dULL), substream);
}

std::uint64_t CounterRng::next_u64()
{
    std::uint64_t c = m_counter++;
    return mix64(m_key ^ mix64(c * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL));
}

double CounterRng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double CounterRng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform();
}

double CounterRng::normal()
{
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double CounterRng::cauchy()
{
    double u = uniform();
    while (u == 0.0 || u == 0.5) u = uniform();
    return std::tan(std::numbers::pi * (u - 0.5));
}

std::uint64_t CounterRng::below(std::uint64_t n)
{
    if (n <= 1) return 0;
    return static_cast<std::uint64_t>(uniform() * static_cast<double>(n)) % n;
}

}  // namespace cherenkov
