#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace cuntz {

/// Raised when a computation would enumerate more words or atoms than the
/// configured cap. Carries the requested count so callers can report it.
class ResourceLimit : public std::runtime_error {
public:
    ResourceLimit(const std::string& what, std::uint64_t requested, std::uint64_t cap)
        : std::runtime_error(what), requested_(requested), cap_(cap)
    {
    }

    std::uint64_t requested() const { return requested_; }
    std::uint64_t cap() const { return cap_; }

private:
    std::uint64_t requested_;
    std::uint64_t cap_;
};

inline constexpr std::uint64_t kDefaultWordCap = std::uint64_t{1} << 20;

/// N^k, saturating at cap + 1 so the caller can detect overflow of the cap.
inline std::uint64_t checked_power(int N, int k, std::uint64_t cap)
{
    std::uint64_t p = 1;
    for (int i = 0; i < k; ++i) {
        if (p > cap / static_cast<std::uint64_t>(N))
            return cap + 1;
        p *= static_cast<std::uint64_t>(N);
    }
    return p;
}

inline void require_word_budget(int N, int k, std::uint64_t cap)
{
    const std::uint64_t p = checked_power(N, k, cap);
    if (p > cap) {
        std::string count = std::to_string(N) + "^" + std::to_string(k);
        throw ResourceLimit("word enumeration " + count + " exceeds cap " + std::to_string(cap), p, cap);
    }
}

} // namespace cuntz
