#pragma once

#include <cmath>
#include <stdexcept>

namespace cuntz {

/// x -> a x + b on the real line.
template <typename Scalar = double>
struct AffineMap {
    Scalar a = 1;
    Scalar b = 0;

    AffineMap() = default;
    AffineMap(Scalar slope, Scalar offset) : a(slope), b(offset)
    {
        if (!std::isfinite(a) || !std::isfinite(b))
            throw std::invalid_argument("AffineMap: non-finite parameter");
    }

    Scalar operator()(Scalar x) const { return a * x + b; }

    /// Lipschitz constant |a|.
    Scalar contraction() const { return std::abs(a); }

    /// Branch x -> (x + j)/N of the N-adic subdivision.
    static AffineMap nadic_branch(int j, int N)
    {
        return AffineMap(Scalar(1) / static_cast<Scalar>(N), static_cast<Scalar>(j) / static_cast<Scalar>(N));
    }
};

} // namespace cuntz
