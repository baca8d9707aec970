#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace cuntz {

template <typename Scalar>
using Complex = std::complex<Scalar>;

template <typename Scalar>
using CoeffVector = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, 1>;

/// Coefficients with magnitude at or below this are treated as exact zeros.
inline constexpr double kPruneThreshold = 1e-14;

/// Tolerance on |z| - 1 accepted by evaluate().
inline constexpr double kUnitCircleTolerance = 1e-12;

/// Finitely supported Laurent polynomial  sum_n c_n z^n  with complex
/// coefficients. Also serves as a vector of L^2(T) in the basis e_n(z) = z^n.
///
/// Storage is a dense window [lowest(), highest()] of coefficients. The window
/// is trimmed so both end coefficients are nonzero; interior coefficients whose
/// magnitude falls below kPruneThreshold are stored as exact zeros and are not
/// part of support(). The empty window is the zero polynomial.
template <typename Scalar = double>
class LaurentPoly {
public:
    using scalar_type = Scalar;
    using complex_type = Complex<Scalar>;

    LaurentPoly() = default;

    LaurentPoly(int lowest, CoeffVector<Scalar> coeffs)
        : lowest_(lowest), coeffs_(std::move(coeffs))
    {
        normalize();
    }

    LaurentPoly(int lowest, const std::vector<complex_type>& coeffs)
        : lowest_(lowest), coeffs_(Eigen::Map<const CoeffVector<Scalar>>(coeffs.data(),
                                                                        static_cast<Eigen::Index>(coeffs.size())))
    {
        normalize();
    }

    /// c * z^n
    static LaurentPoly monomial(int n, complex_type c = complex_type(1))
    {
        CoeffVector<Scalar> v(1);
        v(0) = c;
        return LaurentPoly(n, std::move(v));
    }

    bool is_zero() const { return coeffs_.size() == 0; }

    /// Lowest stored exponent. Meaningless for the zero polynomial.
    int lowest() const { return lowest_; }
    int highest() const { return lowest_ + static_cast<int>(coeffs_.size()) - 1; }
    Eigen::Index window() const { return coeffs_.size(); }

    const CoeffVector<Scalar>& coefficients() const { return coeffs_; }

    complex_type coeff(int n) const
    {
        if (is_zero() || n < lowest_ || n > highest())
            return complex_type(0);
        return coeffs_(n - lowest_);
    }

    std::vector<int> support() const
    {
        std::vector<int> out;
        for (Eigen::Index i = 0; i < coeffs_.size(); ++i)
            if (coeffs_(i) != complex_type(0))
                out.push_back(lowest_ + static_cast<int>(i));
        return out;
    }

private:
    void normalize()
    {
        const Scalar thr = static_cast<Scalar>(kPruneThreshold);
        for (Eigen::Index i = 0; i < coeffs_.size(); ++i) {
            const complex_type c = coeffs_(i);
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::invalid_argument("LaurentPoly: non-finite coefficient");
            if (std::abs(c) <= thr)
                coeffs_(i) = complex_type(0);
        }
        Eigen::Index first = 0;
        Eigen::Index last = coeffs_.size();
        while (first < last && coeffs_(first) == complex_type(0))
            ++first;
        while (last > first && coeffs_(last - 1) == complex_type(0))
            --last;
        if (first == last) {
            coeffs_.resize(0);
            lowest_ = 0;
            return;
        }
        if (first != 0 || last != coeffs_.size()) {
            CoeffVector<Scalar> trimmed = coeffs_.segment(first, last - first);
            coeffs_.swap(trimmed);
        }
        lowest_ += static_cast<int>(first);
    }

    int lowest_ = 0;
    CoeffVector<Scalar> coeffs_;
};

using LaurentPolyd = LaurentPoly<double>;

template <typename Scalar>
LaurentPoly<Scalar> add(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    if (f.is_zero())
        return g;
    if (g.is_zero())
        return f;
    const int lo = std::min(f.lowest(), g.lowest());
    const int hi = std::max(f.highest(), g.highest());
    CoeffVector<Scalar> out = CoeffVector<Scalar>::Zero(hi - lo + 1);
    out.segment(f.lowest() - lo, f.window()) += f.coefficients();
    out.segment(g.lowest() - lo, g.window()) += g.coefficients();
    return LaurentPoly<Scalar>(lo, std::move(out));
}

template <typename Scalar>
LaurentPoly<Scalar> scale(const LaurentPoly<Scalar>& f, Complex<Scalar> s)
{
    if (f.is_zero())
        return f;
    return LaurentPoly<Scalar>(f.lowest(), CoeffVector<Scalar>(f.coefficients() * s));
}

template <typename Scalar>
LaurentPoly<Scalar> subtract(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    return add(f, scale(g, Complex<Scalar>(-1)));
}

/// Coefficient convolution: (fg)_n = sum_k f_k g_{n-k}.
template <typename Scalar>
LaurentPoly<Scalar> multiply(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    if (f.is_zero() || g.is_zero())
        return {};
    // Iterate over the operand with fewer nonzeros; upsampled inputs are mostly zeros.
    const auto& a = f.window() <= g.window() ? f : g;
    const auto& b = f.window() <= g.window() ? g : f;
    CoeffVector<Scalar> out = CoeffVector<Scalar>::Zero(a.window() + b.window() - 1);
    for (Eigen::Index i = 0; i < a.window(); ++i) {
        const Complex<Scalar> c = a.coefficients()(i);
        if (c == Complex<Scalar>(0))
            continue;
        out.segment(i, b.window()) += c * b.coefficients();
    }
    return LaurentPoly<Scalar>(f.lowest() + g.lowest(), std::move(out));
}

/// f(z^N): coefficient at N*n is f_n.
template <typename Scalar>
LaurentPoly<Scalar> upsample(const LaurentPoly<Scalar>& f, int N)
{
    if (N < 1)
        throw std::invalid_argument("upsample: scale N must be >= 1");
    if (f.is_zero() || N == 1)
        return f;
    CoeffVector<Scalar> out = CoeffVector<Scalar>::Zero((f.window() - 1) * N + 1);
    for (Eigen::Index i = 0; i < f.window(); ++i)
        out(i * N) = f.coefficients()(i);
    return LaurentPoly<Scalar>(f.lowest() * N, std::move(out));
}

/// <f|g> = sum_n conj(f_n) g_n, conjugate-linear in the first slot.
template <typename Scalar>
Complex<Scalar> inner(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    if (f.is_zero() || g.is_zero())
        return Complex<Scalar>(0);
    const int lo = std::max(f.lowest(), g.lowest());
    const int hi = std::min(f.highest(), g.highest());
    if (lo > hi)
        return Complex<Scalar>(0);
    const Eigen::Index len = hi - lo + 1;
    return f.coefficients().segment(lo - f.lowest(), len).dot(g.coefficients().segment(lo - g.lowest(), len));
}

template <typename Scalar>
Scalar norm_sq(const LaurentPoly<Scalar>& f)
{
    return f.coefficients().squaredNorm();
}

template <typename Scalar>
Scalar norm(const LaurentPoly<Scalar>& f)
{
    return f.coefficients().norm();
}

/// ||f - g|| in L^2(T).
template <typename Scalar>
Scalar distance(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    if (f.is_zero())
        return norm(g);
    if (g.is_zero())
        return norm(f);
    const int lo = std::min(f.lowest(), g.lowest());
    const int hi = std::max(f.highest(), g.highest());
    CoeffVector<Scalar> diff = CoeffVector<Scalar>::Zero(hi - lo + 1);
    diff.segment(f.lowest() - lo, f.window()) += f.coefficients();
    diff.segment(g.lowest() - lo, g.window()) -= g.coefficients();
    return diff.norm();
}

template <typename Scalar>
Scalar max_coeff_difference(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    if (f.is_zero() && g.is_zero())
        return Scalar(0);
    const int lo = std::min(f.is_zero() ? g.lowest() : f.lowest(), g.is_zero() ? f.lowest() : g.lowest());
    const int hi = std::max(f.is_zero() ? g.highest() : f.highest(), g.is_zero() ? f.highest() : g.highest());
    Scalar m = 0;
    for (int n = lo; n <= hi; ++n)
        m = std::max(m, std::abs(f.coeff(n) - g.coeff(n)));
    return m;
}

/// Integer power of a point on the unit circle; negative powers use 1/z.
template <typename Scalar>
Complex<Scalar> unit_pow(Complex<Scalar> z, int n)
{
    Complex<Scalar> base = n < 0 ? Complex<Scalar>(1) / z : z;
    unsigned long e = n < 0 ? static_cast<unsigned long>(-static_cast<long>(n)) : static_cast<unsigned long>(n);
    Complex<Scalar> acc(1);
    while (e) {
        if (e & 1UL)
            acc *= base;
        base *= base;
        e >>= 1;
    }
    return acc;
}

template <typename Scalar>
Complex<Scalar> evaluate(const LaurentPoly<Scalar>& f, Complex<Scalar> z)
{
    if (std::abs(std::abs(z) - Scalar(1)) > static_cast<Scalar>(kUnitCircleTolerance))
        throw std::domain_error("evaluate: point is not on the unit circle");
    if (f.is_zero())
        return Complex<Scalar>(0);
    Complex<Scalar> acc(0);
    for (Eigen::Index i = f.window() - 1; i >= 0; --i)
        acc = acc * z + f.coefficients()(i);
    return acc * unit_pow(z, f.lowest());
}

template <typename Scalar>
LaurentPoly<Scalar> operator+(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    return add(f, g);
}

template <typename Scalar>
LaurentPoly<Scalar> operator-(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    return subtract(f, g);
}

template <typename Scalar>
LaurentPoly<Scalar> operator*(const LaurentPoly<Scalar>& f, const LaurentPoly<Scalar>& g)
{
    return multiply(f, g);
}

template <typename Scalar>
LaurentPoly<Scalar> operator*(Complex<Scalar> s, const LaurentPoly<Scalar>& f)
{
    return scale(f, s);
}

} // namespace cuntz
