#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "affine_map.hpp"
#include "errors.hpp"
#include "filter_bank.hpp"
#include "laurent.hpp"

namespace cuntz {

/// Atoms whose points differ by at most this are identified.
inline constexpr double kMergeTolerance = 1e-13;

template <typename Scalar = double>
struct Atom {
    Scalar x;
    Scalar w;
};

/// Finite nonnegative combination of Dirac masses, sorted by point with
/// distinct points and no zero weights.
template <typename Scalar = double>
class AtomicMeasure {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    AtomicMeasure() = default;

    explicit AtomicMeasure(std::vector<Atom<Scalar>> atoms, Scalar merge_tol = static_cast<Scalar>(kMergeTolerance))
    {
        for (const auto& a : atoms) {
            if (!std::isfinite(a.x) || !std::isfinite(a.w))
                throw std::invalid_argument("AtomicMeasure: non-finite atom");
            if (a.w < 0)
                throw std::invalid_argument("AtomicMeasure: negative weight");
        }
        std::stable_sort(atoms.begin(), atoms.end(), [](const auto& l, const auto& r) { return l.x < r.x; });
        std::vector<Atom<Scalar>> merged;
        merged.reserve(atoms.size());
        for (const auto& a : atoms) {
            if (!merged.empty() && a.x - merged.back().x <= merge_tol)
                merged.back().w += a.w;
            else
                merged.push_back(a);
        }
        std::erase_if(merged, [](const auto& a) { return a.w == Scalar(0); });
        points_.resize(static_cast<Eigen::Index>(merged.size()));
        weights_.resize(static_cast<Eigen::Index>(merged.size()));
        for (std::size_t i = 0; i < merged.size(); ++i) {
            points_(static_cast<Eigen::Index>(i)) = merged[i].x;
            weights_(static_cast<Eigen::Index>(i)) = merged[i].w;
        }
    }

    static AtomicMeasure dirac(Scalar x, Scalar w = 1) { return AtomicMeasure({{x, w}}); }

    Eigen::Index size() const { return points_.size(); }
    bool empty() const { return points_.size() == 0; }
    Scalar point(Eigen::Index i) const { return points_(i); }
    Scalar weight(Eigen::Index i) const { return weights_(i); }
    const Vector& points() const { return points_; }
    const Vector& weights() const { return weights_; }

    Scalar total_mass() const { return weights_.sum(); }

    std::vector<Atom<Scalar>> atoms() const
    {
        std::vector<Atom<Scalar>> out(static_cast<std::size_t>(size()));
        for (Eigen::Index i = 0; i < size(); ++i)
            out[static_cast<std::size_t>(i)] = {points_(i), weights_(i)};
        return out;
    }

    bool on_unit_interval() const
    {
        return empty() || (points_.minCoeff() >= Scalar(0) && points_.maxCoeff() < Scalar(1));
    }

private:
    Vector points_;
    Vector weights_;
};

using AtomicMeasured = AtomicMeasure<double>;

/// Digits a_1..a_k together with x_k(a) = a_1/N + ... + a_k/N^k.
template <typename Scalar = double>
struct NadicPoint {
    Word digits;
    Scalar value;
};

template <typename Scalar = double>
NadicPoint<Scalar> nadic_point(const Word& digits, int N)
{
    // Exact integer numerator while N^k fits in 53 bits; a single rounding at the end.
    std::uint64_t num = 0;
    std::uint64_t den = 1;
    bool exact = true;
    for (int d : digits) {
        if (d < 0 || d >= N)
            throw std::out_of_range("nadic_point: digit out of range");
        if (den > (std::uint64_t{1} << 53) / static_cast<std::uint64_t>(N)) {
            exact = false;
            break;
        }
        num = num * static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(d);
        den *= static_cast<std::uint64_t>(N);
    }
    if (exact)
        return {digits, static_cast<Scalar>(num) / static_cast<Scalar>(den)};
    Scalar x = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it)
        x = (x + static_cast<Scalar>(*it)) / static_cast<Scalar>(N);
    return {digits, x};
}

/// mu_f^(k) = sum over words a of length k of ||S_a^* f||^2 delta_{x_k(a)}.
///
/// Walks the N-ary word tree depth first, so each prefix adjoint is computed
/// once and subtrees below a vanishing prefix are skipped.
template <typename Scalar>
AtomicMeasure<Scalar> approx_measure(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f, int k,
                                     std::uint64_t cap = kDefaultWordCap)
{
    if (k < 0)
        throw std::invalid_argument("approx_measure: depth must be >= 0");
    const int N = bank.N();
    require_word_budget(N, k, cap);
    const std::uint64_t cells = checked_power(N, k, cap);
    const Scalar inv_cells = Scalar(1) / static_cast<Scalar>(cells);

    std::vector<Atom<Scalar>> atoms;
    std::function<void(const LaurentPoly<Scalar>&, int, std::uint64_t)> walk =
        [&](const LaurentPoly<Scalar>& g, int depth, std::uint64_t index) {
            if (g.is_zero())
                return;
            if (depth == k) {
                atoms.push_back({static_cast<Scalar>(index) * inv_cells, norm_sq(g)});
                return;
            }
            for (int j = 0; j < N; ++j)
                walk(apply_S_adj(bank, j, g), depth + 1, index * static_cast<std::uint64_t>(N) + static_cast<std::uint64_t>(j));
        };
    walk(f, 0, 0);
    return AtomicMeasure<Scalar>(std::move(atoms));
}

/// sum_atoms w e^{itx}
template <typename Scalar>
Complex<Scalar> fourier(const AtomicMeasure<Scalar>& m, Scalar t)
{
    if (m.empty())
        return Complex<Scalar>(0);
    const auto phase = (Complex<Scalar>(0, t) * m.points().template cast<Complex<Scalar>>()).array().exp();
    return (phase * m.weights().template cast<Complex<Scalar>>().array()).sum();
}

/// mu([0, x]) as a closed interval; counts every atom with point <= x.
template <typename Scalar>
Scalar cdf(const AtomicMeasure<Scalar>& m, Scalar x)
{
    return (m.points().array() <= x).select(m.weights().array(), Scalar(0)).sum();
}

/// Max over atom points of |w1(p) - w2(p)|, with points identified within tol.
template <typename Scalar>
Scalar atomwise_distance(const AtomicMeasure<Scalar>& m1, const AtomicMeasure<Scalar>& m2,
                         Scalar tol = static_cast<Scalar>(kMergeTolerance))
{
    Eigen::Index i = 0, j = 0;
    Scalar worst = 0;
    while (i < m1.size() || j < m2.size()) {
        if (j >= m2.size() || (i < m1.size() && m1.point(i) < m2.point(j) - tol)) {
            worst = std::max(worst, m1.weight(i++));
        } else if (i >= m1.size() || m2.point(j) < m1.point(i) - tol) {
            worst = std::max(worst, m2.weight(j++));
        } else {
            worst = std::max(worst, std::abs(m1.weight(i++) - m2.weight(j++)));
        }
    }
    return worst;
}

/// sup_x |F_1(x) - F_2(x)| for two atomic measures. Both distribution functions
/// are right-continuous steps that change only at atom points, so the supremum
/// is attained at a merged atom point (left of the first atom both vanish).
template <typename Scalar>
Scalar cdf_sup_distance(const AtomicMeasure<Scalar>& m1, const AtomicMeasure<Scalar>& m2)
{
    Eigen::Index i = 0, j = 0;
    Scalar F1 = 0, F2 = 0, worst = 0;
    const Scalar tol = static_cast<Scalar>(kMergeTolerance);
    while (i < m1.size() || j < m2.size()) {
        Scalar p;
        if (j >= m2.size())
            p = m1.point(i);
        else if (i >= m1.size())
            p = m2.point(j);
        else
            p = std::min(m1.point(i), m2.point(j));
        while (i < m1.size() && m1.point(i) <= p + tol)
            F1 += m1.weight(i++);
        while (j < m2.size() && m2.point(j) <= p + tol)
            F2 += m2.weight(j++);
        worst = std::max(worst, std::abs(F1 - F2));
    }
    return worst;
}

/// sup over [0,1) of |F_m(x) - F(x)| for a continuous nondecreasing reference
/// distribution F. On each gap between consecutive atoms F_m is constant and F
/// is monotone, so only the gap endpoints (as limits) need checking.
template <typename Scalar, typename Cdf>
    requires std::invocable<Cdf, Scalar>
Scalar cdf_sup_distance(const AtomicMeasure<Scalar>& m, Cdf&& F)
{
    Scalar worst = 0;
    Scalar left = 0;
    Scalar Fm = 0;
    for (Eigen::Index i = 0; i <= m.size(); ++i) {
        const Scalar right = i < m.size() ? m.point(i) : Scalar(1);
        worst = std::max({worst, std::abs(Fm - F(left)), std::abs(Fm - F(right))});
        if (i < m.size()) {
            Fm += m.weight(i);
            left = right;
        }
    }
    return worst;
}

/// Max over t of |mu_f^(k)^(t) - sum_j e^{ijt/N} mu_{S_j^* f}^(k-1)^(t/N)|.
template <typename Scalar>
Scalar refinement_check(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f, int k,
                        std::span<const Scalar> t_grid, std::uint64_t cap = kDefaultWordCap)
{
    if (k < 1)
        throw std::invalid_argument("refinement_check: depth must be >= 1");
    const int N = bank.N();
    const auto whole = approx_measure(bank, f, k, cap);
    std::vector<AtomicMeasure<Scalar>> branches;
    for (int j = 0; j < N; ++j)
        branches.push_back(approx_measure(bank, apply_S_adj(bank, j, f), k - 1, cap));
    Scalar worst = 0;
    for (Scalar t : t_grid) {
        Complex<Scalar> rhs(0);
        for (int j = 0; j < N; ++j)
            rhs += std::polar(Scalar(1), static_cast<Scalar>(j) * t / static_cast<Scalar>(N)) *
                   fourier(branches[static_cast<std::size_t>(j)], t / static_cast<Scalar>(N));
        worst = std::max(worst, std::abs(fourier(whole, t) - rhs));
    }
    return worst;
}

template <typename Scalar>
struct FourierErrorReport {
    Scalar error;
    Scalar bound;
    bool pass;
};

/// Compares mu_f^(k)^(t) with an exact value; the certified bound is |t| N^{-k}
/// for unit f.
template <typename Scalar>
FourierErrorReport<Scalar> fourier_error_vs_reference(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f,
                                                      int k, Scalar t, Complex<Scalar> reference,
                                                      std::uint64_t cap = kDefaultWordCap)
{
    const Scalar err = std::abs(fourier(approx_measure(bank, f, k, cap), t) - reference);
    const Scalar bound = std::abs(t) * std::pow(static_cast<Scalar>(bank.N()), -static_cast<Scalar>(k));
    return {err, bound, err <= bound + Scalar(1e-12)};
}

/// sum_atoms w psi(x). Returns whatever psi returns (real or complex).
template <typename Scalar, typename Fn>
    requires std::invocable<Fn, Scalar>
auto integrate(const AtomicMeasure<Scalar>& m, Fn&& psi)
{
    using R = std::decay_t<std::invoke_result_t<Fn, Scalar>>;
    R acc{0};
    for (Eigen::Index i = 0; i < m.size(); ++i)
        acc += m.weight(i) * psi(m.point(i));
    return acc;
}

/// N^{-k} times the caller-supplied integral of |t psi^(t)| dt.
template <typename Scalar>
Scalar bound_report(Scalar t_psi_hat_integral, int k, int N)
{
    return t_psi_hat_integral * std::pow(static_cast<Scalar>(N), -static_cast<Scalar>(k));
}

enum class Support { UnitInterval, RealLine };

/// Image measure under x -> a x + b; coincident images are merged. With
/// Support::UnitInterval every image point must lie in [0, 1).
template <typename Scalar>
AtomicMeasure<Scalar> pushforward(const AtomicMeasure<Scalar>& m, const AffineMap<Scalar>& map,
                                  Support support = Support::UnitInterval)
{
    std::vector<Atom<Scalar>> out;
    out.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        const Scalar y = map(m.point(i));
        if (support == Support::UnitInterval && (y < Scalar(0) || y >= Scalar(1)))
            throw std::domain_error("pushforward: image atom outside [0, 1)");
        out.push_back({y, m.weight(i)});
    }
    return AtomicMeasure<Scalar>(std::move(out));
}

template <typename Scalar>
AtomicMeasure<Scalar> scaled(const AtomicMeasure<Scalar>& m, Scalar s)
{
    auto atoms = m.atoms();
    for (auto& a : atoms)
        a.w *= s;
    return AtomicMeasure<Scalar>(std::move(atoms));
}

template <typename Scalar>
AtomicMeasure<Scalar> sum(std::span<const AtomicMeasure<Scalar>> parts)
{
    std::vector<Atom<Scalar>> atoms;
    for (const auto& p : parts) {
        auto a = p.atoms();
        atoms.insert(atoms.end(), a.begin(), a.end());
    }
    return AtomicMeasure<Scalar>(std::move(atoms));
}

} // namespace cuntz
