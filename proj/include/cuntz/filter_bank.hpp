#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "laurent.hpp"

namespace cuntz {

/// Multi-index (a_1, ..., a_k) over {0, ..., N-1}. Addresses both the operator
/// S_{a_1} ... S_{a_k} and the N-adic interval starting at a_1/N + ... + a_k/N^k.
class Word {
public:
    Word() = default;
    Word(std::initializer_list<int> letters) : letters_(letters) {}
    explicit Word(std::vector<int> letters) : letters_(std::move(letters)) {}

    std::size_t size() const { return letters_.size(); }
    bool empty() const { return letters_.empty(); }
    int operator[](std::size_t i) const { return letters_[i]; }
    const std::vector<int>& letters() const { return letters_; }

    auto begin() const { return letters_.begin(); }
    auto end() const { return letters_.end(); }
    auto rbegin() const { return letters_.rbegin(); }
    auto rend() const { return letters_.rend(); }

    /// Drops the first letter.
    Word tail() const { return empty() ? Word{} : Word(std::vector<int>(letters_.begin() + 1, letters_.end())); }

    Word prepend(int letter) const
    {
        std::vector<int> v;
        v.reserve(letters_.size() + 1);
        v.push_back(letter);
        v.insert(v.end(), letters_.begin(), letters_.end());
        return Word(std::move(v));
    }

    friend bool operator==(const Word&, const Word&) = default;
    friend auto operator<=>(const Word&, const Word&) = default;

private:
    std::vector<int> letters_;
};

/// Decodes a cell index of a depth-k N-adic partition into its digits, most
/// significant first: index = a_1 N^{k-1} + ... + a_k.
inline Word word_from_index(std::uint64_t index, int N, int k)
{
    std::vector<int> digits(static_cast<std::size_t>(k));
    for (int i = k - 1; i >= 0; --i) {
        digits[static_cast<std::size_t>(i)] = static_cast<int>(index % static_cast<std::uint64_t>(N));
        index /= static_cast<std::uint64_t>(N);
    }
    return Word(std::move(digits));
}

/// All words of length k in lexicographic order.
inline std::vector<Word> words_of_length(int N, int k)
{
    std::uint64_t count = 1;
    for (int i = 0; i < k; ++i)
        count *= static_cast<std::uint64_t>(N);
    std::vector<Word> out;
    out.reserve(count);
    for (std::uint64_t idx = 0; idx < count; ++idx)
        out.push_back(word_from_index(idx, N, k));
    return out;
}

/// All words of length 0..max_len.
inline std::vector<Word> words_up_to(int N, int max_len)
{
    std::vector<Word> out;
    for (int k = 0; k <= max_len; ++k) {
        auto level = words_of_length(N, k);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

/// Scale N and filters m_0, ..., m_{N-1}. Defines S_j f(z) = m_j(z) f(z^N) on L^2(T).
/// Unitarity of the modulation matrix is not assumed; use check_unitarity().
template <typename Scalar = double>
class FilterBank {
public:
    using Poly = LaurentPoly<Scalar>;

    FilterBank(int N, std::vector<Poly> filters) : N_(N), filters_(std::move(filters))
    {
        if (N_ < 2)
            throw std::invalid_argument("FilterBank: scale N must be >= 2");
        if (static_cast<int>(filters_.size()) != N_)
            throw std::invalid_argument("FilterBank: expected " + std::to_string(N_) + " filters, got " +
                                        std::to_string(filters_.size()));
    }

    int N() const { return N_; }
    const Poly& filter(int j) const
    {
        check_letter(j);
        return filters_[static_cast<std::size_t>(j)];
    }
    const std::vector<Poly>& filters() const { return filters_; }

    void check_letter(int j) const
    {
        if (j < 0 || j >= N_)
            throw std::out_of_range("letter " + std::to_string(j) + " out of range for N = " + std::to_string(N_));
    }

    void check_word(const Word& w) const
    {
        for (int j : w)
            check_letter(j);
    }

    /// m_j(z) = z^j.
    static FilterBank monomial(int N)
    {
        std::vector<Poly> f;
        for (int j = 0; j < N; ++j)
            f.push_back(Poly::monomial(j));
        return FilterBank(N, std::move(f));
    }

    /// m_j(z) = N^{-1/2} sum_k exp(2 pi i jk/N) z^k  (N-adic Haar filters).
    static FilterBank dft(int N)
    {
        std::vector<Poly> f;
        const Scalar s = Scalar(1) / std::sqrt(static_cast<Scalar>(N));
        for (int j = 0; j < N; ++j) {
            CoeffVector<Scalar> c(N);
            for (int k = 0; k < N; ++k) {
                // Reduce jk mod N first so the root of unity is exact where possible.
                const int r = (j * k) % N;
                const Scalar ang = 2 * std::numbers::pi_v<Scalar> * static_cast<Scalar>(r) / static_cast<Scalar>(N);
                Complex<Scalar> w = std::polar(Scalar(1), ang);
                if (2 * r == N)
                    w = Complex<Scalar>(-1);
                else if (r == 0)
                    w = Complex<Scalar>(1);
                c(k) = s * w;
            }
            f.emplace_back(0, std::move(c));
        }
        return FilterBank(N, std::move(f));
    }

    /// m_0 = (1+z)/sqrt2, m_1 = (1-z)/sqrt2.
    static FilterBank haar()
    {
        const Scalar s = Scalar(1) / std::sqrt(Scalar(2));
        return FilterBank(2, {Poly(0, std::vector<Complex<Scalar>>{s, s}),
                              Poly(0, std::vector<Complex<Scalar>>{s, -s})});
    }

    /// m_0 = 1, m_1 = z: S_0 f = f(z^2), S_1 f = z f(z^2).
    static FilterBank shift() { return monomial(2); }

private:
    int N_;
    std::vector<Poly> filters_;
};

using FilterBankd = FilterBank<double>;

/// Max over sample points z_s = exp(2 pi i s/samples) of ||U U^* - I||_F, where
/// U_{jk}(z) = N^{-1/2} m_j(z exp(2 pi i k/N)).
template <typename Scalar>
Scalar check_unitarity(const FilterBank<Scalar>& bank, int samples = 257)
{
    if (samples < 1)
        throw std::invalid_argument("check_unitarity: samples must be >= 1");
    using Mat = Eigen::Matrix<Complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;
    const int N = bank.N();
    const Scalar two_pi = 2 * std::numbers::pi_v<Scalar>;
    const Scalar inv_sqrt_n = Scalar(1) / std::sqrt(static_cast<Scalar>(N));
    Scalar worst = 0;
    Mat U(N, N);
    for (int s = 0; s < samples; ++s) {
        const Scalar theta = two_pi * static_cast<Scalar>(s) / static_cast<Scalar>(samples);
        for (int k = 0; k < N; ++k) {
            const Complex<Scalar> zk = std::polar(Scalar(1), theta + two_pi * static_cast<Scalar>(k) / static_cast<Scalar>(N));
            for (int j = 0; j < N; ++j)
                U(j, k) = inv_sqrt_n * evaluate(bank.filter(j), zk);
        }
        const Scalar r = (U * U.adjoint() - Mat::Identity(N, N)).norm();
        worst = std::max(worst, r);
    }
    return worst;
}

/// S_j f = m_j(z) f(z^N).
template <typename Scalar>
LaurentPoly<Scalar> apply_S(const FilterBank<Scalar>& bank, int j, const LaurentPoly<Scalar>& f)
{
    bank.check_letter(j);
    return multiply(bank.filter(j), upsample(f, bank.N()));
}

namespace detail {
inline int floor_div(int a, int b)
{
    int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}
inline int ceil_div(int a, int b) { return -floor_div(-a, b); }
} // namespace detail

/// (S_j^* f)_n = sum_k conj(c_{j,k}) f_{Nn+k}, with m_j = sum_k c_{j,k} z^k.
template <typename Scalar>
LaurentPoly<Scalar> apply_S_adj(const FilterBank<Scalar>& bank, int j, const LaurentPoly<Scalar>& f)
{
    bank.check_letter(j);
    const auto& m = bank.filter(j);
    if (f.is_zero() || m.is_zero())
        return {};
    const int N = bank.N();
    const int lo = detail::ceil_div(f.lowest() - m.highest(), N);
    const int hi = detail::floor_div(f.highest() - m.lowest(), N);
    if (lo > hi)
        return {};
    CoeffVector<Scalar> out = CoeffVector<Scalar>::Zero(hi - lo + 1);
    const auto& mc = m.coefficients();
    const auto& fc = f.coefficients();
    for (int n = lo; n <= hi; ++n) {
        Complex<Scalar> acc(0);
        for (Eigen::Index i = 0; i < mc.size(); ++i) {
            const int idx = N * n + m.lowest() + static_cast<int>(i) - f.lowest();
            if (idx < 0 || idx >= fc.size())
                continue;
            acc += std::conj(mc(i)) * fc(idx);
        }
        out(n - lo) = acc;
    }
    return LaurentPoly<Scalar>(lo, std::move(out));
}

/// S_{a_1} ... S_{a_k} f  (a_k is applied first).
template <typename Scalar>
LaurentPoly<Scalar> apply_word(const FilterBank<Scalar>& bank, const Word& w, LaurentPoly<Scalar> f)
{
    bank.check_word(w);
    for (auto it = w.rbegin(); it != w.rend(); ++it)
        f = apply_S(bank, *it, f);
    return f;
}

/// S_{a_k}^* ... S_{a_1}^* f  (a_1 is applied first).
template <typename Scalar>
LaurentPoly<Scalar> apply_word_adj(const FilterBank<Scalar>& bank, const Word& w, LaurentPoly<Scalar> f)
{
    bank.check_word(w);
    for (int j : w) {
        if (f.is_zero())
            break;
        f = apply_S_adj(bank, j, f);
    }
    return f;
}

/// P(A_k(a)) f = S_a S_a^* f.
template <typename Scalar>
LaurentPoly<Scalar> cylinder_projection(const FilterBank<Scalar>& bank, const Word& w, const LaurentPoly<Scalar>& f)
{
    return apply_word(bank, w, apply_word_adj(bank, w, f));
}

template <typename Scalar>
struct CuntzReport {
    Scalar isometry = 0;     ///< max ||S_j^* S_k e_n - delta_jk e_n||
    Scalar completeness = 0; ///< max ||sum_j S_j S_j^* e_n - e_n||
    Scalar max() const { return std::max(isometry, completeness); }
};

/// Residuals of S_j^* S_k = delta_jk I and sum_j S_j S_j^* = I on e_n, |n| <= M.
template <typename Scalar>
CuntzReport<Scalar> verify_cuntz(const FilterBank<Scalar>& bank, int M)
{
    if (M < 0)
        throw std::invalid_argument("verify_cuntz: degree bound must be >= 0");
    using Poly = LaurentPoly<Scalar>;
    const int N = bank.N();
    CuntzReport<Scalar> rep;
    for (int n = -M; n <= M; ++n) {
        const Poly e = Poly::monomial(n);
        Poly sum;
        for (int k = 0; k < N; ++k) {
            const Poly sk = apply_S(bank, k, e);
            for (int j = 0; j < N; ++j) {
                const Poly r = apply_S_adj(bank, j, sk);
                rep.isometry = std::max(rep.isometry, j == k ? distance(r, e) : norm(r));
            }
            sum = add(sum, apply_S(bank, k, apply_S_adj(bank, k, e)));
        }
        rep.completeness = std::max(rep.completeness, distance(sum, e));
    }
    return rep;
}

inline constexpr double kUnitNormTolerance = 1e-9;
inline constexpr double kEigenResidualTolerance = 1e-9;

template <typename Scalar>
struct JointEigenReport {
    std::vector<Complex<Scalar>> lambda;
    std::vector<Scalar> residual;
    /// |sum_j |lambda_j|^2 - 1|, present only when every residual is within tolerance.
    std::optional<Scalar> norm_defect;

    bool is_joint_eigenvector() const { return norm_defect.has_value(); }
};

template <typename Scalar>
void require_unit(const LaurentPoly<Scalar>& f, const char* who)
{
    if (std::abs(norm(f) - Scalar(1)) > static_cast<Scalar>(kUnitNormTolerance))
        throw std::invalid_argument(std::string(who) + ": vector must have unit norm");
}

/// Rayleigh quotients lambda_j = <f|S_j^* f> and residuals ||S_j^* f - lambda_j f||.
template <typename Scalar>
JointEigenReport<Scalar> joint_eigen_check(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f,
                                           Scalar tolerance = static_cast<Scalar>(kEigenResidualTolerance))
{
    require_unit(f, "joint_eigen_check");
    JointEigenReport<Scalar> rep;
    bool all_ok = true;
    Scalar sum = 0;
    for (int j = 0; j < bank.N(); ++j) {
        const auto g = apply_S_adj(bank, j, f);
        const Complex<Scalar> lam = inner(f, g);
        const Scalar res = distance(g, scale(f, lam));
        rep.lambda.push_back(lam);
        rep.residual.push_back(res);
        sum += std::norm(lam);
        all_ok = all_ok && res <= tolerance;
    }
    if (all_ok)
        rep.norm_defect = std::abs(sum - Scalar(1));
    return rep;
}

} // namespace cuntz
