#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "filter_bank.hpp"
#include "measure.hpp"

namespace cuntz {

enum class Verdict { Consistent, Violated };

inline const char* to_string(Verdict v) { return v == Verdict::Consistent ? "CONSISTENT" : "VIOLATED"; }

template <typename Scalar = double>
struct BranchReport {
    int branch;
    Verdict verdict;
    std::vector<Word> offending_cells;
    /// Atom-wise gap between mu_{S_i f}^(k) and the pushforward of mu_f^(k-1) under sigma_i.
    Scalar identity_residual;
};

/// Finite-depth test of mu_f o sigma_i^{-1} << mu_f. VIOLATED means some depth-k
/// cell carries pushforward mass while mu_f^(k) gives it none, which is genuine
/// evidence against absolute continuity. CONSISTENT is only a necessary condition.
template <typename Scalar = double>
struct CyclicityReport {
    int depth;
    Scalar tau_mass;
    Scalar tau_null;
    std::vector<BranchReport<Scalar>> branches;

    bool all_consistent() const
    {
        return std::all_of(branches.begin(), branches.end(),
                           [](const auto& b) { return b.verdict == Verdict::Consistent; });
    }
};

inline constexpr double kDefaultTauMass = 1e-9;
inline constexpr double kDefaultTauNull = 1e-12;

/// Sums atom weights into the depth-k N-adic cells [j N^{-k}, (j+1) N^{-k}).
template <typename Scalar>
std::map<std::uint64_t, Scalar> cell_masses(const AtomicMeasure<Scalar>& m, int N, int k)
{
    const Scalar cells = std::pow(static_cast<Scalar>(N), static_cast<Scalar>(k));
    const auto last = static_cast<std::uint64_t>(cells) - 1;
    std::map<std::uint64_t, Scalar> out;
    for (Eigen::Index i = 0; i < m.size(); ++i) {
        // Atom points sit on cell left endpoints up to roundoff.
        const Scalar pos = std::floor(m.point(i) * cells + Scalar(1e-7));
        const auto idx = std::min(static_cast<std::uint64_t>(std::max(pos, Scalar(0))), last);
        out[idx] += m.weight(i);
    }
    return out;
}

template <typename Scalar>
CyclicityReport<Scalar> cyclicity_test(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f, int k,
                                       Scalar tau_mass = static_cast<Scalar>(kDefaultTauMass),
                                       Scalar tau_null = static_cast<Scalar>(kDefaultTauNull),
                                       std::uint64_t cap = kDefaultWordCap)
{
    require_unit(f, "cyclicity_test");
    if (k < 1)
        throw std::invalid_argument("cyclicity_test: depth must be >= 1");
    const int N = bank.N();
    const auto mu = approx_measure(bank, f, k, cap);
    const auto mu_coarse = approx_measure(bank, f, k - 1, cap);
    const auto base = cell_masses(mu, N, k);

    CyclicityReport<Scalar> rep{k, tau_mass, tau_null, {}};
    for (int i = 0; i < N; ++i) {
        const auto nu = approx_measure(bank, apply_S(bank, i, f), k, cap);
        const Scalar residual = atomwise_distance(nu, pushforward(mu_coarse, AffineMap<Scalar>::nadic_branch(i, N)));
        BranchReport<Scalar> br{i, Verdict::Consistent, {}, residual};
        for (const auto& [cell, mass] : cell_masses(nu, N, k)) {
            const auto it = base.find(cell);
            const Scalar base_mass = it == base.end() ? Scalar(0) : it->second;
            if (mass > tau_mass && base_mass < tau_null)
                br.offending_cells.push_back(word_from_index(cell, N, k));
        }
        if (!br.offending_cells.empty())
            br.verdict = Verdict::Violated;
        rep.branches.push_back(std::move(br));
    }
    return rep;
}

/// For the monomial bank at N = 2: max over words a of length k and |n| <= M of
/// ||P_a e_n - [n = a_1 + 2 a_2 + ... + 2^{k-1} a_k mod 2^k] e_n||.
template <typename Scalar = double>
Scalar projection_range_check(int k, int M)
{
    if (k < 1)
        throw std::invalid_argument("projection_range_check: k must be >= 1");
    if (M < (1 << k))
        throw std::invalid_argument("projection_range_check: M must be >= 2^k");
    using Poly = LaurentPoly<Scalar>;
    const auto bank = FilterBank<Scalar>::monomial(2);
    const int period = 1 << k;
    Scalar worst = 0;
    for (const Word& w : words_of_length(2, k)) {
        int residue = 0;
        for (std::size_t i = 0; i < w.size(); ++i)
            residue += w[i] << i;
        for (int n = -M; n <= M; ++n) {
            const Poly e = Poly::monomial(n);
            const bool kept = ((n % period) + period) % period == residue;
            const Poly expected = kept ? e : Poly{};
            worst = std::max(worst, distance(cylinder_projection(bank, w, e), expected));
        }
    }
    return worst;
}

/// max over i != j and words a of |<S_i f | P_a S_j f>|.
template <typename Scalar>
Scalar subspace_orthogonality_check(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f,
                                    std::span<const Word> words)
{
    const int N = bank.N();
    std::vector<LaurentPoly<Scalar>> branch;
    for (int i = 0; i < N; ++i)
        branch.push_back(apply_S(bank, i, f));
    Scalar worst = 0;
    for (const Word& w : words)
        for (int j = 0; j < N; ++j) {
            const auto pj = cylinder_projection(bank, w, branch[static_cast<std::size_t>(j)]);
            for (int i = 0; i < N; ++i)
                if (i != j)
                    worst = std::max(worst, std::abs(inner(branch[static_cast<std::size_t>(i)], pj)));
        }
    return worst;
}

} // namespace cuntz
