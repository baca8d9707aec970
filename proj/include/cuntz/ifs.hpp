#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "affine_map.hpp"
#include "errors.hpp"
#include "filter_bank.hpp"
#include "measure.hpp"

namespace cuntz {

/// Affine maps sigma_i with probabilities p_i > 0, sum p_i = 1.
template <typename Scalar = double>
class AffineIFS {
public:
    AffineIFS(std::vector<AffineMap<Scalar>> maps, std::vector<Scalar> probs)
        : maps_(std::move(maps)), probs_(std::move(probs))
    {
        if (maps_.empty())
            throw std::invalid_argument("AffineIFS: no maps");
        if (maps_.size() != probs_.size())
            throw std::invalid_argument("AffineIFS: need one probability per map");
        Scalar total = 0;
        for (Scalar p : probs_) {
            if (!(p > 0))
                throw std::invalid_argument("AffineIFS: probabilities must be positive");
            total += p;
        }
        if (std::abs(total - Scalar(1)) > Scalar(1e-12))
            throw std::invalid_argument("AffineIFS: probabilities must sum to 1");
    }

    /// Equal weights.
    explicit AffineIFS(std::vector<AffineMap<Scalar>> maps)
        : AffineIFS(maps, std::vector<Scalar>(maps.size(), Scalar(1) / static_cast<Scalar>(maps.size())))
    {
    }

    /// sigma_j(x) = (x + j)/N with the given weights.
    static AffineIFS nadic(int N, std::vector<Scalar> probs)
    {
        std::vector<AffineMap<Scalar>> maps;
        for (int j = 0; j < N; ++j)
            maps.push_back(AffineMap<Scalar>::nadic_branch(j, N));
        return AffineIFS(std::move(maps), std::move(probs));
    }

    std::size_t size() const { return maps_.size(); }
    const std::vector<AffineMap<Scalar>>& maps() const { return maps_; }
    const std::vector<Scalar>& probs() const { return probs_; }
    const AffineMap<Scalar>& map(std::size_t i) const { return maps_[i]; }
    Scalar prob(std::size_t i) const { return probs_[i]; }

    /// max_i |a_i|
    Scalar contraction() const
    {
        Scalar c = 0;
        for (const auto& m : maps_)
            c = std::max(c, m.contraction());
        return c;
    }

    bool is_contractive() const { return contraction() < Scalar(1); }

    void require_contractive(const char* who) const
    {
        if (!is_contractive())
            throw std::invalid_argument(std::string(who) + ": IFS is not contractive");
    }

private:
    std::vector<AffineMap<Scalar>> maps_;
    std::vector<Scalar> probs_;
};

using AffineIFSd = AffineIFS<double>;

template <typename Scalar = double>
struct Interval {
    Scalar lo;
    Scalar hi;
    Scalar length() const { return hi - lo; }
};

template <typename Scalar = double>
struct Cell {
    Word word;
    Interval<Scalar> interval;
};

template <typename Scalar = double>
struct CellReport {
    std::vector<Cell<Scalar>> cells;
    Scalar max_diameter = 0;
    bool overlapping = false;
};

template <typename Scalar>
Interval<Scalar> image(const AffineMap<Scalar>& m, Interval<Scalar> iv)
{
    const Scalar a = m(iv.lo), b = m(iv.hi);
    return {std::min(a, b), std::max(a, b)};
}

/// A_k(a) = sigma_{a_1} o ... o sigma_{a_k}(domain) for every word of length k.
/// Cells overlap when two interiors intersect; shared endpoints are allowed.
template <typename Scalar>
CellReport<Scalar> attractor_cells(const AffineIFS<Scalar>& ifs, Interval<Scalar> domain, int k,
                                   std::uint64_t cap = kDefaultWordCap)
{
    if (k < 1)
        throw std::invalid_argument("attractor_cells: depth must be >= 1");
    const int N = static_cast<int>(ifs.size());
    require_word_budget(N, k, cap);
    CellReport<Scalar> rep;
    for (const Word& w : words_of_length(N, k)) {
        Interval<Scalar> iv = domain;
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            iv = image(ifs.map(static_cast<std::size_t>(*it)), iv);
        rep.max_diameter = std::max(rep.max_diameter, iv.length());
        rep.cells.push_back({w, iv});
    }
    std::vector<Interval<Scalar>> sorted;
    for (const auto& c : rep.cells)
        sorted.push_back(c.interval);
    std::sort(sorted.begin(), sorted.end(), [](const auto& l, const auto& r) { return l.lo < r.lo; });
    const Scalar eps = Scalar(1e-12) * std::max(Scalar(1), domain.length());
    for (std::size_t i = 1; i < sorted.size(); ++i)
        if (sorted[i].lo < sorted[i - 1].hi - eps)
            rep.overlapping = true;
    return rep;
}

/// mu -> sum_i p_i mu o sigma_i^{-1}, applied `steps` times.
template <typename Scalar>
AtomicMeasure<Scalar> hutchinson_iterate(const AffineIFS<Scalar>& ifs, const AtomicMeasure<Scalar>& start, int steps,
                                         std::uint64_t cap = kDefaultWordCap)
{
    ifs.require_contractive("hutchinson_iterate");
    if (steps < 0)
        throw std::invalid_argument("hutchinson_iterate: steps must be >= 0");
    if (std::abs(start.total_mass() - Scalar(1)) > Scalar(1e-12))
        throw std::invalid_argument("hutchinson_iterate: start must be a probability measure");
    AtomicMeasure<Scalar> mu = start;
    for (int s = 0; s < steps; ++s) {
        const std::uint64_t next = static_cast<std::uint64_t>(mu.size()) * ifs.size();
        if (next > cap)
            throw ResourceLimit("hutchinson_iterate: " + std::to_string(next) + " atoms exceeds cap " +
                                    std::to_string(cap),
                                next, cap);
        std::vector<Atom<Scalar>> atoms;
        atoms.reserve(next);
        for (std::size_t i = 0; i < ifs.size(); ++i)
            for (Eigen::Index a = 0; a < mu.size(); ++a)
                atoms.push_back({ifs.map(i)(mu.point(a)), ifs.prob(i) * mu.weight(a)});
        mu = AtomicMeasure<Scalar>(std::move(atoms));
    }
    return mu;
}

inline constexpr int kChaosBurnIn = 100;

/// Orbit x_{m+1} = sigma_{J_m}(x_m) with J_m i.i.d. ~ p, after kChaosBurnIn
/// discarded steps. Starts at the fixed point of sigma_0.
///
/// Randomness: std::mt19937_64 seeded with `seed`; each draw u = (r >> 11) * 2^-53
/// picks the first index whose cumulative probability exceeds u. Both steps are
/// fully specified, so orbits are reproducible across platforms.
template <typename Scalar>
std::vector<Scalar> chaos_orbit(const AffineIFS<Scalar>& ifs, std::uint64_t seed, std::size_t n)
{
    ifs.require_contractive("chaos_game");
    if (n < 1)
        throw std::invalid_argument("chaos_game: n must be >= 1");
    std::vector<Scalar> cumulative(ifs.size());
    Scalar c = 0;
    for (std::size_t i = 0; i < ifs.size(); ++i)
        cumulative[i] = (c += ifs.prob(i));
    std::mt19937_64 rng(seed);
    auto draw = [&]() {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        for (std::size_t i = 0; i + 1 < cumulative.size(); ++i)
            if (u < static_cast<double>(cumulative[i]))
                return i;
        return cumulative.size() - 1;
    };
    const auto& m0 = ifs.map(0);
    Scalar x = m0.b / (Scalar(1) - m0.a);
    for (int i = 0; i < kChaosBurnIn; ++i)
        x = ifs.map(draw())(x);
    std::vector<Scalar> orbit(n);
    for (auto& o : orbit)
        o = x = ifs.map(draw())(x);
    return orbit;
}

/// Empirical measure of chaos_orbit(): weight 1/n per visited point.
template <typename Scalar>
AtomicMeasure<Scalar> chaos_game(const AffineIFS<Scalar>& ifs, std::uint64_t seed, std::size_t n)
{
    const auto orbit = chaos_orbit(ifs, seed, n);
    std::vector<Atom<Scalar>> atoms;
    atoms.reserve(n);
    const Scalar w = Scalar(1) / static_cast<Scalar>(n);
    for (Scalar x : orbit)
        atoms.push_back({x, w});
    return AtomicMeasure<Scalar>(std::move(atoms), Scalar(0));
}

/// sum_atoms w x^order
template <typename Scalar>
Scalar moments(const AtomicMeasure<Scalar>& m, int order)
{
    if (order < 0)
        throw std::invalid_argument("moments: order must be >= 0");
    return (m.weights().array() * m.points().array().pow(static_cast<Scalar>(order))).sum();
}

template <typename Scalar = double>
struct BridgeReport {
    std::vector<Complex<Scalar>> lambda;
    AtomicMeasure<Scalar> cuntz_measure;
    AtomicMeasure<Scalar> hutchinson_measure;
    Scalar distance;
};

/// For a joint eigenvector f (S_j^* f = lambda_j f), compares mu_f^(k) with the
/// depth-k Hutchinson iterate from delta_0 of the N-adic IFS weighted by |lambda_j|^2.
/// Branches with lambda_j = 0 carry no mass and are left out of the IFS.
template <typename Scalar>
BridgeReport<Scalar> eigen_to_ifs_bridge(const FilterBank<Scalar>& bank, const LaurentPoly<Scalar>& f,
                                         const std::vector<Complex<Scalar>>& lambda, int k,
                                         std::uint64_t cap = kDefaultWordCap)
{
    const int N = bank.N();
    if (static_cast<int>(lambda.size()) != N)
        throw std::invalid_argument("eigen_to_ifs_bridge: need one eigenvalue per filter");
    const auto check = joint_eigen_check(bank, f);
    if (!check.is_joint_eigenvector())
        throw std::invalid_argument("eigen_to_ifs_bridge: f is not a joint eigenvector of the S_j^*");
    for (int j = 0; j < N; ++j)
        if (std::abs(check.lambda[static_cast<std::size_t>(j)] - lambda[static_cast<std::size_t>(j)]) >
            static_cast<Scalar>(kEigenResidualTolerance))
            throw std::invalid_argument("eigen_to_ifs_bridge: supplied eigenvalues do not match S_j^* f");

    std::vector<AffineMap<Scalar>> maps;
    std::vector<Scalar> probs;
    Scalar total = 0;
    for (int j = 0; j < N; ++j) {
        const Scalar p = std::norm(lambda[static_cast<std::size_t>(j)]);
        if (p == Scalar(0))
            continue;
        maps.push_back(AffineMap<Scalar>::nadic_branch(j, N));
        probs.push_back(p);
        total += p;
    }
    // sum |lambda_j|^2 = 1 holds only to roundoff; renormalize for the IFS invariant.
    for (auto& p : probs)
        p /= total;
    const AffineIFS<Scalar> ifs(std::move(maps), std::move(probs));

    BridgeReport<Scalar> rep{lambda, approx_measure(bank, f, k, cap),
                             hutchinson_iterate(ifs, AtomicMeasure<Scalar>::dirac(0), k, cap), 0};
    rep.distance = atomwise_distance(rep.cuntz_measure, rep.hutchinson_measure);
    return rep;
}

} // namespace cuntz
