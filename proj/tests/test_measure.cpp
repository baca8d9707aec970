#include <doctest.h>

#include <numbers>

#include "test_support.hpp"

using namespace cuntz;
using namespace cuntz::testing;

namespace {

AtomicMeasured uniform_dyadic(int k)
{
    std::vector<Atom<double>> atoms;
    const int n = 1 << k;
    for (int j = 0; j < n; ++j)
        atoms.push_back({double(j) / n, 1.0 / n});
    return AtomicMeasured(atoms);
}

const std::vector<double> kTGrid{1.0, std::numbers::pi, 10.0};

} // namespace

TEST_CASE("AtomicMeasure invariants")
{
    const AtomicMeasured m({{0.5, 0.25}, {0.25, 0.5}, {0.5, 0.25}, {0.75, 0.0}});
    REQUIRE(m.size() == 2);
    CHECK(m.point(0) == 0.25);
    CHECK(m.weight(1) == 0.5);
    CHECK(m.total_mass() == 1.0);
    CHECK_THROWS_AS(AtomicMeasured({{0.1, -1.0}}), std::invalid_argument);
    CHECK_THROWS_AS(AtomicMeasured({{std::nan(""), 1.0}}), std::invalid_argument);
}

TEST_CASE("nadic_point")
{
    CHECK(nadic_point<double>(Word{1, 0, 1}, 2).value == 0.625);
    CHECK(nadic_point<double>(Word{}, 3).value == 0.0);
    CHECK(std::abs(nadic_point<double>(Word{2, 1}, 3).value - 7.0 / 9.0) < 1e-15);
    CHECK_THROWS_AS(nadic_point<double>(Word{3}, 3), std::out_of_range);
}

TEST_CASE("approx_measure examples")
{
    for (int k = 0; k <= 8; ++k) {
        const auto m = approx_measure(FilterBankd::monomial(2), e(0), k);
        REQUIRE(m.size() == 1);
        CHECK(m.point(0) == 0.0);
        CHECK(m.weight(0) == 1.0);
    }

    const auto haar = approx_measure(FilterBankd::haar(), e(0), 3);
    REQUIRE(haar.size() == 8);
    for (int j = 0; j < 8; ++j) {
        CHECK(haar.point(j) == j / 8.0);
        CHECK(std::abs(haar.weight(j) - 0.125) < 1e-15);
    }

    const auto shift = approx_measure(FilterBankd::shift(), e(1), 3);
    REQUIRE(shift.size() == 1);
    CHECK(shift.point(0) == 0.5);
    CHECK(shift.weight(0) == 1.0);

    CHECK_THROWS_AS(approx_measure(FilterBankd::haar(), e(0), -1), std::invalid_argument);
}

TEST_CASE("approx_measure enforces the word cap")
{
    CHECK_THROWS_AS(approx_measure(FilterBankd::haar(), e(0), 21), ResourceLimit);
    try {
        approx_measure(FilterBankd::dft(3), e(0), 5, 100);
        FAIL("expected ResourceLimit");
    } catch (const ResourceLimit& err) {
        CHECK(err.requested() > 100);
        CHECK(std::string(err.what()).find("3^5") != std::string::npos);
    }
    CHECK_NOTHROW(approx_measure(FilterBankd::haar(), e(0), 20));
}

TEST_CASE("approx_measure agrees with brute-force word enumeration")
{
    std::mt19937_64 rng(5);
    for (const auto& bank : shipped_banks())
        for (int trial = 0; trial < 10; ++trial) {
            const Poly f = random_unit_poly(rng, -8, 8);
            for (int k = 0; k <= 4; ++k)
                CHECK(atomwise_distance(approx_measure(bank, f, k), brute_force_measure(bank, f, k)) < 1e-14);
        }
}

TEST_CASE("mass conservation")
{
    std::mt19937_64 rng(99);
    for (const auto& bank : shipped_banks())
        for (int trial = 0; trial < 20; ++trial) {
            const Poly f = random_unit_poly(rng);
            for (int k = 0; k <= 8; k += 2)
                CHECK(std::abs(approx_measure(bank, f, k).total_mass() - 1.0) < 1e-10);
        }
    // Non-unit vectors carry mass ||f||^2.
    const Poly g = scale(e(3), C(3));
    CHECK(approx_measure(FilterBankd::dft(3), g, 4).total_mass() == doctest::Approx(9.0));
}

TEST_CASE("fourier")
{
    std::mt19937_64 rng(8);
    const auto m = approx_measure(FilterBankd::dft(3), random_unit_poly(rng), 4);
    CHECK(std::abs(fourier(m, 0.0) - C(1)) < 1e-12);
    for (double t : {0.3, -7.0, 100.0})
        CHECK(std::abs(fourier(AtomicMeasured::dirac(0.0), t) - C(1)) < 1e-15);

    // Geometric sum: sum_j 2^-k e^{itj/2^k} = 2^-k (e^{it} - 1)/(e^{it/2^k} - 1).
    for (int k : {1, 3, 6})
        for (double t : {1.0, 2.5, -4.0}) {
            const double n = std::pow(2.0, k);
            const C closed = (std::exp(C(0, t)) - 1.0) / (n * (std::exp(C(0, t / n)) - 1.0));
            CHECK(std::abs(fourier(uniform_dyadic(k), t) - closed) < 1e-13);
        }
    CHECK(fourier(AtomicMeasured{}, 1.0) == C(0));
}

TEST_CASE("cdf")
{
    CHECK(cdf(AtomicMeasured::dirac(0.0), 0.0) == 1.0);
    CHECK(cdf(uniform_dyadic(3), 0.49) == 0.5);
    CHECK(cdf(uniform_dyadic(3), 0.125) == 0.25);  // closed interval
    std::mt19937_64 rng(4);
    const auto m = approx_measure(FilterBankd::haar(), random_unit_poly(rng), 5);
    double prev = 0;
    for (int i = 0; i <= 100; ++i) {
        const double F = cdf(m, i / 101.0);
        CHECK(F >= prev - 1e-15);
        prev = F;
    }
}

TEST_CASE("refinement_check")
{
    CHECK(refinement_check(FilterBankd::haar(), e(0), 4, std::span<const double>(kTGrid)) <= 1e-12);
    CHECK(refinement_check(FilterBankd::monomial(2), e(0), 3, std::span<const double>(kTGrid)) == 0.0);
    CHECK(refinement_check(FilterBankd::shift(), e(1), 2, std::span<const double>(kTGrid)) <= 1e-12);

    std::mt19937_64 rng(17);
    for (const auto& bank : shipped_banks())
        for (int trial = 0; trial < 5; ++trial) {
            const Poly f = random_unit_poly(rng);
            for (int k = 1; k <= 6; ++k)
                CHECK(refinement_check(bank, f, k, std::span<const double>(kTGrid)) <= 1e-12);
        }
    CHECK_THROWS_AS(refinement_check(FilterBankd::haar(), e(0), 0, std::span<const double>(kTGrid)),
                    std::invalid_argument);
}

TEST_CASE("fourier_error_vs_reference")
{
    const double t = std::numbers::pi;
    const C lebesgue = (std::exp(C(0, t)) - 1.0) / C(0, t);
    const auto r = fourier_error_vs_reference(FilterBankd::haar(), e(0), 6, t, lebesgue);
    CHECK(r.pass);
    CHECK(r.error <= t * std::pow(2.0, -6));
    CHECK(r.bound == doctest::Approx(t / 64));

    for (int k : {0, 3, 9}) {
        const auto d = fourier_error_vs_reference(FilterBankd::monomial(2), e(0), k, 17.0, C(1));
        CHECK(d.error == 0.0);
        CHECK(d.pass);
    }

    const auto z = fourier_error_vs_reference(FilterBankd::haar(), e(0), 3, 0.0, C(1));
    CHECK(z.error < 1e-15);
    CHECK(z.bound == 0.0);
    CHECK(z.pass);
}

TEST_CASE("integrate and bound_report")
{
    std::mt19937_64 rng(23);
    const auto m = approx_measure(FilterBankd::dft(3), random_unit_poly(rng), 3);
    CHECK(integrate(m, [](double) { return 1.0; }) == doctest::Approx(m.total_mass()));
    CHECK(integrate(uniform_dyadic(3), [](double x) { return x; }) == 7.0 / 16.0);
    const double t = 2.2;
    CHECK(std::abs(integrate(m, [t](double x) { return std::exp(C(0, t * x)); }) - fourier(m, t)) < 1e-15);
    CHECK(bound_report(3.0, 4, 2) == 3.0 / 16.0);
}

TEST_CASE("pushforward")
{
    const auto half = pushforward(AtomicMeasured::dirac(0.0), AffineMap<double>::nadic_branch(1, 2));
    REQUIRE(half.size() == 1);
    CHECK(half.point(0) == 0.5);
    CHECK(half.weight(0) == 1.0);

    const auto u = uniform_dyadic(4);
    CHECK(atomwise_distance(pushforward(u, AffineMap<double>(1, 0)), u) == 0.0);

    const auto left = pushforward(uniform_dyadic(3), AffineMap<double>(0.5, 0));
    REQUIRE(left.size() == 8);
    for (int j = 0; j < 8; ++j) {
        CHECK(left.point(j) == j / 16.0);
        CHECK(left.weight(j) == 0.125);
    }

    // Coincident images merge.
    const auto merged = pushforward(AtomicMeasured({{0.2, 0.5}, {0.4, 0.5}}), AffineMap<double>(0.0, 0.3));
    REQUIRE(merged.size() == 1);
    CHECK(merged.weight(0) == 1.0);

    CHECK_THROWS_AS(pushforward(u, AffineMap<double>(1, 0.5)), std::domain_error);
    CHECK_NOTHROW(pushforward(u, AffineMap<double>(1, 0.5), Support::RealLine));
}

TEST_CASE("cdf_sup_distance")
{
    const auto u = uniform_dyadic(5);
    CHECK(cdf_sup_distance(u, u) == 0.0);
    CHECK(cdf_sup_distance(AtomicMeasured::dirac(0.0), AtomicMeasured::dirac(0.5)) == 1.0);
    for (int k = 1; k <= 8; ++k)
        CHECK(cdf_sup_distance(uniform_dyadic(k), uniform_dyadic(k + 1)) == std::pow(2.0, -(k + 1)));

    // Against the Lebesgue distribution function F(x) = x.
    for (int k = 1; k <= 8; ++k)
        CHECK(cdf_sup_distance(uniform_dyadic(k), [](double x) { return x; }) == std::pow(2.0, -k));
    CHECK(cdf_sup_distance(AtomicMeasured::dirac(0.0), [](double x) { return x; }) == 1.0);
    CHECK(cdf_sup_distance(AtomicMeasured::dirac(0.5), [](double x) { return x; }) == 0.5);
}

TEST_CASE("depth consistency for the eigenvector examples")
{
    for (int k = 1; k <= 7; ++k) {
        const auto a = approx_measure(FilterBankd::haar(), e(0), k);
        const auto b = approx_measure(FilterBankd::haar(), e(0), k + 1);
        CHECK(cdf_sup_distance(a, b) <= std::pow(2.0, -k));
        const auto c = approx_measure(FilterBankd::monomial(2), e(0), k);
        const auto d = approx_measure(FilterBankd::monomial(2), e(0), k + 1);
        CHECK(cdf_sup_distance(c, d) == 0.0);
    }
    std::mt19937_64 rng(31);
    for (const auto& bank : shipped_banks()) {
        const Poly f = random_unit_poly(rng);
        const double Nd = bank.N();
        for (int k = 1; k <= 4; ++k)
            for (int m = 1; m <= 2; ++m)
                for (double t : {1.0, 10.0, -25.0}) {
                    const double gap = std::abs(fourier(approx_measure(bank, f, k), t) - fourier(approx_measure(bank, f, k + m), t));
                    CHECK(gap <= std::abs(t) * (std::pow(Nd, -k) + std::pow(Nd, -k - m)) + 1e-12);
                }
    }
}

TEST_CASE("identity mu_{S_i f} = mu_f o sigma_i^-1 at finite depth")
{
    std::mt19937_64 rng(77);
    for (const auto& bank : shipped_banks())
        for (int trial = 0; trial < 5; ++trial) {
            const Poly f = random_unit_poly(rng, -8, 8);
            for (int k = 1; k <= 6; ++k)
                for (int i = 0; i < bank.N(); ++i) {
                    const auto lhs = approx_measure(bank, apply_S(bank, i, f), k);
                    const auto rhs = pushforward(approx_measure(bank, f, k - 1), AffineMap<double>::nadic_branch(i, bank.N()));
                    CHECK(atomwise_distance(lhs, rhs) <= 1e-12);
                }
        }
}

TEST_CASE("fourier is 1-Lipschitz for probability measures on [0,1)")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> T(-50, 50);
    for (const auto& bank : shipped_banks()) {
        const auto m = approx_measure(bank, random_unit_poly(rng), 5);
        for (int trial = 0; trial < 20; ++trial) {
            const double t = T(rng), s = T(rng);
            CHECK(std::abs(fourier(m, t) - fourier(m, s)) <= std::abs(t - s) + 1e-12);
        }
    }
}
