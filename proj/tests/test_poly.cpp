#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

#include "simustab/errors.hpp"
#include "simustab/poly.hpp"

using namespace simustab;
using cplx = std::complex<double>;

namespace {

bool contains_root(const std::vector<cplx>& roots, cplx r, double tol) {
    return std::any_of(roots.begin(), roots.end(),
                       [&](const cplx& x) { return std::abs(x - r) <= tol; });
}

}  // namespace

TEST_CASE("linear factor") {
    Polynomial p({-3.0, 1.0});  // s - 3
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 1);
    CHECK(std::abs(roots[0] - cplx(3.0, 0.0)) < 1e-12);
}

TEST_CASE("conjugate pair of s^2 + 1") {
    Polynomial p({1.0, 0.0, 1.0});
    auto roots = poly_roots(p);
    REQUIRE(roots.size() == 2);
    CHECK(contains_root(roots, cplx(0.0, 1.0), 1e-10));
    CHECK(contains_root(roots, cplx(0.0, -1.0), 1e-10));
}

TEST_CASE("random degree-5 roots have small residual and conjugate closure") {
    std::mt19937 rng(20240601u);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> c(6);
        for (double& x : c) x = gauss(rng);
        if (std::abs(c.back()) < 0.1) c.back() += 1.0;
        Polynomial p(c);
        auto roots = poly_roots(p);
        REQUIRE(static_cast<int>(roots.size()) == p.degree());
        const double scale = 1.0 + p.max_abs_coeff();
        for (const cplx& r : roots) {
            CHECK(std::abs(p.eval(r)) / scale < 1e-8);
            if (std::abs(r.imag()) > 1e-9)
                CHECK(contains_root(roots, std::conj(r), 1e-9 * (1.0 + std::abs(r))));
        }
    }
}

TEST_CASE("degenerate inputs are rejected") {
    CHECK_THROWS_AS(poly_roots(Polynomial()), DegreeError);
    CHECK_THROWS_AS(poly_roots(Polynomial::constant(4.0)), DegreeError);
}

TEST_CASE("round trip through from_roots for well-separated roots") {
    std::mt19937 rng(77u);
    std::uniform_real_distribution<double> dist(-4.0, 4.0);
    for (int trial = 0; trial < 10; ++trial) {
        // 4 real roots and 2 conjugate pairs, all well separated
        std::vector<cplx> roots;
        for (int i = 0; i < 4; ++i) roots.push_back(cplx(dist(rng) + 9.0 * i, 0.0));
        for (int i = 0; i < 2; ++i) {
            cplx r(dist(rng) - 8.0 * (i + 1), 1.5 + std::abs(dist(rng)));
            roots.push_back(r);
            roots.push_back(std::conj(r));
        }
        const double lead = 2.5;
        Polynomial p = Polynomial::from_roots(roots, lead);
        REQUIRE(p.degree() == 8);
        auto back = poly_roots(p);
        Polynomial q = Polynomial::from_roots(back, p.leading());
        for (int k = 0; k <= p.degree(); ++k) {
            double denom = std::max(1e-6, std::abs(p.coeff(k)));
            CHECK(std::abs(p.coeff(k) - q.coeff(k)) / denom < 1e-6);
        }
    }
}

TEST_CASE("coefficient drop tolerance keeps degree honest") {
    Polynomial p({1.0, 2.0, 1e-15});
    CHECK(p.degree() == 1);
    Polynomial z({0.0, 0.0});
    CHECK(z.is_zero());
    CHECK(z.degree() == -1);
}

TEST_CASE("derivative and evaluation agree with calculus") {
    Polynomial p({1.0, -2.0, 0.0, 4.0});  // 1 - 2s + 4s^3
    Polynomial d = p.derivative();
    CHECK(d.coeff(0) == doctest::Approx(-2.0));
    CHECK(d.coeff(1) == doctest::Approx(0.0));
    CHECK(d.coeff(2) == doctest::Approx(12.0));
    CHECK(p.eval(2.0) == doctest::Approx(1.0 - 4.0 + 32.0));
}
