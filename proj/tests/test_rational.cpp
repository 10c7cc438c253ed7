#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "simustab/errors.hpp"
#include "simustab/rational.hpp"

using namespace simustab;
using cplx = std::complex<double>;

namespace {

RationalFunction random_rational(std::mt19937& rng, int num_deg, int den_deg) {
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    std::vector<double> nc(num_deg + 1), dc(den_deg + 1);
    for (double& x : nc) x = dist(rng);
    for (double& x : dc) x = dist(rng);
    if (std::abs(nc.back()) < 0.2) nc.back() += 1.0;
    if (std::abs(dc.back()) < 0.2) dc.back() += 1.0;
    return RationalFunction(Polynomial(nc), Polynomial(dc));
}

RationalMatrix random_matrix(std::mt19937& rng, int n) {
    RationalMatrix m(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) m.at(r, c) = random_rational(rng, 1, 2);
    return m;
}

cplx sample_point(std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-2.5, 2.5);
    return cplx(dist(rng), dist(rng));
}

}  // namespace

TEST_CASE("scalar evaluation") {
    RationalFunction r(Polynomial::constant(1.0), Polynomial({1.0, 1.0}));  // 1/(s+1)
    CHECK(std::abs(r.eval(1.0) - cplx(0.5, 0.0)) < 1e-14);
    RationalMatrix id = RationalMatrix::identity(3);
    Eigen::MatrixXcd v = id.eval(cplx(2.0, 1.0));
    CHECK((v - Eigen::MatrixXcd::Identity(3, 3)).norm() < 1e-14);
}

TEST_CASE("evaluation at a pole is rejected") {
    RationalFunction r(Polynomial::constant(1.0), Polynomial({1.0, 1.0}));
    CHECK_THROWS_AS(r.eval(cplx(-1.0, 0.0)), PoleEvaluation);
}

TEST_CASE("evaluation is a product homomorphism") {
    std::mt19937 rng(31u);
    for (int trial = 0; trial < 6; ++trial) {
        RationalMatrix a = random_matrix(rng, 2);
        RationalMatrix b = random_matrix(rng, 2);
        RationalMatrix ab = a * b;
        for (int k = 0; k < 4; ++k) {
            cplx s = sample_point(rng);
            try {
                Eigen::MatrixXcd lhs = ab.eval(s);
                Eigen::MatrixXcd rhs = a.eval(s) * b.eval(s);
                CHECK((lhs - rhs).norm() < 1e-8 * std::max(1.0, rhs.norm()));
            } catch (const PoleEvaluation&) {
            }
        }
    }
}

TEST_CASE("det and adjugate of small matrices") {
    RationalFunction r(Polynomial({1.0, 2.0}), Polynomial({3.0, 0.0, 1.0}));
    RationalMatrix one(1, 1);
    one.at(0, 0) = r;
    auto [d1, a1] = one.det_adj();
    CHECK(std::abs(d1.eval(2.0) - r.eval(2.0)) < 1e-14);
    CHECK(std::abs(a1.at(0, 0).eval(2.0) - cplx(1.0, 0.0)) < 1e-14);

    std::mt19937 rng(7u);
    RationalMatrix m = random_matrix(rng, 2);
    auto [d2, a2] = m.det_adj();
    cplx s(0.7, 0.4);
    Eigen::MatrixXcd v = m.eval(s);
    cplx det_expected = v(0, 0) * v(1, 1) - v(0, 1) * v(1, 0);
    CHECK(std::abs(d2.eval(s) - det_expected) < 1e-8 * std::max(1.0, std::abs(det_expected)));
    CHECK(std::abs(a2.at(0, 0).eval(s) - v(1, 1)) < 1e-8);
    CHECK(std::abs(a2.at(0, 1).eval(s) + v(0, 1)) < 1e-8);
    CHECK(std::abs(a2.at(1, 0).eval(s) + v(1, 0)) < 1e-8);
    CHECK(std::abs(a2.at(1, 1).eval(s) - v(0, 0)) < 1e-8);
}

TEST_CASE("adjugate identity on a random 4x4") {
    std::mt19937 rng(99u);
    RationalMatrix m(4, 4);
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) m.at(r, c) = random_rational(rng, 0, 1);
    auto [det, adj] = m.det_adj();
    int checked = 0;
    for (int attempt = 0; attempt < 32 && checked < 8; ++attempt) {
        cplx s = sample_point(rng);
        try {
            Eigen::MatrixXcd lhs = m.eval(s) * adj.eval(s);
            Eigen::MatrixXcd rhs = det.eval(s) * Eigen::MatrixXcd::Identity(4, 4);
            CHECK((lhs - rhs).norm() < 1e-8 * std::max(1.0, rhs.norm()));
            ++checked;
        } catch (const PoleEvaluation&) {
        }
    }
    CHECK(checked == 8);
}

TEST_CASE("non-square determinant is rejected") {
    RationalMatrix m(2, 3);
    CHECK_THROWS_AS(m.det_adj(), ShapeError);
}

TEST_CASE("inverse of identity and of a random matrix") {
    RationalMatrix id = RationalMatrix::identity(2);
    RationalMatrix inv = id.inverse();
    CHECK(std::abs(inv.at(0, 0).eval(1.3) - cplx(1.0, 0.0)) < 1e-14);
    CHECK(std::abs(inv.at(0, 1).eval(1.3)) < 1e-14);

    std::mt19937 rng(5u);
    RationalMatrix m = random_matrix(rng, 2);
    RationalMatrix mi = m.inverse();
    int checked = 0;
    for (int attempt = 0; attempt < 32 && checked < 8; ++attempt) {
        cplx s = sample_point(rng);
        try {
            Eigen::MatrixXcd prod = mi.eval(s) * m.eval(s);
            CHECK((prod - Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-8 * std::max(1.0, prod.norm()));
            ++checked;
        } catch (const PoleEvaluation&) {
        }
    }
    CHECK(checked == 8);
}

TEST_CASE("singular rational matrix is rejected") {
    RationalMatrix m(2, 2);
    RationalFunction r(Polynomial({0.0, 1.0}), Polynomial({1.0, 1.0}));
    m.at(0, 0) = r;
    m.at(0, 1) = r;
    m.at(1, 0) = r;
    m.at(1, 1) = r;
    CHECK_THROWS_AS(m.inverse(), SingularMatrix);
}

TEST_CASE("product associativity at sample points") {
    std::mt19937 rng(13u);
    RationalMatrix a = random_matrix(rng, 2);
    RationalMatrix b = random_matrix(rng, 2);
    RationalMatrix c = random_matrix(rng, 2);
    RationalMatrix lhs = (a * b) * c;
    RationalMatrix rhs = a * (b * c);
    for (int k = 0; k < 6; ++k) {
        cplx s = sample_point(rng);
        try {
            Eigen::MatrixXcd l = lhs.eval(s), r = rhs.eval(s);
            CHECK((l - r).norm() < 1e-7 * std::max(1.0, r.norm()));
        } catch (const PoleEvaluation&) {
        }
    }
}

TEST_CASE("common factors cancel in products") {
    // (s+1)/(s+2) * (s+2)/(s+3) == (s+1)/(s+3)
    RationalFunction a(Polynomial({1.0, 1.0}), Polynomial({2.0, 1.0}));
    RationalFunction b(Polynomial({2.0, 1.0}), Polynomial({3.0, 1.0}));
    RationalFunction p = a * b;
    CHECK(p.num().degree() == 1);
    CHECK(p.den().degree() == 1);
    CHECK(std::abs(p.eval(1.0) - cplx(0.5, 0.0)) < 1e-12);
}

TEST_CASE("denominators stay monic") {
    RationalFunction r(Polynomial({1.0}), Polynomial({2.0, 4.0}));
    CHECK(r.den().leading() == doctest::Approx(1.0));
    CHECK(r.num().coeff(0) == doctest::Approx(0.25));
}

TEST_CASE("properness and stability classification") {
    RationalFunction stable(Polynomial({1.0, 1.0}), Polynomial({2.0, 3.0, 1.0}));  // poles -1,-2
    CHECK(stable.is_stable_proper());
    RationalFunction unstable(Polynomial::constant(1.0), Polynomial({-1.0, 1.0}));  // pole +1
    CHECK(!unstable.is_stable_proper());
    RationalFunction improper(Polynomial({0.0, 0.0, 1.0}), Polynomial({1.0, 1.0}));
    CHECK(!improper.is_stable_proper());
    CHECK_THROWS_AS(improper.eval_inf(), DegreeError);
    CHECK(stable.eval_inf() == doctest::Approx(0.0));
}
