#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <complex>
#include <random>

#include "simustab/errors.hpp"
#include "simustab/fixtures.hpp"
#include "simustab/synth.hpp"

using namespace simustab;
using cplx = std::complex<double>;

namespace {

struct Solved {
    ReducedData rd;
    CanonicalStructure cs;
    CEEProblem prob;
    Interpolant itp;
    RationalMatrix f1;
    DeltaPair dp;
    CompensatorFactors cf;
};

Solved solve_pipeline(const PlantPair& pp, const Eigen::MatrixXd& sigma, ModeChoice mc) {
    Solved s;
    s.rd = reduce_plants(pp, 1.0, mc);
    s.cs = build_structure(s.rd.normalized.ell, s.rd.normalized.n());
    s.prob = make_problem(s.rd.normalized, s.cs, sigma);
    s.itp = make_interpolant(s.cs, solve_cee(s.prob), s.rd.normalized.normalization);
    s.f1 = f_plane(s.itp);
    s.dp = delta_pair(s.f1, s.rd.mode);
    s.cf = compensator(s.rd.pencil, s.dp);
    return s;
}

const Solved& example1() {
    static Solved s = solve_pipeline(example1_plants(), *sigma_preset("example1"),
                                     ModeChoice::automatic);
    return s;
}

const Solved& example2() {
    static Solved s = solve_pipeline(example2_plants(), *sigma_preset("example2"),
                                     ModeChoice::sqrt);
    return s;
}

std::vector<double> unit_grid() {
    std::vector<double> g;
    for (int i = 0; i <= 10; ++i) g.push_back(i / 10.0);
    return g;
}

DeltaPair identity_pair() {
    DeltaPair dp;
    dp.d0 = RationalMatrix::identity(2);
    dp.d1 = RationalMatrix::identity(2);
    dp.mode = Mode::direct;
    return dp;
}

}  // namespace

TEST_CASE("constant interpolants stay constant in the plant variable") {
    Interpolant half = make_constant_interpolant(2, std::nullopt);
    RationalMatrix f1 = f_plane(half);
    for (cplx s : rhp_samples(4, 3u))
        CHECK((f1.eval(s) - 0.5 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("scalar fixture maps through the Cayley substitution") {
    DiscData dd;
    dd.ell = 1;
    dd.mode = Mode::direct;
    dd.nodes.push_back({cplx(0, 0), Eigen::MatrixXcd::Constant(1, 1, 0.5), 1});
    dd.nodes.push_back({cplx(0.5, 0), Eigen::MatrixXcd::Constant(1, 1, 1.0), 1});
    CanonicalStructure cs = build_structure(1, 1);
    Interpolant itp = make_interpolant(
        cs, solve_cee(make_problem(dd, cs, Eigen::MatrixXd::Zero(1, 1))), std::nullopt);
    RationalMatrix f1 = f_plane(itp);
    // z = 0.5 corresponds to s = 1/3
    CHECK(std::abs(f1.eval(cplx(1.0 / 3.0, 0))(0, 0) - cplx(1.0, 0.0)) < 1e-10);
    CHECK(std::abs(f1.eval(cplx(1.0, 0))(0, 0) - cplx(0.5, 0.0)) < 1e-10);
}

TEST_CASE("example 2 interpolant has degree-4 denominators") {
    const Solved& s = example2();
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) CHECK(s.f1.at(r, c).den().degree() == 4);
}

TEST_CASE("delta pair of the constant half interpolant") {
    RationalMatrix half = RationalMatrix::from_real(0.5 * Eigen::MatrixXd::Identity(2, 2));
    DeltaPair dp = delta_pair(half, Mode::sqrt);
    for (cplx s : rhp_samples(3, 5u))
        CHECK((dp.d1.eval(s) - 0.25 * Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);
}

TEST_CASE("example 1 delta factor is a unit") {
    const Solved& s = example1();
    RationalFunction det = s.dp.d1.det();
    CHECK(std::abs(det.eval_inf()) > 1e-9);
    for (const cplx& z : det.zeros()) CHECK(z.real() < -1e-9);
}

TEST_CASE("random positive-real interpolants give axis-avoiding delta factors") {
    std::mt19937 rng(29u);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int trial = 0; trial < 5; ++trial) {
        Eigen::MatrixXd base(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) base(i, j) = g(rng);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (base + base.transpose()));
        base += (std::abs(es.eigenvalues().minCoeff()) + 1.0) * Eigen::MatrixXd::Identity(2, 2);
        // strictly proper stable perturbation small enough to keep He > 0
        Eigen::MatrixXd pert(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) pert(i, j) = 0.2 * g(rng);
        RationalMatrix f1(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                RationalFunction entry = RationalFunction::constant(base(i, j)) +
                                         RationalFunction(Polynomial::constant(pert(i, j)),
                                                          Polynomial({1.0, 1.0}));
                f1.at(i, j) = entry;
            }
        DeltaPair dp = delta_pair(f1, Mode::sqrt);
        std::uniform_real_distribution<double> re(0.01, 20.0), im(-20.0, 20.0);
        for (int k = 0; k < 200; ++k) {
            cplx s(re(rng), im(rng));
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es2(dp.d1.eval(s), false);
            for (int q = 0; q < 2; ++q) {
                cplx lam = es2.eigenvalues()(q);
                double dist = lam.real() <= 0.0 ? std::abs(lam.imag()) : std::abs(lam);
                CHECK(dist > 0.0);
            }
        }
    }
}

TEST_CASE("compensator of a constant pencil is constant") {
    RationalMatrix I2 = RationalMatrix::identity(2);
    PlantPair pp = make_plant_pair(I2, I2, I2, 2.0 * I2);
    PencilM pm = build_pencil(pp);
    DeltaPair dp = identity_pair();
    CompensatorFactors cf = compensator(pm, dp);
    CHECK(cf.proper);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c) {
            CHECK(cf.Nc.at(r, c).num().degree() <= 0);
            CHECK(cf.Dc.at(r, c).num().degree() <= 0);
        }
    CHECK(verify_bezout(pp, cf, dp, 0.5, rhp_samples(6, 8u)) < 1e-12);
}

TEST_CASE("example 1 compensator is stable and proper") {
    const Solved& s = example1();
    CHECK(s.cf.proper);
    for (int r = 0; r < 2; ++r)
        for (int c = 0; c < 2; ++c)
            for (const RationalMatrix* part : {&s.cf.Nc, &s.cf.Dc})
                CHECK(part->at(r, c).is_stable_proper());
}

TEST_CASE("both compensator formulas agree pointwise") {
    for (const Solved* s : {&example1(), &example2()}) {
        const int m = 2;
        for (const cplx& pt : rhp_samples(8, 77u)) {
            Eigen::MatrixXcd minv = s->rd.pencil.M.eval(pt).inverse();
            Eigen::MatrixXcd d1 = s->dp.d1.eval(pt);
            Eigen::MatrixXcd k_block = (minv.topRightCorner(m, m) + d1 * minv.bottomRightCorner(m, m))
                                           .inverse() *
                                       (minv.topLeftCorner(m, m) + d1 * minv.bottomLeftCorner(m, m));
            Eigen::MatrixXcd k_fact = s->cf.Dc.eval(pt).inverse() * s->cf.Nc.eval(pt);
            CHECK((k_block - k_fact).norm() < 1e-6 * (1.0 + k_block.norm()));
        }
    }
}

TEST_CASE("lambda family endpoints and midpoint") {
    PlantPair pp = example1_plants();
    DeltaPair dp = identity_pair();
    FamilyInstance at0 = lambda_family(pp, dp, 0.0);
    FamilyInstance at1 = lambda_family(pp, dp, 1.0);
    FamilyInstance mid = lambda_family(pp, dp, 0.5);
    cplx s(1.0, 0.5);
    CHECK((at0.N.eval(s) - pp.N0.eval(s)).norm() < 1e-14);
    CHECK((at1.N.eval(s) - pp.N1.eval(s)).norm() < 1e-14);
    CHECK((at0.D.eval(s) - pp.D0.eval(s)).norm() < 1e-14);
    CHECK((at1.D.eval(s) - pp.D1.eval(s)).norm() < 1e-14);
    Eigen::MatrixXcd expect = 0.5 * (pp.N0.eval(s) + pp.N1.eval(s));
    CHECK((mid.N.eval(s) - expect).norm() < 1e-13);
    CHECK_THROWS_AS(lambda_family(pp, dp, 1.5), RangeError);
}

TEST_CASE("identity delta pair has no closed-loop poles") {
    CHECK(closed_loop_poles(identity_pair(), 0.3).empty());
    SweepReport rep = sweep(example1_plants(), identity_pair(), unit_grid());
    CHECK(rep.all_stable);
    for (const SweepEntry& e : rep.entries) CHECK(e.poles_s.empty());
}

TEST_CASE("example 1 family is unstable before and stable after compensation") {
    const Solved& s = example1();
    SweepReport before = open_loop_sweep(example1_plants(), unit_grid());
    CHECK(!before.all_stable);
    bool any_unstable = false;
    for (const SweepEntry& e : before.entries)
        for (const cplx& p : e.poles_s)
            if (p.real() > 0.0) any_unstable = true;
    CHECK(any_unstable);

    SweepReport after = sweep(example1_plants(), s.dp, unit_grid());
    CHECK(after.all_stable);
    for (const SweepEntry& e : after.entries) CHECK(e.max_re < -1e-6);
}

TEST_CASE("example 2 family is stable after compensation") {
    const Solved& s = example2();
    SweepReport after = sweep(example2_plants(), s.dp, unit_grid());
    CHECK(after.all_stable);
}

TEST_CASE("mapped poles agree with the half-plane verdict") {
    const Solved& s = example1();
    SweepReport before = open_loop_sweep(example1_plants(), unit_grid());
    SweepReport after = sweep(example1_plants(), s.dp, unit_grid());
    for (const SweepReport* rep : {&before, &after})
        for (const SweepEntry& e : rep->entries)
            for (std::size_t i = 0; i < e.poles_s.size(); ++i) {
                bool left = e.poles_s[i].real() < 0.0;
                bool inside = std::abs(e.poles_disc[i]) < 1.0;
                CHECK(left == inside);
            }
}

TEST_CASE("eigenvalue axis check") {
    DeltaPair quarter;
    quarter.d0 = RationalMatrix::identity(2);
    quarter.d1 = RationalMatrix::from_real(0.25 * Eigen::MatrixXd::Identity(2, 2));
    quarter.mode = Mode::sqrt;
    AxisCheckReport rep = eigen_axis_check(quarter, 5.0, 50);
    CHECK(rep.min_distance == doctest::Approx(0.25).epsilon(1e-12));

    const Solved& s = example1();
    double omega = 10.0 * 12.25;
    AxisCheckReport ex1 = eigen_axis_check(s.dp, omega, 100);
    CHECK(ex1.min_distance > 0.0);

    DeltaPair bad;
    bad.d0 = RationalMatrix::identity(2);
    Eigen::MatrixXd neg(2, 2);
    neg << -1.0, 0.0, 0.0, 1.0;
    bad.d1 = RationalMatrix::from_real(neg);
    bad.mode = Mode::direct;
    AxisCheckReport flagged = eigen_axis_check(bad, 5.0, 50);
    CHECK(flagged.min_distance == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("bezout residual is small across lambda") {
    const Solved& s = example1();
    std::vector<cplx> samples = rhp_samples(8, 2024u);
    double at0 = verify_bezout(example1_plants(), s.cf, s.dp, 0.0, samples);
    double at1 = verify_bezout(example1_plants(), s.cf, s.dp, 1.0, samples);
    double mid = verify_bezout(example1_plants(), s.cf, s.dp, 0.37, samples);
    CHECK(at0 < 1e-6);
    CHECK(at1 < 1e-6);
    CHECK(mid < 1e-6);

    // affine identity: interior residuals are controlled by the endpoints
    std::mt19937 rng(55u);
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    double bound = 1.5 * std::max(at0, at1) + 1e-12;
    for (int k = 0; k < 10; ++k)
        CHECK(verify_bezout(example1_plants(), s.cf, s.dp, dist(rng), samples) <= bound);
}

TEST_CASE("square roots keep the delta spectrum off the cut") {
    const Solved& s = example2();
    std::mt19937 rng(31u);
    std::uniform_real_distribution<double> re(0.05, 40.0), im(-40.0, 40.0);
    for (int k = 0; k < 200; ++k) {
        cplx pt(re(rng), im(rng));
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ef(s.f1.eval(pt), false);
        bool rhp = true;
        for (int q = 0; q < 2; ++q)
            if (ef.eigenvalues()(q).real() <= 0.0) rhp = false;
        if (!rhp) continue;
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ed(s.dp.d1.eval(pt), false);
        for (int q = 0; q < 2; ++q) {
            cplx lam = ed.eigenvalues()(q);
            double dist = lam.real() <= 0.0 ? std::abs(lam.imag()) : std::abs(lam);
            CHECK(dist > 0.0);
        }
    }
}
