#include "simustab/synth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "simustab/errors.hpp"

namespace simustab {

using cplx = std::complex<double>;

std::vector<cplx> rhp_samples(int count, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> re(0.2, 6.0), im(-6.0, 6.0);
    std::vector<cplx> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.emplace_back(re(rng), im(rng));
    return out;
}

namespace {

Polynomial binomial_power(double c, int d, bool plus) {
    // (1 +- c s)^d
    Polynomial base({1.0, plus ? c : -c});
    Polynomial acc = Polynomial::constant(1.0);
    for (int k = 0; k < d; ++k) acc = acc * base;
    return acc;
}

// Polynomial matrix in s obtained from the w-polynomial D(w) + Pi(w)X under
// w = (1 + c s)/(1 - c s), cleared by (1 - c s)^n.
RationalMatrix cleared_fraction_factor(const CanonicalStructure& cs, const Eigen::MatrixXd& X,
                                       double c) {
    const int ell = cs.ell, n = cs.n;
    RationalMatrix out(ell, ell);
    for (int i = 0; i < ell; ++i)
        for (int j = 0; j < ell; ++j) {
            // ascending w-coefficients of entry (i, j)
            std::vector<double> wc(n + 1, 0.0);
            wc[n] = (i == j) ? 1.0 : 0.0;
            for (int q = 0; q < n; ++q) wc[n - 1 - q] += X(i * n + q, j);
            Polynomial acc;
            for (int d = 0; d <= n; ++d) {
                if (wc[d] == 0.0) continue;
                acc = acc + wc[d] * (binomial_power(c, d, true) * binomial_power(c, n - d, false));
            }
            out.at(i, j) = RationalFunction(acc, Polynomial::constant(1.0));
        }
    return out;
}

double entry_scale(const RationalMatrix& m, int r, int c, std::span<const cplx> samples) {
    double scale = 0.0;
    for (const cplx& s : samples) {
        try {
            scale = std::max(scale, std::abs(m.at(r, c).eval(s)));
        } catch (const PoleEvaluation&) {
        }
    }
    return scale;
}

}  // namespace

RationalMatrix f_plane(const Interpolant& itp) {
    const int ell = itp.ell;
    RationalMatrix f1(ell, ell);
    if (itp.constant) {
        Eigen::MatrixXcd value = itp.normalization
                                     ? denormalize_value(*itp.normalization,
                                                         0.5 * Eigen::MatrixXcd::Identity(ell, ell))
                                     : 0.5 * Eigen::MatrixXcd::Identity(ell, ell);
        f1 = RationalMatrix::from_real(value.real());
    } else {
        const double a = itp.normalization ? itp.normalization->a : 0.0;
        const double c = (1.0 + a) / (1.0 - a);
        RationalMatrix ahat = cleared_fraction_factor(itp.structure, itp.solution.A, c);
        RationalMatrix bhat = cleared_fraction_factor(itp.structure, itp.solution.B, c);
        RationalMatrix core = ahat.inverse() * bhat;  // = 2 F~_1(s)
        if (itp.normalization) {
            const NormalizationRecord& rec = *itp.normalization;
            f1 = RationalMatrix::from_real(rec.T) * core *
                     RationalMatrix::from_real(rec.T.transpose()) +
                 RationalMatrix::from_real(rec.S);
        } else {
            f1 = 0.5 * core;
        }
    }

    // pointwise agreement with the realization-based evaluator
    for (const cplx& s : rhp_samples(16, 20240613u)) {
        Eigen::MatrixXcd direct = eval_F(itp, mobius_to_disc(s));
        Eigen::MatrixXcd viarat = f1.eval(s);
        if ((direct - viarat).norm() > 1e-8 * (1.0 + direct.norm()))
            throw Error("plant-variable interpolant disagrees with the disc evaluator");
    }
    return f1;
}

DeltaPair delta_pair(const RationalMatrix& f1, Mode mode) {
    if (f1.rows() != f1.cols()) throw ShapeError("interpolant must be square");
    DeltaPair dp;
    dp.mode = mode;
    dp.d0 = RationalMatrix::identity(f1.rows());
    dp.d1 = mode == Mode::sqrt ? f1 * f1 : f1;

    for (int r = 0; r < dp.d1.rows(); ++r)
        for (int c = 0; c < dp.d1.cols(); ++c)
            if (!dp.d1.at(r, c).is_stable_proper())
                throw NotAUnit("Delta1 entry (" + std::to_string(r) + "," + std::to_string(c) +
                               ") is not stable and proper");

    RationalFunction det = dp.d1.det();
    if (det.is_zero()) throw NotAUnit("det(Delta1) vanishes identically");
    if (std::abs(det.eval_inf()) <= 1e-9) throw NotAUnit("det(Delta1) vanishes at infinity");
    for (const cplx& z : det.zeros())
        if (z.real() >= -1e-9)
            throw NotAUnit("det(Delta1) has a zero at Re(s) = " + std::to_string(z.real()));
    return dp;
}

CompensatorFactors compensator(const PencilM& pm, const DeltaPair& dp) {
    const int m = pm.m;
    if (dp.d1.rows() != m) throw ShapeError("Delta pair does not match the pencil size");

    RationalMatrix row(m, 2 * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c) {
            row.at(r, c) = dp.d0.at(r, c);
            row.at(r, m + c) = dp.d1.at(r, c);
        }
    RationalMatrix numer = row * pm.adj;

    // the numerators must vanish at every unstable zero of det(M) before the
    // division can cancel them
    const std::vector<cplx> samples = rhp_samples(8, 911u);
    std::vector<cplx> unstable;
    for (const cplx& z : pm.det.zeros())
        if (z.real() > 1e-9) unstable.push_back(z);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < 2 * m; ++c) {
            const double scale = entry_scale(numer, r, c, samples);
            for (const cplx& z : unstable) {
                const double residual = std::abs(numer.at(r, c).eval(z));
                if (residual > 1e-6 * (1.0 + scale))
                    throw InterpolationMismatch(
                        "vanishing condition fails at s = " + std::to_string(z.real()) + " + " +
                        std::to_string(z.imag()) + "i (residual " + std::to_string(residual) + ")");
            }
        }

    RationalMatrix full(m, 2 * m);
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < 2 * m; ++c) full.at(r, c) = numer.at(r, c) / pm.det;

    CompensatorFactors cf;
    cf.Nc = full.block(0, 0, m, m);
    cf.Dc = full.block(0, m, m, m);

    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            for (const RationalMatrix* part : {&cf.Nc, &cf.Dc}) {
                const RationalFunction& e = part->at(r, c);
                if (!e.is_proper()) cf.proper = false;
                for (const cplx& p : e.poles())
                    if (p.real() >= -1e-9)
                        throw InterpolationMismatch(
                            "unstable factor survived the cancellation at Re(s) = " +
                            std::to_string(p.real()));
            }
    if (!cf.proper)
        throw InterpolationMismatch("compensator factors are not proper");

    // cross-check against the blockwise inverse formula
    for (const cplx& s : samples) {
        try {
            Eigen::MatrixXcd Minv = pm.M.eval(s).inverse();
            Eigen::MatrixXcd m11 = Minv.topLeftCorner(m, m), m12 = Minv.topRightCorner(m, m);
            Eigen::MatrixXcd m21 = Minv.bottomLeftCorner(m, m), m22 = Minv.bottomRightCorner(m, m);
            Eigen::MatrixXcd d1 = dp.d1.eval(s);
            Eigen::MatrixXcd k_block = (m12 + d1 * m22).inverse() * (m11 + d1 * m21);
            Eigen::MatrixXcd k_fact = cf.Dc.eval(s).inverse() * cf.Nc.eval(s);
            if ((k_block - k_fact).norm() > 1e-6 * (1.0 + k_block.norm()))
                throw InterpolationMismatch("compensator formulas disagree at a sample point");
        } catch (const PoleEvaluation&) {
        }
    }
    return cf;
}

FamilyInstance lambda_family(const PlantPair& pp, const DeltaPair& dp, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw RangeError("lambda outside [0, 1]");
    FamilyInstance fi;
    fi.N = lambda * pp.N1 + (1.0 - lambda) * pp.N0;
    fi.D = lambda * pp.D1 + (1.0 - lambda) * pp.D0;
    fi.Delta = lambda * dp.d1 + (1.0 - lambda) * dp.d0;
    return fi;
}

std::vector<cplx> closed_loop_poles(const DeltaPair& dp, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw RangeError("lambda outside [0, 1]");
    RationalMatrix delta = lambda * dp.d1 + (1.0 - lambda) * dp.d0;
    RationalFunction det = delta.det();
    if (det.is_zero()) throw DegenerateFamily("det(Delta_lambda) vanishes identically");
    return det.zeros();
}

std::vector<cplx> open_loop_poles(const PlantPair& pp, double lambda) {
    if (lambda < 0.0 || lambda > 1.0) throw RangeError("lambda outside [0, 1]");
    RationalMatrix d = lambda * pp.D1 + (1.0 - lambda) * pp.D0;
    RationalFunction det = d.det();
    if (det.is_zero()) throw DegenerateFamily("det(D_lambda) vanishes identically");
    return det.zeros();
}

namespace {

SweepEntry make_entry(double lambda, std::vector<cplx> poles) {
    std::sort(poles.begin(), poles.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    SweepEntry e;
    e.lambda = lambda;
    e.poles_s = std::move(poles);
    e.max_re = -std::numeric_limits<double>::infinity();
    for (const cplx& p : e.poles_s) {
        e.max_re = std::max(e.max_re, p.real());
        if (std::abs(p.real()) <= 1e-6) e.marginal = true;
        e.poles_disc.push_back((1.0 + p) / (1.0 - p));
    }
    e.stable = e.max_re < -1e-6;
    return e;
}

}  // namespace

SweepReport sweep(const PlantPair& pp, const DeltaPair& dp, const std::vector<double>& grid) {
    SweepReport rep;
    rep.all_stable = true;
    for (double lambda : grid) {
        rep.entries.push_back(make_entry(lambda, closed_loop_poles(dp, lambda)));
        rep.all_stable = rep.all_stable && rep.entries.back().stable;
    }
    return rep;
}

SweepReport open_loop_sweep(const PlantPair& pp, const std::vector<double>& grid) {
    SweepReport rep;
    rep.all_stable = true;
    for (double lambda : grid) {
        rep.entries.push_back(make_entry(lambda, open_loop_poles(pp, lambda)));
        rep.all_stable = rep.all_stable && rep.entries.back().stable;
    }
    return rep;
}

AxisCheckReport eigen_axis_check(const DeltaPair& dp, double omega, int density) {
    if (omega <= 0.0) omega = 10.0;
    AxisCheckReport rep;
    rep.omega = omega;
    rep.min_distance = std::numeric_limits<double>::infinity();

    auto probe = [&](cplx s) {
        Eigen::MatrixXcd ratio;
        try {
            ratio = dp.d0.eval(s).inverse() * dp.d1.eval(s);
        } catch (const PoleEvaluation&) {
            return;
        }
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(ratio, false);
        for (int i = 0; i < ratio.rows(); ++i) {
            const cplx lam = es.eigenvalues()(i);
            const double dist = lam.real() <= 0.0 ? std::abs(lam.imag()) : std::abs(lam);
            if (dist < rep.min_distance) {
                rep.min_distance = dist;
                rep.argmin_s = s;
            }
        }
        ++rep.samples;
    };

    for (int k = 0; k < density; ++k)
        probe(cplx(0.0, -omega + 2.0 * omega * k / (density - 1)));
    for (int k = 0; k < density; ++k)
        probe(omega * std::exp(cplx(0.0, -M_PI / 2.0 + M_PI * k / (density - 1))));
    for (int j = 0; j < 40; ++j)
        for (int k = 0; k < 40; ++k)
            probe(cplx(omega * (j + 1) / 40.0, -omega + 2.0 * omega * k / 39.0));
    return rep;
}

double verify_bezout(const PlantPair& pp, const CompensatorFactors& cf, const DeltaPair& dp,
                     double lambda, std::span<const cplx> samples) {
    if (lambda < 0.0 || lambda > 1.0) throw RangeError("lambda outside [0, 1]");
    double worst = 0.0;
    for (const cplx& s : samples) {
        try {
            Eigen::MatrixXcd nl = lambda * pp.N1.eval(s) + (1.0 - lambda) * pp.N0.eval(s);
            Eigen::MatrixXcd dl = lambda * pp.D1.eval(s) + (1.0 - lambda) * pp.D0.eval(s);
            Eigen::MatrixXcd delta = lambda * dp.d1.eval(s) + (1.0 - lambda) * dp.d0.eval(s);
            Eigen::MatrixXcd r = cf.Nc.eval(s) * nl + cf.Dc.eval(s) * dl - delta;
            worst = std::max(worst, r.norm());
        } catch (const PoleEvaluation&) {
        }
    }
    return worst;
}

}  // namespace simustab
