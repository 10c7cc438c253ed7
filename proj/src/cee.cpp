#include "simustab/cee.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "simustab/errors.hpp"

namespace simustab {

using cplx = std::complex<double>;

CanonicalStructure build_structure(int ell, int n) {
    if (ell < 1 || n < 1) throw Error("build_structure requires ell >= 1 and n >= 1");
    CanonicalStructure cs;
    cs.ell = ell;
    cs.n = n;
    cs.t.assign(ell, n);
    const int N = n * ell;
    cs.H = Eigen::MatrixXd::Zero(ell, N);
    cs.J = Eigen::MatrixXd::Zero(N, N);
    for (int i = 0; i < ell; ++i) {
        cs.H(i, i * n) = 1.0;
        for (int q = 0; q + 1 < n; ++q) cs.J(i * n + q, i * n + q + 1) = 1.0;
    }
    return cs;
}

namespace {

Eigen::MatrixXcd eval_pi(const CanonicalStructure& cs, cplx w) {
    const int N = cs.n * cs.ell;
    Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(cs.ell, N);
    for (int i = 0; i < cs.ell; ++i)
        for (int q = 0; q < cs.n; ++q) pi(i, i * cs.n + q) = std::pow(w, cs.n - 1 - q);
    return pi;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& p) { return 0.5 * (p + p.transpose()); }

}  // namespace

Eigen::MatrixXd DataOperator::apply(const Eigen::MatrixXd& s) const {
    Eigen::VectorXd v = Eigen::Map<const Eigen::VectorXd>(s.data(), s.size());
    Eigen::VectorXd out = U * v;
    return Eigen::Map<const Eigen::MatrixXd>(out.data(), s.rows(), s.cols());
}

DataOperator build_data_operator(const DiscData& dd, const CanonicalStructure& cs) {
    if (!dd.is_normalized())
        throw Error("data operator requires normalized data (base node at 0 with value I/2)");
    if (dd.ell != cs.ell || dd.n() != cs.n)
        throw ShapeError("interpolation data does not match the canonical structure");
    const int ell = cs.ell, n = cs.n, N = n * ell;
    const Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(ell, ell);

    std::vector<cplx> w(n);
    std::vector<Eigen::MatrixXcd> C(n);
    for (int k = 0; k < n; ++k) {
        const InterpolationNode& node = dd.nodes[k + 1];
        if (std::abs(node.z) < 1e-14) throw DegenerateNodeSet("data node coincides with the base");
        w[k] = 1.0 / node.z;
        Eigen::PartialPivLU<Eigen::MatrixXcd> plu(2.0 * node.W + I);
        C[k] = (2.0 * node.W - I) * plu.solve(I);
        if (!C[k].allFinite() ||
            (C[k] * (2.0 * node.W + I) - (2.0 * node.W - I)).norm() > 1e-8 * (1.0 + node.W.norm()))
            throw InternalPositivityError("2W + I is numerically singular");
    }

    Eigen::MatrixXcd V(N, N);
    Eigen::MatrixXcd rhs_u(N, ell);
    for (int k = 0; k < n; ++k) {
        V.block(k * ell, 0, ell, N) = eval_pi(cs, w[k]);
        rhs_u.block(k * ell, 0, ell, ell) = std::pow(w[k], n) * C[k];
    }
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(V);
    if (!lu.isInvertible()) throw DegenerateNodeSet("coincident interpolation nodes");

    DataOperator op;
    Eigen::MatrixXcd uc = lu.solve(rhs_u);
    if (uc.imag().norm() > 1e-9 * (1.0 + uc.real().norm()))
        throw Error("data operator is not real; interpolation data lost conjugate symmetry");
    op.u = uc.real();

    op.U.resize(N * ell, N * ell);
    Eigen::MatrixXcd basis = Eigen::MatrixXcd::Zero(N, ell);
    for (int j = 0; j < N * ell; ++j) {
        basis(j % N, j / N) = 1.0;
        Eigen::MatrixXcd stack(N, ell);
        for (int k = 0; k < n; ++k)
            stack.block(k * ell, 0, ell, ell) = eval_pi(cs, w[k]) * basis * C[k];
        basis(j % N, j / N) = 0.0;
        Eigen::MatrixXcd col = lu.solve(stack);
        if (col.imag().norm() > 1e-9 * (1.0 + col.real().norm()))
            throw Error("data operator is not real; interpolation data lost conjugate symmetry");
        Eigen::MatrixXd col_r = col.real();
        op.U.col(j) = Eigen::Map<const Eigen::VectorXd>(col_r.data(), N * ell);
    }
    return op;
}

CEEProblem make_problem(CanonicalStructure cs, DataOperator op, Eigen::MatrixXd sigma,
                        std::vector<InterpolationNode> nodes) {
    const int N = cs.n * cs.ell;
    if (sigma.rows() != N || sigma.cols() != cs.ell)
        throw ShapeError("Sigma must be (n*ell) x ell");
    CEEProblem prob;
    prob.structure = std::move(cs);
    prob.dataop = std::move(op);
    prob.Sigma = std::move(sigma);
    prob.Gamma = prob.structure.J - prob.Sigma * prob.structure.H;
    prob.nodes = std::move(nodes);
    return prob;
}

CEEProblem make_problem(const DiscData& dd, CanonicalStructure cs, Eigen::MatrixXd sigma) {
    DataOperator op = build_data_operator(dd, cs);
    std::vector<InterpolationNode> nodes(dd.nodes.begin() + 1, dd.nodes.end());
    return make_problem(std::move(cs), std::move(op), std::move(sigma), std::move(nodes));
}

namespace {

Eigen::MatrixXd g_of(const DataOperator& op, const CEEProblem& prob, const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd& H = prob.structure.H;
    return op.u + op.apply(prob.Sigma + prob.Gamma * P * H.transpose());
}

Eigen::MatrixXd rhs_of(const DataOperator& op, const CEEProblem& prob, const Eigen::MatrixXd& P) {
    const Eigen::MatrixXd& H = prob.structure.H;
    const Eigen::MatrixXd& G = prob.Gamma;
    Eigen::MatrixXd g = g_of(op, prob, P);
    return G * (P - P * H.transpose() * H * P) * G.transpose() + g * g.transpose();
}

// Newton on the flattened residual (forward-difference Jacobian), with a
// damped fixed-point fallback.
bool correct(const DataOperator& op, const CEEProblem& prob, Eigen::MatrixXd& P) {
    const int N = static_cast<int>(P.rows());
    const int dim = N * N;
    const double fd_step = 1e-7;

    auto res = [&](const Eigen::MatrixXd& X) -> Eigen::MatrixXd {
        return X - rhs_of(op, prob, X);
    };
    auto converged = [&](const Eigen::MatrixXd& X, const Eigen::MatrixXd& R) {
        return R.norm() <= 1e-12 * (1.0 + X.norm());
    };

    Eigen::MatrixXd X = symmetrize(P);
    for (int iter = 0; iter < 50; ++iter) {
        Eigen::MatrixXd R = res(X);
        if (!R.allFinite()) break;
        if (converged(X, R)) {
            P = X;
            return true;
        }
        Eigen::VectorXd r = Eigen::Map<const Eigen::VectorXd>(R.data(), dim);
        Eigen::MatrixXd jac(dim, dim);
        for (int j = 0; j < dim; ++j) {
            Eigen::MatrixXd xp = X;
            xp(j % N, j / N) += fd_step;
            Eigen::MatrixXd rp = res(xp);
            jac.col(j) = (Eigen::Map<const Eigen::VectorXd>(rp.data(), dim) - r) / fd_step;
        }
        Eigen::VectorXd delta = jac.colPivHouseholderQr().solve(-r);
        if (!delta.allFinite()) break;
        X = symmetrize(X + Eigen::Map<const Eigen::MatrixXd>(delta.data(), N, N));
    }

    X = symmetrize(P);
    for (int iter = 0; iter < 2000; ++iter) {
        Eigen::MatrixXd next = symmetrize(0.5 * X + 0.5 * rhs_of(op, prob, X));
        if (!next.allFinite()) return false;
        X = next;
        if (converged(X, res(X))) {
            P = X;
            return true;
        }
    }
    return false;
}

DataOperator operator_at(const CEEProblem& prob, double tau) {
    if (prob.nodes.empty()) {
        DataOperator op = prob.dataop;
        op.u *= tau;
        op.U *= tau;
        return op;
    }
    const int ell = prob.structure.ell;
    DiscData dd;
    dd.ell = ell;
    dd.mode = Mode::direct;
    const Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(ell, ell);
    dd.nodes.push_back({cplx(0.0, 0.0), half, 1});
    for (const InterpolationNode& node : prob.nodes)
        dd.nodes.push_back({node.z, half + tau * (node.W - half), 1});
    return build_data_operator(dd, prob.structure);
}

}  // namespace

Eigen::MatrixXd cee_residual(const Eigen::MatrixXd& P, const CEEProblem& prob) {
    return P - rhs_of(prob.dataop, prob, P);
}

CEESolution solve_cee(const CEEProblem& prob) {
    const int N = prob.structure.n * prob.structure.ell;
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(N, N);

    double tau = 0.0, step = 0.1;
    int steps = 0;
    while (tau < 1.0 - 1e-15) {
        const double target = std::min(1.0, tau + step);
        DataOperator op = operator_at(prob, target);
        Eigen::MatrixXd trial = P;
        if (correct(op, prob, trial)) {
            P = trial;
            tau = target;
            ++steps;
            step = std::min(0.1, 2.0 * step);
        } else {
            step *= 0.5;
            if (step < 1e-4)
                throw ContinuationFailure("continuation stalled at tau = " + std::to_string(tau));
        }
    }

    CEESolution sol;
    sol.P = symmetrize(P);
    sol.continuation_steps = steps;
    sol.residual_norm = cee_residual(sol.P, prob).norm();
    if (sol.residual_norm > 1e-10 * (1.0 + sol.P.norm()))
        throw ContinuationFailure("converged continuation left a large residual");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(sol.P);
    if (pe.eigenvalues().minCoeff() < -1e-10)
        throw InfeasibleData("solution P is not positive semidefinite");
    const Eigen::MatrixXd& H = prob.structure.H;
    Eigen::MatrixXd hph = symmetrize(H * sol.P * H.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> he(hph);
    if (he.eigenvalues().maxCoeff() >= 1.0 - 1e-9)
        throw InfeasibleData("H P H' reaches the unit bound");

    Eigen::MatrixXd Q = prob.Gamma * sol.P * H.transpose() + prob.Sigma;
    sol.G = prob.dataop.u + prob.dataop.apply(Q);
    sol.A = Q - sol.G;
    sol.B = Q + sol.G;

    Eigen::MatrixXd ir =
        Eigen::MatrixXd::Identity(prob.structure.ell, prob.structure.ell) - hph;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> re(ir);
    sol.R = re.operatorSqrt();

    Eigen::MatrixXd F = prob.structure.J - sol.A * H;
    Eigen::MatrixXd ctrb(N, N * prob.structure.ell);
    Eigen::MatrixXd block = sol.G;
    for (int k = 0; k < N; ++k) {
        ctrb.block(0, k * prob.structure.ell, N, prob.structure.ell) = block;
        block = F * block;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(ctrb);
    sol.controllability_rank = static_cast<int>(lu.rank());
    return sol;
}

Interpolant make_interpolant(CanonicalStructure cs, CEESolution sol,
                             std::optional<NormalizationRecord> rec) {
    Interpolant itp;
    itp.ell = cs.ell;
    itp.structure = std::move(cs);
    itp.solution = std::move(sol);
    itp.normalization = std::move(rec);
    return itp;
}

Interpolant make_constant_interpolant(int ell, std::optional<NormalizationRecord> rec) {
    Interpolant itp;
    itp.ell = ell;
    itp.constant = true;
    itp.normalization = std::move(rec);
    return itp;
}

Eigen::MatrixXcd eval_F_normalized(const Interpolant& itp, cplx z) {
    if (std::abs(z) >= 1.0) throw OutsideDomain("evaluation outside the open unit disc");
    const Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(itp.ell, itp.ell);
    if (itp.constant) return half;
    const int N = itp.structure.n * itp.structure.ell;
    Eigen::MatrixXd fst = itp.structure.J - itp.solution.A * itp.structure.H;
    Eigen::MatrixXcd lhs = Eigen::MatrixXcd::Identity(N, N) - z * fst.cast<cplx>();
    Eigen::MatrixXcd x = lhs.partialPivLu().solve(itp.solution.G.cast<cplx>());
    return half + z * itp.structure.H.cast<cplx>() * x;
}

Eigen::MatrixXcd eval_F(const Interpolant& itp, cplx z) {
    if (std::abs(z) >= 1.0) throw OutsideDomain("evaluation outside the open unit disc");
    if (!itp.normalization) return eval_F_normalized(itp, z);
    const NormalizationRecord& rec = *itp.normalization;
    Eigen::MatrixXcd ft = eval_F_normalized(itp, blaschke(rec.a, z));
    return denormalize_value(rec, ft);
}

SolutionReport check_solution(const Interpolant& itp, const DiscData& dd) {
    SolutionReport rep;
    for (const InterpolationNode& node : dd.nodes) {
        Eigen::MatrixXcd f = eval_F(itp, node.z);
        rep.interp_residual = std::max(rep.interp_residual, (f - node.W).norm());
    }
    double min_eig = std::numeric_limits<double>::infinity();
    for (int k = 0; k < 512; ++k) {
        const double theta = 2.0 * M_PI * k / 512.0;
        Eigen::MatrixXcd f = eval_F(itp, 0.99 * cplx(std::cos(theta), std::sin(theta)));
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(f + f.adjoint());
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    rep.min_herm_eig = min_eig;
    if (!itp.constant) {
        Eigen::MatrixXd fst = itp.structure.J - itp.solution.A * itp.structure.H;
        Eigen::EigenSolver<Eigen::MatrixXd> es(fst, false);
        rep.pole_radius = es.eigenvalues().cwiseAbs().maxCoeff();
    }
    return rep;
}

}  // namespace simustab
