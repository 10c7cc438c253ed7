#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "simustab/stabdata.hpp"

namespace simustab {

/// Observer canonical pair (H, J) with uniform observability indices
/// t_1 = ... = t_ell = n.
struct CanonicalStructure {
    int ell = 0, n = 0;
    std::vector<int> t;
    Eigen::MatrixXd H;  // ell x n*ell
    Eigen::MatrixXd J;  // n*ell x n*ell block shift
};

CanonicalStructure build_structure(int ell, int n);

/// The affine map G = u + U[S] encoding the interpolation conditions:
/// with w_k = 1/z_k and C_k = (2W_k - I)(2W_k + I)^{-1},
///   u    = V^{-1} stack_k(D(w_k) C_k),
///   U[S] = V^{-1} stack_k(Pi(w_k) S C_k),  V = stack_k(Pi(w_k)).
/// Any (A, G) with G = u + U[A + G] interpolates: (1/2)A(w_k)^{-1}B(w_k) = W_k
/// for B = A + 2G.
struct DataOperator {
    Eigen::MatrixXd u;  // n*ell x ell
    Eigen::MatrixXd U;  // (n*ell*ell) x (n*ell*ell), acts on vec(S)
    Eigen::MatrixXd apply(const Eigen::MatrixXd& s) const;
};

DataOperator build_data_operator(const DiscData& dd, const CanonicalStructure& cs);

struct CEEProblem {
    CanonicalStructure structure;
    DataOperator dataop;
    Eigen::MatrixXd Sigma;  // n*ell x ell
    Eigen::MatrixXd Gamma;  // J - Sigma*H
    /// Non-base nodes, kept for the data-deformation continuation path.
    std::vector<InterpolationNode> nodes;
};

CEEProblem make_problem(CanonicalStructure cs, DataOperator op, Eigen::MatrixXd sigma,
                        std::vector<InterpolationNode> nodes = {});
CEEProblem make_problem(const DiscData& dd, CanonicalStructure cs, Eigen::MatrixXd sigma);

/// P - Gamma (P - P H' H P) Gamma' - G(P) G(P)' with G(P) = u + U[Sigma + Gamma P H'].
Eigen::MatrixXd cee_residual(const Eigen::MatrixXd& P, const CEEProblem& prob);

struct CEESolution {
    Eigen::MatrixXd P, A, B, G, R;
    double residual_norm = 0.0;
    int continuation_steps = 0;
    int controllability_rank = 0;
};

/// Homotopy continuation on the interpolation data from the trivial
/// instance (all values I/2, P = 0) to the target, with a Newton corrector
/// and a damped fixed-point fallback.
CEESolution solve_cee(const CEEProblem& prob);

/// Carathéodory interpolant in original disc coordinates. The underlying
/// realization lives in normalized coordinates; evaluation denormalizes
/// through the stored record. `constant` short-circuits the zero- and
/// one-node cases where F~ is identically I/2.
struct Interpolant {
    CanonicalStructure structure;
    CEESolution solution;
    std::optional<NormalizationRecord> normalization;
    bool constant = false;
    int ell = 0;
};

Interpolant make_interpolant(CanonicalStructure cs, CEESolution sol,
                             std::optional<NormalizationRecord> rec);
Interpolant make_constant_interpolant(int ell, std::optional<NormalizationRecord> rec);

/// F at a point of the open unit disc (original coordinates).
Eigen::MatrixXcd eval_F(const Interpolant& itp, std::complex<double> z);
/// F~ in normalized coordinates (F~(0) = I/2).
Eigen::MatrixXcd eval_F_normalized(const Interpolant& itp, std::complex<double> z);

struct SolutionReport {
    double interp_residual = 0.0;  // max_k ||F(z_k) - W_k||_F
    double min_herm_eig = 0.0;     // min over grid of lambda_min(F + F*)
    double pole_radius = 0.0;      // max |eig(J - A H)|
};

/// Diagnostics against the (pre-normalization) interpolation data.
SolutionReport check_solution(const Interpolant& itp, const DiscData& dd);

}  // namespace simustab
