#pragma once

#include <complex>
#include <vector>

#include "simustab/cee.hpp"
#include "simustab/rational.hpp"
#include "simustab/stabdata.hpp"

namespace simustab {

/// Stable factor pair with unit-determinant second factor; Delta0 is kept at
/// the identity, Delta1 carries the interpolant (squared in sqrt mode).
struct DeltaPair {
    RationalMatrix d0, d1;
    Mode mode = Mode::direct;
};

struct CompensatorFactors {
    RationalMatrix Nc, Dc;
    bool proper = true;
};

struct FamilyInstance {
    RationalMatrix N, D, Delta;
};

struct SweepEntry {
    double lambda = 0.0;
    std::vector<std::complex<double>> poles_s;
    std::vector<std::complex<double>> poles_disc;  // z = (1+s)/(1-s)
    double max_re = 0.0;
    bool stable = false;
    bool marginal = false;
};

struct SweepReport {
    std::vector<SweepEntry> entries;
    bool all_stable = false;
};

struct AxisCheckReport {
    double min_distance = 0.0;
    std::complex<double> argmin_s;
    int samples = 0;
    double omega = 0.0;
};

/// The interpolant as a rational matrix in the plant variable:
/// F1(s) = F((1-s)/(1+s)), built from the normalized matrix fraction and the
/// stored normalization. Cross-checked pointwise against eval_F.
RationalMatrix f_plane(const Interpolant& itp);

/// Delta0 = I, Delta1 = F1 (direct) or F1^2 (sqrt); verifies det(Delta1) is a
/// unit, otherwise throws NotAUnit.
DeltaPair delta_pair(const RationalMatrix& f1, Mode mode);

/// [Nc Dc] = [Delta0 Delta1] Adj(M) / det(M), with det(M)'s unstable factors
/// cancelled. Throws InterpolationMismatch when the cancellation residual is
/// too large or an unstable/improper factor survives.
CompensatorFactors compensator(const PencilM& pm, const DeltaPair& dp);

/// Convex combinations N_lambda, D_lambda, Delta_lambda.
FamilyInstance lambda_family(const PlantPair& pp, const DeltaPair& dp, double lambda);

/// Roots of the numerator of det(Delta_lambda).
std::vector<std::complex<double>> closed_loop_poles(const DeltaPair& dp, double lambda);
/// Roots of the numerator of det(D_lambda) (the family before compensation).
std::vector<std::complex<double>> open_loop_poles(const PlantPair& pp, double lambda);

SweepReport sweep(const PlantPair& pp, const DeltaPair& dp, const std::vector<double>& grid);
/// Pole sweep of the uncompensated family, same report shape.
SweepReport open_loop_sweep(const PlantPair& pp, const std::vector<double>& grid);

/// Samples eigenvalues of Delta0^{-1} Delta1 over the boundary contour of
/// radius omega plus a 40x40 interior grid and reports the minimum distance
/// to the closed nonpositive real axis.
AxisCheckReport eigen_axis_check(const DeltaPair& dp, double omega, int density = 200);

/// max_j || Nc N_lambda + Dc D_lambda - Delta_lambda ||_F at the samples.
double verify_bezout(const PlantPair& pp, const CompensatorFactors& cf, const DeltaPair& dp,
                     double lambda, std::span<const std::complex<double>> samples);

/// Deterministic right-half-plane sample points for pointwise checks.
std::vector<std::complex<double>> rhp_samples(int count, unsigned seed);

}  // namespace simustab
