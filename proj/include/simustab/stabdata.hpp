#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "simustab/rational.hpp"

namespace simustab {

/// Whether disc interpolation values are the tangential matrices themselves
/// or their principal square roots.
enum class Mode { direct, sqrt };

/// Two coprime factorizations (N0, D0), (N1, D1) of square plants with all
/// entries stable and proper. Validated on construction.
struct PlantPair {
    RationalMatrix N0, D0, N1, D1;
    int m = 0;
};

PlantPair make_plant_pair(RationalMatrix N0, RationalMatrix D0,
                          RationalMatrix N1, RationalMatrix D1);

/// The 2m x 2m block matrix [[N0, N1], [D0, D1]] together with its cached
/// determinant and adjugate.
struct PencilM {
    RationalMatrix M;
    int m = 0;
    RationalFunction det;
    RationalMatrix adj;
};

enum class ConjugateTag { real, pair_lead, pair_follow };

struct UnstableZero {
    std::complex<double> s;
    ConjugateTag tag = ConjugateTag::real;
};

struct NullDirection {
    Eigen::VectorXcd v1, v2;  // top/bottom halves of the unit null vector
};

struct InterpValue {
    Eigen::MatrixXcd M;
    /// Spectrum avoids the closed nonpositive real axis.
    bool feasible = false;
};

struct InterpolationNode {
    std::complex<double> z;
    Eigen::MatrixXcd W;
    int multiplicity = 1;
};

/// Value-side change of coordinates that puts the base node at value I/2:
/// normalized F~ relates to F by F(z) = 2 T F~(b_a(z)) T' + S with
/// b_a(z) = (z - a)/(1 - a z), T T' = sym(W_base), S = skew(W_base).
struct NormalizationRecord {
    double a = 0.0;
    Eigen::MatrixXd T, S;
};

struct DiscData {
    int ell = 0;
    std::vector<InterpolationNode> nodes;  // base node first once normalized
    Mode mode = Mode::direct;
    std::optional<NormalizationRecord> normalization;

    bool is_normalized() const;
    int n() const { return static_cast<int>(nodes.size()) - 1; }
};

struct ZeroTolerances {
    double simplicity = 1e-6;
    double rank_gap = 1e-6;
    double boundary = 1e-9;
    double det_derivative = 1e-8;
};

PencilM build_pencil(const PlantPair& pp);

/// Simple zeros of det(M) in the open right half plane, conjugate tagged,
/// sorted by (Re, Im descending). Throws NonSimpleZero / BoundaryZero.
std::vector<UnstableZero> unstable_zeros(const PencilM& pm,
                                         const ZeroTolerances& tol = {});

/// Unit right null vector of M(s) at a simple unstable zero; the phase is
/// fixed so the largest component is positive real.
NullDirection null_direction(const PencilM& pm, const UnstableZero& z,
                             double rank_gap = 1e-6);

/// Tangential interpolation value: the unique matrix with M v2 = -v1 on
/// span(v2) and alpha on its orthogonal complement.
InterpValue interp_value(const NullDirection& nd, double alpha);

/// Principal matrix square root via the Schur recurrence. Throws
/// BranchCutError when an eigenvalue lies on the closed nonpositive axis.
Eigen::MatrixXcd principal_sqrt(const Eigen::MatrixXcd& x);

/// Cayley map of a right-half-plane point into the open unit disc.
std::complex<double> mobius_to_disc(std::complex<double> s);
/// Disc automorphism (z - a)/(1 - a z).
std::complex<double> blaschke(double a, std::complex<double> z);

/// Map unstable zeros and their (mode-level) values into disc nodes.
/// Verifies conjugate symmetry and positive Hermitian parts.
DiscData to_disc(std::span<const UnstableZero> zeros,
                 std::span<const Eigen::MatrixXcd> values, Mode mode);

/// Move a real node to the origin with value I/2. Without an explicit
/// base_index the real node with smallest |z| is chosen; throws NoRealBase
/// when none exists.
DiscData normalize_data(const DiscData& dd, std::optional<int> base_index = {});

/// Inverse of the value transform: F = 2 T F~ T' + S.
Eigen::MatrixXcd denormalize_value(const NormalizationRecord& rec,
                                   const Eigen::MatrixXcd& w_tilde);

enum class ModeChoice { automatic, direct, sqrt };

/// Everything the interpolation solver needs, extracted from a plant pair.
struct ReducedData {
    PencilM pencil;
    std::vector<UnstableZero> zeros;
    std::vector<Eigen::MatrixXcd> tangential_values;  // the M_i
    DiscData data;        // mode-level values at the mapped nodes
    DiscData normalized;  // base node moved to 0 with value I/2
    Mode mode = Mode::direct;
    bool trivial = false;  // no unstable zeros
};

/// Full reduction: pencil, unstable zeros, conjugate-symmetric tangential
/// values, mode selection (direct when all He(M_i) > 0, square roots
/// otherwise), disc mapping and normalization. With no real node an
/// artificial base at z = 0 with value I/2 is prepended.
ReducedData reduce_plants(const PlantPair& pp, double alpha = 1.0,
                          ModeChoice choice = ModeChoice::automatic,
                          const ZeroTolerances& tol = {});

}  // namespace simustab
