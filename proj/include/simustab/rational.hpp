#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <utility>
#include <vector>

#include "simustab/poly.hpp"

namespace simustab {

namespace detail {
/// One representative of a conjugate-closed root multiset: a real root, or a
/// complex root with Im > 0 standing for itself and its conjugate.
struct RootRep {
    std::complex<double> value;
    bool pair = false;
};
}  // namespace detail

/// Ratio of real polynomials with a monic denominator. Products, quotients
/// and sums cancel approximate common num/den roots (paired within
/// kCancelPair absolute) so that exact algebraic cancellations survive
/// floating point; fractions built directly from user polynomials are kept
/// verbatim apart from the monic scaling. Root multisets are carried through
/// arithmetic at the factor level, so repeated factors created by products
/// are never re-extracted from ill-conditioned coefficient arrays.
class RationalFunction {
public:
    static constexpr double kCancelPair = 1e-6;

    RationalFunction();  // zero
    RationalFunction(Polynomial num, Polynomial den, bool cancel = false);
    static RationalFunction constant(double c);
    static RationalFunction variable();  // s

    const Polynomial& num() const { return num_; }
    const Polynomial& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_constant() const { return num_.degree() <= 0 && den_.degree() == 0; }
    bool is_proper() const { return num_.degree() <= den_.degree(); }

    std::complex<double> eval(std::complex<double> s) const;
    /// Value at s = infinity; throws DegreeError when improper.
    double eval_inf() const;
    /// Roots of the denominator (empty for constant denominator).
    std::vector<std::complex<double>> poles() const;
    /// Roots of the numerator (empty for constant/zero numerator).
    std::vector<std::complex<double>> zeros() const;
    /// Proper with all poles strictly left of -axis_tol.
    bool is_stable_proper(double axis_tol = 1e-9) const;

    RationalFunction operator-() const;
    friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
    friend RationalFunction operator*(double c, const RationalFunction& r);

private:
    void normalize(bool cancel);
    const std::vector<detail::RootRep>& num_reps() const;
    const std::vector<detail::RootRep>& den_reps() const;
    void set_num_reps(std::vector<detail::RootRep> reps);
    void set_den_reps(std::vector<detail::RootRep> reps);

    Polynomial num_, den_;
    mutable std::optional<std::vector<detail::RootRep>> num_reps_, den_reps_;
};

/// Rectangular matrix of rational functions. Shapes are validated on every
/// operation; evaluation returns a dense complex matrix.
class RationalMatrix {
public:
    RationalMatrix() : rows_(0), cols_(0) {}
    RationalMatrix(int rows, int cols);

    static RationalMatrix identity(int n);
    static RationalMatrix zero(int rows, int cols) { return RationalMatrix(rows, cols); }
    static RationalMatrix from_real(const Eigen::MatrixXd& m);
    static RationalMatrix block2x2(const RationalMatrix& a, const RationalMatrix& b,
                                   const RationalMatrix& c, const RationalMatrix& d);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    RationalFunction& at(int r, int c);
    const RationalFunction& at(int r, int c) const;
    RationalMatrix block(int r0, int c0, int rows, int cols) const;
    RationalMatrix transpose() const;

    Eigen::MatrixXcd eval(std::complex<double> s) const;
    Eigen::MatrixXd eval_inf() const;

    friend RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b);
    friend RationalMatrix operator*(double c, const RationalMatrix& m);
    friend RationalMatrix operator*(const RationalFunction& f, const RationalMatrix& m);

    /// Determinant and adjugate by cofactor expansion; the pair satisfies
    /// R*adj = det*I, re-verified at 8 sample points. Throws ShapeError for
    /// non-square input.
    std::pair<RationalFunction, RationalMatrix> det_adj() const;
    RationalFunction det() const;
    /// adj/det; throws SingularMatrix when det is identically zero.
    RationalMatrix inverse() const;

private:
    RationalFunction minor_det(const std::vector<int>& rows, const std::vector<int>& cols) const;
    int rows_, cols_;
    std::vector<RationalFunction> entries_;  // row-major
};

}  // namespace simustab
