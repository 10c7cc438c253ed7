#pragma once

#include <complex>
#include <span>
#include <vector>

namespace simustab {

/// Dense univariate polynomial with real coefficients in ascending powers.
/// The zero polynomial is the empty coefficient vector. Coefficients whose
/// magnitude falls below kCoeffDrop relative to the largest one are flushed
/// to zero so float noise cannot inflate the degree.
class Polynomial {
public:
    static constexpr double kCoeffDrop = 1e-12;

    Polynomial() = default;
    explicit Polynomial(std::vector<double> coeffs);

    static Polynomial constant(double c);
    static Polynomial variable();  // p(s) = s
    /// leading * prod (s - r_i). Complex roots must come in conjugate pairs;
    /// each pair is multiplied in as a real quadratic factor.
    static Polynomial from_roots(std::span<const std::complex<double>> roots,
                                 double leading = 1.0);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    double leading() const { return coeffs_.empty() ? 0.0 : coeffs_.back(); }
    double coeff(int k) const;
    const std::vector<double>& coeffs() const { return coeffs_; }
    double max_abs_coeff() const;

    std::complex<double> eval(std::complex<double> s) const;
    double eval(double s) const;
    Polynomial derivative() const;

    Polynomial operator-() const;
    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(double c, const Polynomial& p);

private:
    void trim();
    std::vector<double> coeffs_;
};

/// All complex roots of p, via companion-matrix eigenvalues followed by one
/// Newton polishing step. Sorted by (Re, Im). For real coefficients the
/// output is conjugate-closed. Throws DegreeError for degree < 1.
std::vector<std::complex<double>> poly_roots(const Polynomial& p);

}  // namespace simustab
