#include "simustab/poly.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "simustab/errors.hpp"

namespace simustab {

using cplx = std::complex<double>;

Polynomial::Polynomial(std::vector<double> coeffs) : coeffs_(std::move(coeffs)) {
    trim();
}

Polynomial Polynomial::constant(double c) {
    return Polynomial(std::vector<double>{c});
}

Polynomial Polynomial::variable() {
    return Polynomial(std::vector<double>{0.0, 1.0});
}

double Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return 0.0;
    return coeffs_[static_cast<std::size_t>(k)];
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

void Polynomial::trim() {
    double m = max_abs_coeff();
    if (m == 0.0) {
        coeffs_.clear();
        return;
    }
    const double drop = kCoeffDrop * m;
    for (double& c : coeffs_)
        if (std::abs(c) < drop) c = 0.0;
    while (!coeffs_.empty() && coeffs_.back() == 0.0) coeffs_.pop_back();
}

std::complex<double> Polynomial::eval(cplx s) const {
    cplx acc(0.0, 0.0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

double Polynomial::eval(double s) const {
    double acc = 0.0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * s + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<double> d(coeffs_.size() - 1);
    for (std::size_t k = 1; k < coeffs_.size(); ++k)
        d[k - 1] = static_cast<double>(k) * coeffs_[k];
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator-() const {
    std::vector<double> c = coeffs_;
    for (double& x : c) x = -x;
    Polynomial p;
    p.coeffs_ = std::move(c);
    return p;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] += b.coeffs_[k];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) {
    std::vector<double> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0.0);
    for (std::size_t k = 0; k < a.coeffs_.size(); ++k) c[k] += a.coeffs_[k];
    for (std::size_t k = 0; k < b.coeffs_.size(); ++k) c[k] -= b.coeffs_[k];
    return Polynomial(std::move(c));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return Polynomial();
    std::vector<double> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i)
        for (std::size_t j = 0; j < b.coeffs_.size(); ++j)
            c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(double c, const Polynomial& p) {
    std::vector<double> out = p.coeffs_;
    for (double& x : out) x *= c;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::from_roots(std::span<const cplx> roots, double leading) {
    std::vector<char> used(roots.size(), 0);
    Polynomial acc = Polynomial::constant(leading);
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const cplx r = roots[i];
        const double pair_tol = 1e-9 * (1.0 + std::abs(r));
        if (std::abs(r.imag()) <= pair_tol) {
            acc = acc * Polynomial({-r.real(), 1.0});
            used[i] = 1;
            continue;
        }
        // find the conjugate partner
        std::size_t best = roots.size();
        double best_d = pair_tol;
        for (std::size_t j = i + 1; j < roots.size(); ++j) {
            if (used[j]) continue;
            double d = std::abs(std::conj(r) - roots[j]);
            if (d <= best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == roots.size())
            throw Error("from_roots: complex roots not conjugate-closed");
        acc = acc * Polynomial({std::norm(r), -2.0 * r.real(), 1.0});
        used[i] = 1;
        used[best] = 1;
    }
    return acc;
}

std::vector<cplx> poly_roots(const Polynomial& p) {
    const int d = p.degree();
    if (d < 1) throw DegreeError("poly_roots: degree must be at least 1");

    std::vector<cplx> roots;
    if (d == 1) {
        roots.push_back(cplx(-p.coeff(0) / p.coeff(1), 0.0));
    } else {
        const double lead = p.leading();
        Eigen::MatrixXd C = Eigen::MatrixXd::Zero(d, d);
        for (int i = 0; i < d; ++i) C(i, d - 1) = -p.coeff(i) / lead;
        for (int i = 0; i + 1 < d; ++i) C(i + 1, i) = 1.0;
        Eigen::EigenSolver<Eigen::MatrixXd> es(C, /*computeEigenvectors=*/false);
        for (int i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
    }

    // one Newton step; real coefficients make the step conjugate-equivariant,
    // so exact conjugate pairs stay exact
    const Polynomial dp = p.derivative();
    for (cplx& r : roots) {
        cplx fr = p.eval(r);
        cplx dfr = dp.eval(r);
        if (std::abs(dfr) > 1e-300) {
            cplx r1 = r - fr / dfr;
            if (std::abs(p.eval(r1)) < std::abs(fr)) r = r1;
        }
    }

    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return roots;
}

}  // namespace simustab
