#include "simustab/rational.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <cstdio>
#include <cstdlib>

#include "simustab/errors.hpp"

namespace simustab {

using cplx = std::complex<double>;
using detail::RootRep;

namespace {

std::vector<RootRep> group_conjugates(const std::vector<cplx>& roots) {
    std::vector<char> used(roots.size(), 0);
    std::vector<RootRep> reps;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        if (used[i]) continue;
        const cplx r = roots[i];
        const double tol = 1e-8 * (1.0 + std::abs(r));
        if (std::abs(r.imag()) <= tol) {
            reps.push_back({cplx(r.real(), 0.0), false});
            used[i] = 1;
            continue;
        }
        std::size_t best = roots.size();
        double best_d = tol;
        for (std::size_t j = 0; j < roots.size(); ++j) {
            if (j == i || used[j]) continue;
            double d = std::abs(std::conj(r) - roots[j]);
            if (d <= best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best == roots.size()) throw Error("root list not conjugate-closed");
        reps.push_back({r.imag() > 0 ? r : std::conj(r), true});
        used[i] = 1;
        used[best] = 1;
    }
    return reps;
}

std::vector<RootRep> poly_reps(const Polynomial& p) {
    if (p.degree() < 1) return {};
    return group_conjugates(poly_roots(p));
}

int rep_count(const std::vector<RootRep>& reps) {
    int n = 0;
    for (const RootRep& r : reps) n += r.pair ? 2 : 1;
    return n;
}

Polynomial rebuild(const std::vector<RootRep>& reps, double leading) {
    std::vector<cplx> roots;
    for (const RootRep& r : reps) {
        roots.push_back(r.value);
        if (r.pair) roots.push_back(std::conj(r.value));
    }
    return Polynomial::from_roots(roots, leading);
}

void append(std::vector<RootRep>& dst, const std::vector<RootRep>& src) {
    dst.insert(dst.end(), src.begin(), src.end());
}

// Remove nearest matching representatives (same type, within tol) from both
// lists. Returns true when anything was removed.
bool pair_cancel(std::vector<RootRep>& num, std::vector<RootRep>& den, double tol) {
    bool any = false;
    for (std::size_t i = 0; i < num.size();) {
        std::size_t best = den.size();
        double best_d = tol;
        for (std::size_t j = 0; j < den.size(); ++j) {
            if (den[j].pair != num[i].pair) continue;
            double d = std::abs(num[i].value - den[j].value);
            if (d <= best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best != den.size()) {
            den.erase(den.begin() + static_cast<std::ptrdiff_t>(best));
            num.erase(num.begin() + static_cast<std::ptrdiff_t>(i));
            any = true;
        } else {
            ++i;
        }
    }
    return any;
}

// Move the shared part of two denominators into `g`, averaging the paired
// root estimates.
bool extract_shared(std::vector<RootRep>& a, std::vector<RootRep>& b,
                    std::vector<RootRep>& g, double tol) {
    bool any = false;
    for (std::size_t i = 0; i < a.size();) {
        std::size_t best = b.size();
        double best_d = tol;
        for (std::size_t j = 0; j < b.size(); ++j) {
            if (b[j].pair != a[i].pair) continue;
            double d = std::abs(a[i].value - b[j].value);
            if (d <= best_d) {
                best_d = d;
                best = j;
            }
        }
        if (best != b.size()) {
            g.push_back({0.5 * (a[i].value + b[best].value), a[i].pair});
            a.erase(a.begin() + static_cast<std::ptrdiff_t>(i));
            b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
            any = true;
        } else {
            ++i;
        }
    }
    return any;
}

}  // namespace

RationalFunction::RationalFunction() : num_(), den_(Polynomial::constant(1.0)) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den, bool cancel)
    : num_(std::move(num)), den_(std::move(den)) {
    normalize(cancel);
}

RationalFunction RationalFunction::constant(double c) {
    return RationalFunction(Polynomial::constant(c), Polynomial::constant(1.0));
}

RationalFunction RationalFunction::variable() {
    return RationalFunction(Polynomial::variable(), Polynomial::constant(1.0));
}

const std::vector<RootRep>& RationalFunction::num_reps() const {
    if (!num_reps_) num_reps_ = poly_reps(num_);
    return *num_reps_;
}

const std::vector<RootRep>& RationalFunction::den_reps() const {
    if (!den_reps_) den_reps_ = poly_reps(den_);
    return *den_reps_;
}

void RationalFunction::set_num_reps(std::vector<RootRep> reps) {
    if (rep_count(reps) == std::max(num_.degree(), 0))
        num_reps_ = std::move(reps);
    else
        num_reps_.reset();
}

void RationalFunction::set_den_reps(std::vector<RootRep> reps) {
    if (rep_count(reps) == std::max(den_.degree(), 0))
        den_reps_ = std::move(reps);
    else
        den_reps_.reset();
}

void RationalFunction::normalize(bool cancel) {
    if (den_.is_zero()) throw Error("rational function with zero denominator");
    if (num_.is_zero()) {
        den_ = Polynomial::constant(1.0);
        return;
    }
    if (cancel && num_.degree() >= 1 && den_.degree() >= 1) {
        auto rn = poly_reps(num_);
        auto rd = poly_reps(den_);
        if (pair_cancel(rn, rd, kCancelPair)) {
            num_ = rebuild(rn, num_.leading());
            den_ = rebuild(rd, den_.leading());
        }
        num_reps_ = std::move(rn);
        den_reps_ = std::move(rd);
    }
    const double lead = den_.leading();
    num_ = (1.0 / lead) * num_;
    den_ = (1.0 / lead) * den_;
}

std::complex<double> RationalFunction::eval(cplx s) const {
    const cplx dv = den_.eval(s);
    const double scale = std::pow(std::max(1.0, std::abs(s)), den_.degree());
    if (std::abs(dv) < 1e-10 * scale)
        throw PoleEvaluation("evaluation at or near a pole");
    return num_.eval(s) / dv;
}

double RationalFunction::eval_inf() const {
    if (num_.degree() > den_.degree())
        throw DegreeError("value at infinity of an improper rational function");
    if (num_.degree() < den_.degree()) return 0.0;
    return num_.leading() / den_.leading();
}

std::vector<cplx> RationalFunction::poles() const {
    std::vector<cplx> out;
    for (const RootRep& r : den_reps()) {
        out.push_back(r.value);
        if (r.pair) out.push_back(std::conj(r.value));
    }
    return out;
}

std::vector<cplx> RationalFunction::zeros() const {
    if (num_.degree() < 1) return {};
    std::vector<cplx> out;
    for (const RootRep& r : num_reps()) {
        out.push_back(r.value);
        if (r.pair) out.push_back(std::conj(r.value));
    }
    return out;
}

bool RationalFunction::is_stable_proper(double axis_tol) const {
    if (!is_proper()) return false;
    for (const cplx& p : poles())
        if (p.real() >= -axis_tol) return false;
    return true;
}

RationalFunction RationalFunction::operator-() const {
    RationalFunction r;
    r.num_ = -num_;
    r.den_ = den_;
    r.num_reps_ = num_reps_;
    r.den_reps_ = den_reps_;
    return r;
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero()) return b;
    if (b.is_zero()) return a;
    if (a.is_constant() && b.is_constant())
        return RationalFunction::constant(a.num_.coeff(0) + b.num_.coeff(0));
    if (a.den_.degree() == 0 && b.den_.degree() == 0)
        return RationalFunction(a.num_ + b.num_, Polynomial::constant(1.0));

    Polynomial num, den;
    std::vector<RootRep> den_reps;
    if (a.den_.coeffs() == b.den_.coeffs()) {
        num = a.num_ + b.num_;
        den = a.den_;
        den_reps = a.den_reps();
    } else {
        auto ra = a.den_reps();
        auto rb = b.den_reps();
        std::vector<RootRep> g;
        if (!extract_shared(ra, rb, g, RationalFunction::kCancelPair)) {
            num = a.num_ * b.den_ + b.num_ * a.den_;
            den = a.den_ * b.den_;
        } else {
            Polynomial pa = rebuild(ra, 1.0);
            Polynomial pb = rebuild(rb, 1.0);
            num = a.num_ * pb + b.num_ * pa;
            den = rebuild(g, 1.0) * pa * pb;
        }
        den_reps = std::move(g);
        append(den_reps, ra);
        append(den_reps, rb);
    }
    if (num.is_zero()) return RationalFunction();

    std::vector<RootRep> num_reps = poly_reps(num);
    if (num.degree() >= 1 && den.degree() >= 1 &&
        pair_cancel(num_reps, den_reps, RationalFunction::kCancelPair)) {
        num = rebuild(num_reps, num.leading());
        den = rebuild(den_reps, den.leading());
    }
    RationalFunction out(std::move(num), std::move(den));
    out.set_num_reps(std::move(num_reps));
    out.set_den_reps(std::move(den_reps));
    return out;
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
    return a + (-b);
}

namespace {

struct FractionSide {
    const Polynomial* poly;
    const std::vector<RootRep>* reps;
};

}  // namespace

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
    if (a.is_zero() || b.is_zero()) return RationalFunction();
    if (a.is_constant()) return a.num_.coeff(0) * b;
    if (b.is_constant()) return b.num_.coeff(0) * a;
    if (a.den_.degree() == 0 && b.den_.degree() == 0) {
        RationalFunction out(a.num_ * b.num_, Polynomial::constant(1.0));
        auto rn = a.num_reps();
        append(rn, b.num_reps());
        out.set_num_reps(std::move(rn));
        return out;
    }
    std::vector<RootRep> rn = a.num_reps();
    append(rn, b.num_reps());
    std::vector<RootRep> rd = a.den_reps();
    append(rd, b.den_reps());
    Polynomial num, den;
    if (pair_cancel(rn, rd, RationalFunction::kCancelPair)) {
        num = rebuild(rn, a.num_.leading() * b.num_.leading());
        den = rebuild(rd, a.den_.leading() * b.den_.leading());
    } else {
        num = a.num_ * b.num_;
        den = a.den_ * b.den_;
    }
    RationalFunction out(std::move(num), std::move(den));
    out.set_num_reps(std::move(rn));
    out.set_den_reps(std::move(rd));
    return out;
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
    if (b.is_zero()) throw Error("division by the zero rational function");
    if (a.is_zero()) return RationalFunction();
    if (b.is_constant()) return (1.0 / b.num_.coeff(0)) * a;
    std::vector<RootRep> rn = a.num_reps();
    append(rn, b.den_reps());
    std::vector<RootRep> rd = a.den_reps();
    append(rd, b.num_reps());
    Polynomial num, den;
    if (pair_cancel(rn, rd, RationalFunction::kCancelPair)) {
        num = rebuild(rn, a.num_.leading() * b.den_.leading());
        den = rebuild(rd, a.den_.leading() * b.num_.leading());
    } else {
        num = a.num_ * b.den_;
        den = a.den_ * b.num_;
    }
    RationalFunction out(std::move(num), std::move(den));
    out.set_num_reps(std::move(rn));
    out.set_den_reps(std::move(rd));
    return out;
}

RationalFunction operator*(double c, const RationalFunction& r) {
    if (c == 0.0) return RationalFunction();
    RationalFunction out;
    out.num_ = c * r.num_;
    out.den_ = r.den_;
    out.num_reps_ = r.num_reps_;
    out.den_reps_ = r.den_reps_;
    return out;
}

RationalMatrix::RationalMatrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 0 || cols < 0) throw ShapeError("negative matrix dimension");
    entries_.resize(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols));
}

RationalMatrix RationalMatrix::identity(int n) {
    RationalMatrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = RationalFunction::constant(1.0);
    return m;
}

RationalMatrix RationalMatrix::from_real(const Eigen::MatrixXd& x) {
    RationalMatrix m(static_cast<int>(x.rows()), static_cast<int>(x.cols()));
    for (int r = 0; r < m.rows_; ++r)
        for (int c = 0; c < m.cols_; ++c)
            if (x(r, c) != 0.0) m.at(r, c) = RationalFunction::constant(x(r, c));
    return m;
}

RationalMatrix RationalMatrix::block2x2(const RationalMatrix& a, const RationalMatrix& b,
                                        const RationalMatrix& c, const RationalMatrix& d) {
    if (a.rows_ != b.rows_ || c.rows_ != d.rows_ || a.cols_ != c.cols_ || b.cols_ != d.cols_)
        throw ShapeError("incompatible blocks");
    RationalMatrix m(a.rows_ + c.rows_, a.cols_ + b.cols_);
    for (int r = 0; r < a.rows_; ++r) {
        for (int j = 0; j < a.cols_; ++j) m.at(r, j) = a.at(r, j);
        for (int j = 0; j < b.cols_; ++j) m.at(r, a.cols_ + j) = b.at(r, j);
    }
    for (int r = 0; r < c.rows_; ++r) {
        for (int j = 0; j < c.cols_; ++j) m.at(a.rows_ + r, j) = c.at(r, j);
        for (int j = 0; j < d.cols_; ++j) m.at(a.rows_ + r, a.cols_ + j) = d.at(r, j);
    }
    return m;
}

RationalFunction& RationalMatrix::at(int r, int c) {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw ShapeError("index out of range");
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
}

const RationalFunction& RationalMatrix::at(int r, int c) const {
    if (r < 0 || r >= rows_ || c < 0 || c >= cols_) throw ShapeError("index out of range");
    return entries_[static_cast<std::size_t>(r) * cols_ + c];
}

RationalMatrix RationalMatrix::block(int r0, int c0, int rows, int cols) const {
    if (r0 < 0 || c0 < 0 || r0 + rows > rows_ || c0 + cols > cols_)
        throw ShapeError("block out of range");
    RationalMatrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) m.at(r, c) = at(r0 + r, c0 + c);
    return m;
}

RationalMatrix RationalMatrix::transpose() const {
    RationalMatrix m(cols_, rows_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m.at(c, r) = at(r, c);
    return m;
}

Eigen::MatrixXcd RationalMatrix::eval(cplx s) const {
    Eigen::MatrixXcd m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c).eval(s);
    return m;
}

Eigen::MatrixXd RationalMatrix::eval_inf() const {
    Eigen::MatrixXd m(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) m(r, c) = at(r, c).eval_inf();
    return m;
}

RationalMatrix operator+(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw ShapeError("sum of mismatched shapes");
    RationalMatrix m(a.rows_, a.cols_);
    for (int r = 0; r < a.rows_; ++r)
        for (int c = 0; c < a.cols_; ++c) m.at(r, c) = a.at(r, c) + b.at(r, c);
    return m;
}

RationalMatrix operator-(const RationalMatrix& a, const RationalMatrix& b) {
    return a + (-1.0) * b;
}

RationalMatrix operator*(const RationalMatrix& a, const RationalMatrix& b) {
    if (a.cols_ != b.rows_) throw ShapeError("product of mismatched shapes");
    RationalMatrix m(a.rows_, b.cols_);
    for (int r = 0; r < a.rows_; ++r)
        for (int c = 0; c < b.cols_; ++c) {
            RationalFunction acc;
            for (int k = 0; k < a.cols_; ++k) acc = acc + a.at(r, k) * b.at(k, c);
            m.at(r, c) = acc;
        }
    return m;
}

RationalMatrix operator*(double c, const RationalMatrix& m) {
    RationalMatrix out(m.rows_, m.cols_);
    for (int r = 0; r < m.rows_; ++r)
        for (int j = 0; j < m.cols_; ++j) out.at(r, j) = c * m.at(r, j);
    return out;
}

RationalMatrix operator*(const RationalFunction& f, const RationalMatrix& m) {
    RationalMatrix out(m.rows_, m.cols_);
    for (int r = 0; r < m.rows_; ++r)
        for (int j = 0; j < m.cols_; ++j) out.at(r, j) = f * m.at(r, j);
    return out;
}

RationalFunction RationalMatrix::minor_det(const std::vector<int>& rows,
                                           const std::vector<int>& cols) const {
    const std::size_t n = rows.size();
    if (n == 1) return at(rows[0], cols[0]);
    if (n == 2)
        return at(rows[0], cols[0]) * at(rows[1], cols[1]) -
               at(rows[0], cols[1]) * at(rows[1], cols[0]);
    RationalFunction acc;
    std::vector<int> sub_rows(rows.begin() + 1, rows.end());
    for (std::size_t j = 0; j < n; ++j) {
        const RationalFunction& pivot = at(rows[0], cols[j]);
        if (pivot.is_zero()) continue;
        std::vector<int> sub_cols;
        sub_cols.reserve(n - 1);
        for (std::size_t k = 0; k < n; ++k)
            if (k != j) sub_cols.push_back(cols[k]);
        RationalFunction term = pivot * minor_det(sub_rows, sub_cols);
        acc = (j % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

std::pair<RationalFunction, RationalMatrix> RationalMatrix::det_adj() const {
    if (rows_ != cols_) throw ShapeError("determinant of a non-square matrix");
    const int n = rows_;
    if (n == 1) {
        RationalMatrix adj(1, 1);
        adj.at(0, 0) = RationalFunction::constant(1.0);
        return {at(0, 0), adj};
    }

    RationalMatrix cof(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            std::vector<int> rs, cs;
            for (int r = 0; r < n; ++r)
                if (r != i) rs.push_back(r);
            for (int c = 0; c < n; ++c)
                if (c != j) cs.push_back(c);
            RationalFunction d = minor_det(rs, cs);
            cof.at(i, j) = ((i + j) % 2 == 0) ? d : -d;
        }

    RationalFunction det;
    for (int j = 0; j < n; ++j) det = det + at(0, j) * cof.at(0, j);
    RationalMatrix adj = cof.transpose();

    // spot-check R*adj = det*I at sample points away from poles
    std::mt19937 rng(12345u);
    std::uniform_real_distribution<double> dist(-3.0, 3.0);
    int checked = 0;
    for (int attempt = 0; attempt < 64 && checked < 8; ++attempt) {
        const cplx s(dist(rng), dist(rng));
        try {
            Eigen::MatrixXcd lhs = eval(s) * adj.eval(s);
            Eigen::MatrixXcd rhs = det.eval(s) * Eigen::MatrixXcd::Identity(n, n);
            double scale = std::max({1.0, lhs.norm(), rhs.norm()});
            if ((lhs - rhs).norm() > 1e-8 * scale)
                throw Error("adjugate identity failed at a sample point");
            ++checked;
        } catch (const PoleEvaluation&) {
            continue;
        }
    }
    return {det, adj};
}

RationalFunction RationalMatrix::det() const {
    if (rows_ != cols_) throw ShapeError("determinant of a non-square matrix");
    std::vector<int> idx(rows_);
    for (int i = 0; i < rows_; ++i) idx[i] = i;
    return minor_det(idx, idx);
}

RationalMatrix RationalMatrix::inverse() const {
    auto [d, adj] = det_adj();
    if (d.is_zero()) throw SingularMatrix("matrix with identically zero determinant");
    RationalMatrix inv(rows_, cols_);
    for (int r = 0; r < rows_; ++r)
        for (int c = 0; c < cols_; ++c) inv.at(r, c) = adj.at(r, c) / d;
    return inv;
}

}  // namespace simustab
