#include "simustab/stabdata.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simustab/errors.hpp"

namespace simustab {

using cplx = std::complex<double>;

namespace {

void require_square(const RationalMatrix& m, int size, const char* name) {
    if (m.rows() != size || m.cols() != size)
        throw InvalidPlant(std::string(name) + ": expected a square block of matching size");
}

double min_herm_eig(const Eigen::MatrixXcd& w) {
    Eigen::MatrixXcd h = 0.5 * (w + w.adjoint());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    return es.eigenvalues().minCoeff();
}

bool is_real_node(const InterpolationNode& node) {
    return std::abs(node.z.imag()) <= 1e-12 &&
           node.W.imag().norm() <= 1e-9 * (1.0 + node.W.norm());
}

}  // namespace

bool DiscData::is_normalized() const {
    if (nodes.empty()) return false;
    if (normalization.has_value()) return true;
    const InterpolationNode& base = nodes.front();
    Eigen::MatrixXcd half = 0.5 * Eigen::MatrixXcd::Identity(ell, ell);
    return std::abs(base.z) <= 1e-14 && (base.W - half).norm() <= 1e-12;
}

PlantPair make_plant_pair(RationalMatrix N0, RationalMatrix D0,
                          RationalMatrix N1, RationalMatrix D1) {
    const int m = N0.rows();
    if (m < 1) throw InvalidPlant("empty plant");
    require_square(N0, m, "N0");
    require_square(D0, m, "D0");
    require_square(N1, m, "N1");
    require_square(D1, m, "D1");
    const RationalMatrix* blocks[] = {&N0, &D0, &N1, &D1};
    const char* names[] = {"N0", "D0", "N1", "D1"};
    for (int b = 0; b < 4; ++b)
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                if (!blocks[b]->at(r, c).is_stable_proper())
                    throw InvalidPlant(std::string(names[b]) + "[" + std::to_string(r) + "][" +
                                       std::to_string(c) + "] is not stable and proper");
    return PlantPair{std::move(N0), std::move(D0), std::move(N1), std::move(D1), m};
}

PencilM build_pencil(const PlantPair& pp) {
    RationalMatrix M = RationalMatrix::block2x2(pp.N0, pp.N1, pp.D0, pp.D1);
    auto [det, adj] = M.det_adj();
    if (det.is_zero()) throw DegeneratePencil("det(M) vanishes identically");
    if (std::abs(det.eval_inf()) <= 1e-9)
        throw ImproperPencil("det(M) vanishes at infinity");
    return PencilM{std::move(M), pp.m, std::move(det), std::move(adj)};
}

std::vector<UnstableZero> unstable_zeros(const PencilM& pm, const ZeroTolerances& tol) {
    const Polynomial& p = pm.det.num();
    const Polynomial& q = pm.det.den();
    if (p.degree() < 1) return {};

    const std::vector<cplx> roots = poly_roots(p);
    const Polynomial dp = p.derivative();
    const Polynomial dq = q.derivative();

    std::vector<cplx> unstable;
    for (const cplx& r : roots) {
        const double axis = tol.boundary * (1.0 + std::abs(r));
        if (std::abs(r.real()) <= axis)
            throw BoundaryZero("zero of det(M) on the imaginary axis near s = " +
                               std::to_string(r.real()) + " + " + std::to_string(r.imag()) + "i");
        if (r.real() < 0.0) continue;

        for (const cplx& other : roots)
            if (&other != &r && std::abs(other - r) <= tol.simplicity)
                throw NonSimpleZero("repeated unstable zero of det(M)");
        const cplx qv = q.eval(r);
        const cplx ddet = (dp.eval(r) * qv - p.eval(r) * dq.eval(r)) / (qv * qv);
        if (std::abs(ddet) <= tol.det_derivative)
            throw NonSimpleZero("derivative of det(M) vanishes at an unstable zero");
        unstable.push_back(r);
    }

    std::vector<UnstableZero> out;
    for (const cplx& r : unstable) {
        const double real_tol = 1e-9 * (1.0 + std::abs(r));
        if (std::abs(r.imag()) <= real_tol)
            out.push_back({cplx(r.real(), 0.0), ConjugateTag::real});
        else
            out.push_back({r, r.imag() > 0 ? ConjugateTag::pair_lead : ConjugateTag::pair_follow});
    }
    std::sort(out.begin(), out.end(), [](const UnstableZero& a, const UnstableZero& b) {
        if (a.s.real() != b.s.real()) return a.s.real() < b.s.real();
        return a.s.imag() > b.s.imag();
    });
    return out;
}

NullDirection null_direction(const PencilM& pm, const UnstableZero& z, double rank_gap) {
    const Eigen::MatrixXcd A = pm.M.eval(z.s);
    const int n = static_cast<int>(A.rows());
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (n >= 2 && sv(n - 2) <= rank_gap)
        throw RankAssumptionViolated("nullity of M(s_i) exceeds one");
    Eigen::VectorXcd v = svd.matrixV().col(n - 1);

    int imax = 0;
    for (int i = 1; i < n; ++i)
        if (std::abs(v(i)) > std::abs(v(imax))) imax = i;
    v *= std::conj(v(imax)) / std::abs(v(imax));

    if ((A * v).norm() > 1e-8 * (1.0 + A.norm()))
        throw Error("null direction residual too large; zero location inaccurate");

    const int m = pm.m;
    return NullDirection{v.head(m), v.tail(m)};
}

InterpValue interp_value(const NullDirection& nd, double alpha) {
    if (alpha <= 0.0) throw Error("alpha must be positive");
    const double v2sq = nd.v2.squaredNorm();
    if (std::sqrt(v2sq) <= 1e-10)
        throw UnassignableDirection("bottom half of the null direction vanishes");
    const int m = static_cast<int>(nd.v1.size());
    const Eigen::MatrixXcd proj = nd.v2 * nd.v2.adjoint() / v2sq;
    Eigen::MatrixXcd M = -nd.v1 * nd.v2.adjoint() / v2sq +
                         alpha * (Eigen::MatrixXcd::Identity(m, m) - proj);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(M);
    bool feasible = true;
    for (int i = 0; i < m; ++i) {
        const cplx lam = es.eigenvalues()(i);
        if (lam.real() <= 1e-9 && std::abs(lam.imag()) <= 1e-9 * (1.0 + std::abs(lam)))
            feasible = false;
    }
    return InterpValue{std::move(M), feasible};
}

Eigen::MatrixXcd principal_sqrt(const Eigen::MatrixXcd& x) {
    const int n = static_cast<int>(x.rows());
    if (x.cols() != n) throw ShapeError("square root of a non-square matrix");
    Eigen::ComplexSchur<Eigen::MatrixXcd> schur(x);
    const Eigen::MatrixXcd& T = schur.matrixT();
    const Eigen::MatrixXcd& U = schur.matrixU();

    for (int i = 0; i < n; ++i) {
        const cplx lam = T(i, i);
        if (lam.real() <= 0.0 && std::abs(lam.imag()) <= 1e-12 * (1.0 + std::abs(lam)))
            throw BranchCutError("eigenvalue on the closed nonpositive real axis");
    }

    Eigen::MatrixXcd R = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 0; i < n; ++i) R(i, i) = std::sqrt(T(i, i));
    for (int d = 1; d < n; ++d)
        for (int i = 0; i + d < n; ++i) {
            const int j = i + d;
            cplx acc = T(i, j);
            for (int k = i + 1; k < j; ++k) acc -= R(i, k) * R(k, j);
            R(i, j) = acc / (R(i, i) + R(j, j));
        }
    return U * R * U.adjoint();
}

std::complex<double> mobius_to_disc(cplx s) { return (1.0 - s) / (1.0 + s); }

std::complex<double> blaschke(double a, cplx z) { return (z - a) / (1.0 - a * z); }

DiscData to_disc(std::span<const UnstableZero> zeros,
                 std::span<const Eigen::MatrixXcd> values, Mode mode) {
    if (zeros.size() != values.size()) throw ShapeError("zeros/values size mismatch");
    if (zeros.empty()) return DiscData{0, {}, mode, std::nullopt};
    const int ell = static_cast<int>(values[0].rows());

    DiscData dd;
    dd.ell = ell;
    dd.mode = mode;
    for (std::size_t i = 0; i < zeros.size(); ++i) {
        if (values[i].rows() != ell || values[i].cols() != ell)
            throw ShapeError("interpolation values of mixed sizes");
        const cplx z = mobius_to_disc(zeros[i].s);
        if (std::abs(z) >= 1.0) throw Error("mapped node outside the open unit disc");
        if (min_herm_eig(values[i]) <= 0.0)
            throw NotCaratheodoryData("interpolation value with non-positive Hermitian part");
        dd.nodes.push_back({z, values[i], 1});
    }

    for (std::size_t i = 0; i < dd.nodes.size(); ++i) {
        for (std::size_t j = i + 1; j < dd.nodes.size(); ++j)
            if (std::abs(dd.nodes[i].z - dd.nodes[j].z) <= 1e-12)
                throw DegenerateNodeSet("coincident interpolation nodes");
        if (std::abs(dd.nodes[i].z.imag()) > 1e-9) {
            bool found = false;
            for (const InterpolationNode& other : dd.nodes) {
                if (std::abs(std::conj(dd.nodes[i].z) - other.z) <= 1e-9 &&
                    (dd.nodes[i].W.conjugate() - other.W).norm() <=
                        1e-7 * (1.0 + other.W.norm())) {
                    found = true;
                    break;
                }
            }
            if (!found) throw Error("interpolation data not conjugate-symmetric");
        }
    }
    return dd;
}

DiscData normalize_data(const DiscData& dd, std::optional<int> base_index) {
    if (dd.nodes.empty()) throw Error("cannot normalize empty interpolation data");
    int base = -1;
    if (base_index.has_value()) {
        base = *base_index;
        if (base < 0 || base >= static_cast<int>(dd.nodes.size()))
            throw ShapeError("base index out of range");
        if (!is_real_node(dd.nodes[base])) throw Error("chosen base node is not real");
    } else {
        double best = 2.0;
        for (int i = 0; i < static_cast<int>(dd.nodes.size()); ++i) {
            if (!is_real_node(dd.nodes[i])) continue;
            if (std::abs(dd.nodes[i].z) < best) {
                best = std::abs(dd.nodes[i].z);
                base = i;
            }
        }
        if (base < 0) throw NoRealBase("no real interpolation node to anchor the normalization");
    }

    const double a = dd.nodes[base].z.real();
    const Eigen::MatrixXd Wb = dd.nodes[base].W.real();
    const Eigen::MatrixXd He = 0.5 * (Wb + Wb.transpose());
    Eigen::LLT<Eigen::MatrixXd> llt(He);
    if (llt.info() != Eigen::Success)
        throw NotCaratheodoryData("Hermitian part of the base value is not positive definite");
    const Eigen::MatrixXd T = llt.matrixL();
    const Eigen::MatrixXd S = 0.5 * (Wb - Wb.transpose());
    const Eigen::MatrixXcd Tinv = T.inverse().cast<cplx>();
    const Eigen::MatrixXcd Sc = S.cast<cplx>();

    DiscData out;
    out.ell = dd.ell;
    out.mode = dd.mode;
    out.normalization = NormalizationRecord{a, T, S};
    out.nodes.push_back({cplx(0.0, 0.0), 0.5 * Eigen::MatrixXcd::Identity(dd.ell, dd.ell), 1});
    for (int i = 0; i < static_cast<int>(dd.nodes.size()); ++i) {
        if (i == base) continue;
        const cplx zt = blaschke(a, dd.nodes[i].z);
        Eigen::MatrixXcd wt = 0.5 * Tinv * (dd.nodes[i].W - Sc) * Tinv.transpose();
        if (min_herm_eig(wt) <= 0.0)
            throw NotCaratheodoryData("normalized value lost positivity");
        out.nodes.push_back({zt, std::move(wt), 1});
    }
    return out;
}

Eigen::MatrixXcd denormalize_value(const NormalizationRecord& rec,
                                   const Eigen::MatrixXcd& w_tilde) {
    const Eigen::MatrixXcd T = rec.T.cast<cplx>();
    return 2.0 * T * w_tilde * T.transpose() + rec.S.cast<cplx>();
}

ReducedData reduce_plants(const PlantPair& pp, double alpha, ModeChoice choice,
                          const ZeroTolerances& tol) {
    ReducedData rd;
    rd.pencil = build_pencil(pp);
    rd.zeros = unstable_zeros(rd.pencil, tol);
    if (rd.zeros.empty()) {
        rd.trivial = true;
        rd.mode = choice == ModeChoice::sqrt ? Mode::sqrt : Mode::direct;
        rd.data.ell = pp.m;
        rd.data.mode = rd.mode;
        rd.normalized = rd.data;
        return rd;
    }

    const int count = static_cast<int>(rd.zeros.size());
    rd.tangential_values.resize(count);
    for (int i = 0; i < count; ++i) {
        const UnstableZero& z = rd.zeros[i];
        if (z.tag == ConjugateTag::pair_follow) {
            int lead = -1;
            for (int j = 0; j < count; ++j)
                if (rd.zeros[j].tag == ConjugateTag::pair_lead &&
                    std::abs(std::conj(rd.zeros[j].s) - z.s) <= 1e-9 * (1.0 + std::abs(z.s)))
                    lead = j;
            if (lead < 0 || lead > i) throw Error("unmatched conjugate zero ordering");
            rd.tangential_values[i] = rd.tangential_values[lead].conjugate();
            continue;
        }
        NullDirection nd = null_direction(rd.pencil, z, tol.rank_gap);
        InterpValue iv = interp_value(nd, alpha);
        if (!iv.feasible)
            throw AlphaInfeasible("tangential value has an eigenvalue on the nonpositive real "
                                  "axis at s = " + std::to_string(z.s.real()) + " + " +
                                  std::to_string(z.s.imag()) + "i");
        rd.tangential_values[i] =
            z.tag == ConjugateTag::real ? iv.M.real().cast<cplx>().eval() : iv.M;
    }

    bool direct_ok = true;
    for (const Eigen::MatrixXcd& m : rd.tangential_values) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(
            Eigen::MatrixXcd(0.5 * (m + m.adjoint())));
        if (es.eigenvalues().minCoeff() <= 0.0) direct_ok = false;
    }

    std::vector<Eigen::MatrixXcd> wvals(count);
    if (choice == ModeChoice::direct || (choice == ModeChoice::automatic && direct_ok)) {
        if (!direct_ok)
            throw NotCaratheodoryData("direct mode requested but some He(M_i) is not positive");
        rd.mode = Mode::direct;
        wvals = rd.tangential_values;
    } else {
        rd.mode = Mode::sqrt;
        for (int i = 0; i < count; ++i) {
            const ConjugateTag tag = rd.zeros[i].tag;
            if (tag == ConjugateTag::pair_follow) continue;
            Eigen::MatrixXcd root = principal_sqrt(rd.tangential_values[i]);
            wvals[i] = tag == ConjugateTag::real ? root.real().cast<cplx>().eval() : root;
        }
        for (int i = 0; i < count; ++i)
            if (rd.zeros[i].tag == ConjugateTag::pair_follow) {
                for (int j = 0; j < count; ++j)
                    if (rd.zeros[j].tag == ConjugateTag::pair_lead &&
                        std::abs(std::conj(rd.zeros[j].s) - rd.zeros[i].s) <=
                            1e-9 * (1.0 + std::abs(rd.zeros[i].s)))
                        wvals[i] = wvals[j].conjugate();
            }
    }

    rd.data = to_disc(rd.zeros, wvals, rd.mode);
    try {
        rd.normalized = normalize_data(rd.data);
    } catch (const NoRealBase&) {
        DiscData ext = rd.data;
        ext.nodes.insert(ext.nodes.begin(),
                         {cplx(0.0, 0.0),
                          0.5 * Eigen::MatrixXcd::Identity(rd.data.ell, rd.data.ell), 1});
        rd.normalized = normalize_data(ext, 0);
    }
    return rd;
}

}  // namespace simustab
