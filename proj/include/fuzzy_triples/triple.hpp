#pragma once

#include "clifford.hpp"

#include <functional>
#include <optional>

namespace ncg {

enum class AlgebraKind { complex_matrices, real_matrices, quaternionic_matrices, direct_sum };

inline const char* to_string(AlgebraKind k) {
    switch (k) {
    case AlgebraKind::complex_matrices: return "complex-matrices";
    case AlgebraKind::real_matrices: return "real-matrices";
    case AlgebraKind::quaternionic_matrices: return "quaternionic-matrices";
    default: return "direct-sum-of-two-simples";
    }
}

// One simple summand sitting in a diagonal block of the ambient complex matrices.
struct AlgebraBlock {
    AlgebraKind kind;
    int size;      // complex size of the block
    int offset;    // position on the ambient diagonal
    double weight; // n_i * dim D_i, rescaled to multiply Re tr of the complex block
};

struct AlgebraSpec {
    AlgebraKind kind = AlgebraKind::complex_matrices;
    std::vector<int> sizes;
    Index ambient = 1;
    std::vector<AlgebraBlock> blocks;
    std::vector<cmat> basis;      // spans the algebra over R
    std::vector<cmat> generators; // generate the complexification

    Index dim() const { return static_cast<Index>(basis.size()); }
    cmat unit() const { return eye(ambient); }
};

namespace detail {

inline cmat embed(const cmat& b, Index ambient, Index offset) {
    cmat m = cmat::Zero(ambient, ambient);
    m.block(offset, offset, b.rows(), b.cols()) = b;
    return m;
}

// diag(1..n) and the cyclic shift generate M(n,C)
inline std::vector<cmat> clock_shift(int n) {
    cmat z = cmat::Zero(n, n), sh = cmat::Zero(n, n);
    for (int k = 0; k < n; ++k) {
        z(k, k) = double(k + 1);
        sh((k + 1) % n, k) = 1.0;
    }
    if (n == 1) return {z};
    return {z, sh};
}

inline std::vector<cmat> block_basis(AlgebraKind kind, int size) {
    std::vector<cmat> b;
    if (kind == AlgebraKind::quaternionic_matrices) {
        cmat q[4];
        q[0] = eye(2);
        q[1] = cmat::Zero(2, 2), q[1](0, 0) = iu, q[1](1, 1) = -iu;
        q[2] = cmat::Zero(2, 2), q[2](0, 1) = 1.0, q[2](1, 0) = -1.0;
        q[3] = cmat::Zero(2, 2), q[3](0, 1) = iu, q[3](1, 0) = iu;
        const int k = size / 2;
        for (int r = 0; r < k; ++r)
            for (int c = 0; c < k; ++c)
                for (auto& e : q) {
                    cmat m = cmat::Zero(size, size);
                    m.block(2 * r, 2 * c, 2, 2) = e;
                    b.push_back(m);
                }
        return b;
    }
    for (int r = 0; r < size; ++r)
        for (int c = 0; c < size; ++c) {
            b.push_back(unit(size, size, r, c));
            if (kind == AlgebraKind::complex_matrices) b.push_back(iu * unit(size, size, r, c));
        }
    return b;
}

inline double block_weight(AlgebraKind kind, int size) {
    switch (kind) {
    case AlgebraKind::complex_matrices: return 2.0 * size;
    case AlgebraKind::real_matrices: return double(size);
    // k quaternionic rows, dim H = 4, Re tr_H is half the complex trace
    default: return 2.0 * (size / 2);
    }
}

}  // namespace detail

inline AlgebraSpec simple_algebra(AlgebraKind kind, int n) {
    if (n < 1) throw invalid_input("algebra size must be positive");
    if (kind == AlgebraKind::quaternionic_matrices && n % 2) throw invalid_input("quaternionic algebra needs even n");
    if (kind == AlgebraKind::direct_sum) throw invalid_input("use direct_sum_algebra");
    AlgebraSpec a;
    a.kind = kind;
    a.sizes = {n};
    a.ambient = n;
    a.blocks = {{kind, n, 0, detail::block_weight(kind, n)}};
    a.basis = detail::block_basis(kind, n);
    a.generators = detail::clock_shift(n);
    return a;
}

inline AlgebraSpec complex_algebra(int n) { return simple_algebra(AlgebraKind::complex_matrices, n); }

inline AlgebraSpec direct_sum_algebra(int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw invalid_input("algebra size must be positive");
    AlgebraSpec a;
    a.kind = AlgebraKind::direct_sum;
    a.sizes = {n1, n2};
    a.ambient = n1 + n2;
    a.blocks = {{AlgebraKind::complex_matrices, n1, 0, 2.0 * n1},
                {AlgebraKind::complex_matrices, n2, n1, 2.0 * n2}};
    for (auto& bl : a.blocks) {
        for (auto& e : detail::block_basis(bl.kind, bl.size)) a.basis.push_back(detail::embed(e, a.ambient, bl.offset));
        for (auto& e : detail::clock_shift(bl.size)) a.generators.push_back(detail::embed(e, a.ambient, bl.offset));
    }
    return a;
}

struct FermionSpace {
    int s = 0;
    SignTriple signs;
    CliffordModule clifford;
    AlgebraSpec algebra;
    Index dim_v = 1;
    Index block_dim = 1;
    Index hilbert_dim = 1;
    std::function<spmat(const cmat&)> rho;
    cmat Gamma;
    AntilinearOp J;
    // "gamma-tensor-1": Gamma = chirality (x) 1, which is a scalar for odd s
    std::string gamma_convention = "gamma-tensor-1";
    int n1 = 0, n2 = 0;
    bool generalised = false;

    int epsilon_prime() const { return sign_table(s).epsilon_prime; }
};

enum class TermFlavor {
    commutator,                  // omega (x) [L, .], L anti-Hermitian
    anticommutator,              // omega (x) {H, .}, H Hermitian
    anticommutator_antihermitian, // omega (x) {L, .}
    commutator_hermitian         // omega (x) [H, .]
};

inline const char* to_string(TermFlavor f) {
    switch (f) {
    case TermFlavor::commutator: return "commutator";
    case TermFlavor::anticommutator: return "anticommutator";
    case TermFlavor::anticommutator_antihermitian: return "anticommutator-antihermitian";
    default: return "commutator-hermitian";
    }
}

// omega (x) (K m + delta m K*); K holds one block, or two for the generalised spaces
struct DiracTerm {
    std::vector<int> omega_word;
    cmat omega;
    std::vector<cmat> K;
    TermFlavor flavor = TermFlavor::commutator;
};

struct DiracOperator {
    cmat matrix;
    std::vector<DiracTerm> terms;
};

struct AxiomResult {
    int id;
    std::string description;
    bool pass;
    double max_deviation;
};

struct AxiomReport {
    std::vector<AxiomResult> items;

    bool all_pass() const {
        return std::all_of(items.begin(), items.end(), [](const AxiomResult& a) { return a.pass; });
    }
    const AxiomResult& axiom(int id) const { return items.at(static_cast<size_t>(id - 1)); }
    std::vector<int> failed() const {
        std::vector<int> f;
        for (auto& a : items)
            if (!a.pass) f.push_back(a.id);
        return f;
    }
};

// Sparse left and right actions of the basis and the sparse form of J.
struct PreparedSpace {
    std::vector<spmat> left;
    std::vector<spmat> right;
    spmat A, Ainv;

    explicit PreparedSpace(const FermionSpace& fs) {
        A = sparse_of(fs.J.A);
        if (fs.J.unitarity_defect() < 1e-12) Ainv = spmat(A.adjoint());
        else Ainv = sparse_of(fs.J.A.inverse(), 1e-15);
        for (auto& b : fs.algebra.basis) {
            left.push_back(fs.rho(b));
            right.push_back(conj_right(fs.rho(b)));
        }
    }

    // J X J^-1 for sparse X
    spmat conj_right(const spmat& x) const { return spmat(A * spmat(x.conjugate()) * Ainv); }
    cmat conj_right(const cmat& x) const { return A * (x.conjugate() * Ainv); }
    // J^-1 X J
    cmat conj_left(const cmat& x) const { return (Ainv * (x * A)).conjugate(); }
};

namespace detail {

inline rvec realify(const cmat& m) {
    rvec v(2 * m.size());
    Index k = 0;
    for (Index i = 0; i < m.rows(); ++i)
        for (Index j = 0; j < m.cols(); ++j) {
            v(k++) = m(i, j).real();
            v(k++) = m(i, j).imag();
        }
    return v;
}

inline double span_residual(const Eigen::ColPivHouseholderQR<rmat>& qr, const rmat& B, const cmat& m) {
    rvec v = realify(m);
    rvec c = qr.solve(v);
    return (B * c - v).cwiseAbs().maxCoeff();
}

}  // namespace detail

inline AxiomReport check_axioms(const FermionSpace& fs, const DiracOperator& d, double tol = 1e-12) {
    const Index N = fs.Gamma.rows();
    if (fs.Gamma.cols() != N || fs.J.A.rows() != N || fs.J.A.cols() != N || d.matrix.rows() != N ||
        d.matrix.cols() != N)
        throw invalid_input("check_axioms: dimension mismatch");
    for (auto& b : fs.algebra.basis)
        if (b.rows() != fs.algebra.ambient) throw invalid_input("check_axioms: algebra basis size mismatch");

    PreparedSpace ps(fs);
    const SignTriple sg = sign_table(fs.s);
    const cmat one = eye(N);
    const cmat& G = fs.Gamma;
    const cmat& D = d.matrix;
    const cmat& A = fs.J.A;
    const auto& basis = fs.algebra.basis;
    const size_t nb = basis.size();

    AxiomReport r;
    auto add = [&](int id, const char* desc, double dev) { r.items.push_back({id, desc, dev <= tol, dev}); };

    add(1, "KO-dimension s in Z/8 with matching signs",
        (fs.s >= 0 && fs.s < 8 && fs.signs == sign_table(fs.s)) ? 0.0 : 1.0);
    add(2, "finite-dimensional Hilbert space V (x) H0",
        (N > 0 && fs.hilbert_dim == N && fs.dim_v * fs.block_dim == N) ? 0.0 : 1.0);

    {
        const Index amb = fs.algebra.ambient;
        rmat B(2 * amb * amb, static_cast<Index>(nb));
        for (size_t k = 0; k < nb; ++k) B.col(static_cast<Index>(k)) = detail::realify(basis[k]);
        Eigen::ColPivHouseholderQR<rmat> qr(B);
        double dev = detail::span_residual(qr, B, fs.algebra.unit());
        for (size_t i = 0; i < nb; ++i) {
            dev = std::max(dev, detail::span_residual(qr, B, basis[i].adjoint()));
            for (size_t j = 0; j < nb; ++j) dev = std::max(dev, detail::span_residual(qr, B, basis[i] * basis[j]));
        }
        add(3, "algebra closed under products and *, with unit", dev);
    }
    {
        double dev = max_abs(spmat(fs.rho(fs.algebra.unit()) - sparse_eye(N)));
        for (size_t i = 0; i < nb; ++i) {
            dev = std::max(dev, max_abs(spmat(fs.rho(basis[i].adjoint()) - spmat(ps.left[i].adjoint()))));
            for (size_t j = 0; j < nb; ++j)
                dev = std::max(dev, max_abs(spmat(fs.rho(basis[i] * basis[j]) - ps.left[i] * ps.left[j])));
        }
        add(4, "rho is a *-representation", dev);
    }
    add(5, "Gamma self-adjoint involution", std::max(max_abs(G.adjoint() - G), max_abs(G * G - one)));
    {
        double dev = 0;
        for (auto& L : ps.left) dev = std::max(dev, max_abs(cmat(G * L - L * G)));
        add(6, "Gamma commutes with rho(a)", dev);
    }
    add(7, "J antiunitary", fs.J.unitarity_defect());
    add(8, "J^2 = eps, J Gamma = eps'' Gamma J",
        std::max(max_abs(A * A.conjugate() - double(sg.epsilon) * one),
                 max_abs(A * G.conjugate() - double(sg.epsilon_double_prime) * G * A)));
    {
        double dev = 0;
        for (auto& L : ps.left)
            for (auto& R : ps.right) dev = std::max(dev, max_abs(spmat(L * R - R * L)));
        add(9, "[rho(a), J rho(b) J^-1] = 0", dev);
    }
    add(10, "D self-adjoint", max_abs(D - D.adjoint()));
    add(11, fs.s % 2 == 0 ? "D Gamma = -Gamma D" : "D Gamma = Gamma D",
        max_abs(D * G + double(fs.s % 2 == 0 ? 1 : -1) * G * D));
    add(12, "J D = eps' D J", max_abs(A * D.conjugate() - double(sg.epsilon_prime) * D * A));
    {
        double dev = 0;
        const spmat Ds = sparse_of(D);
        if (Ds.nonZeros() * 4 < N * N) {
            for (auto& L : ps.left) {
                const spmat X = Ds * L - L * Ds;
                for (auto& R : ps.right) dev = std::max(dev, max_abs(spmat(X * R - R * X)));
            }
        } else {
            for (auto& L : ps.left) {
                const cmat X = D * L - L * D;
                for (auto& R : ps.right) dev = std::max(dev, max_abs(cmat(X * R - R * X)));
            }
        }
        add(13, "first-order condition", dev);
    }
    return r;
}

inline int index(const FermionSpace& fs) {
    if (fs.s % 2) throw invalid_input("index: s must be even");
    return static_cast<int>(std::lround(fs.Gamma.trace().real()));
}

struct IndexResult {
    int value = 0;
    int kernel_dim = 0;
    bool ambiguous = false;
};

inline IndexResult index_dirac(const FermionSpace& fs, const DiracOperator& d, double tol = 1e-8) {
    if (fs.s % 2) throw invalid_input("index_dirac: s must be even");
    Eigen::SelfAdjointEigenSolver<cmat> es(d.matrix);
    IndexResult r;
    double tr = 0;
    for (Index k = 0; k < es.eigenvalues().size(); ++k) {
        const double lam = std::abs(es.eigenvalues()(k));
        if (lam < tol) {
            const cvec v = es.eigenvectors().col(k);
            tr += v.dot(fs.Gamma * v).real();
            ++r.kernel_dim;
        }
        if (lam >= 0.1 * tol && lam <= 10 * tol) r.ambiguous = true;
    }
    r.value = static_cast<int>(std::lround(tr));
    return r;
}

struct FrobeniusData {
    std::vector<AlgebraBlock> blocks;
    cmat x;
    std::vector<double> form; // phi on the basis
    std::vector<std::pair<cmat, cmat>> inverse_pairs;
    bool special = false;
    bool star_invariant = false;
    bool symmetric = false;
    double inverse_residual = 0.0;

    double phi(const cmat& a) const {
        const cmat xa = x * a;
        double v = 0;
        for (auto& b : blocks) v += b.weight * xa.block(b.offset, b.offset, b.size, b.size).trace().real();
        return v;
    }
};

inline FrobeniusData frobenius_form(const AlgebraSpec& alg, const cmat& x, double tol = 1e-12) {
    FrobeniusData f;
    f.blocks = alg.blocks;
    f.x = x;
    const auto& e = alg.basis;
    const Index n = alg.dim();
    rmat G(n, n);
    for (Index i = 0; i < n; ++i) {
        f.form.push_back(f.phi(e[i]));
        for (Index j = 0; j < n; ++j) G(i, j) = f.phi(e[i] * e[j]);
    }
    Eigen::FullPivLU<rmat> lu(G);
    if (!lu.isInvertible()) throw invalid_input("frobenius_form: degenerate form");
    const rmat Gi = lu.inverse();
    for (Index i = 0; i < n; ++i) {
        cmat br = cmat::Zero(alg.ambient, alg.ambient);
        for (Index j = 0; j < n; ++j)
            if (std::abs(Gi(i, j)) > 1e-15) br += Gi(i, j) * e[j];
        if (max_abs(br) > 0) f.inverse_pairs.emplace_back(e[i], br);
    }

    double res = 0;
    for (auto& a : e) {
        cmat l = cmat::Zero(alg.ambient, alg.ambient), r = l;
        for (auto& [bl, br] : f.inverse_pairs) {
            l += f.phi(a * bl) * br;
            r += bl * f.phi(br * a);
        }
        res = std::max({res, max_abs(l - a), max_abs(r - a)});
    }
    f.inverse_residual = res;

    cmat z = cmat::Zero(alg.ambient, alg.ambient);
    for (auto& [bl, br] : f.inverse_pairs) z += bl * br;
    f.special = max_abs(z - alg.unit()) <= tol;
    f.star_invariant = f.symmetric = true;
    for (auto& a : e) {
        if (std::abs(f.phi(a.adjoint()) - f.phi(a)) > tol) f.star_invariant = false;
        for (auto& b : e)
            if (std::abs(f.phi(a * b) - f.phi(b * a)) > tol) f.symmetric = false;
    }
    return f;
}

inline FrobeniusData canonical_frobenius(const AlgebraSpec& alg) { return frobenius_form(alg, alg.unit()); }

// pi and pi' for a fixed fermion space and Frobenius form
class CommutantProjector {
public:
    CommutantProjector(const FermionSpace& fs, const FrobeniusData& f) : ps_(fs) {
        if (!f.special || !f.star_invariant) throw invalid_input("projector needs a special *-invariant form");
        for (auto& [bl, br] : f.inverse_pairs) pairs_.emplace_back(fs.rho(bl), fs.rho(br));
    }

    cmat pi(const cmat& K) const {
        cmat out = cmat::Zero(K.rows(), K.cols());
        for (auto& [l, r] : pairs_) out += l * (K * r);
        return out;
    }
    cmat pi_prime(const cmat& K) const { return ps_.conj_right(pi(ps_.conj_left(K))); }
    const PreparedSpace& prepared() const { return ps_; }

private:
    PreparedSpace ps_;
    std::vector<std::pair<spmat, spmat>> pairs_;
};

inline cmat project_right_commutant(const FermionSpace& fs, const FrobeniusData& f, const cmat& K) {
    return CommutantProjector(fs, f).pi(K);
}

inline cmat project_left_commutant(const FermionSpace& fs, const FrobeniusData& f, const cmat& K) {
    return CommutantProjector(fs, f).pi_prime(K);
}

inline cmat theta_from_dirac(const FermionSpace& fs, const FrobeniusData& f, const DiracOperator& d,
                             bool check_input = true) {
    if (check_input && !check_axioms(fs, d, 1e-10).all_pass())
        throw invalid_input("theta_from_dirac: input fails the axioms");
    CommutantProjector pr(fs, f);
    const cmat pp = pr.pi_prime(d.matrix);
    return pp - 0.5 * pr.pi(pp);
}

struct ThetaReport {
    double reconstruction = 0; // |theta + eps' J theta J^-1 - D|
    double hermitian = 0;
    double right_commutes = 0;
    double parity = 0;
    double gauge = 0;          // |pi theta - eps' J (pi theta) J^-1|

    double max() const { return std::max({reconstruction, hermitian, right_commutes, parity, gauge}); }
};

inline ThetaReport theta_report(const FermionSpace& fs, const FrobeniusData& f, const cmat& theta,
                                const DiracOperator& d) {
    CommutantProjector pr(fs, f);
    const auto& ps = pr.prepared();
    const double ep = fs.epsilon_prime();
    ThetaReport r;
    r.reconstruction = max_abs(cmat(theta + ep * ps.conj_right(theta) - d.matrix));
    r.hermitian = max_abs(theta - theta.adjoint());
    for (auto& R : ps.right) r.right_commutes = std::max(r.right_commutes, max_abs(cmat(theta * R - R * theta)));
    r.parity = max_abs(theta * fs.Gamma + double(fs.s % 2 == 0 ? 1 : -1) * fs.Gamma * theta);
    const cmat pt = pr.pi(theta);
    r.gauge = max_abs(cmat(pt - ep * ps.conj_right(pt)));
    return r;
}

// Deviations from the five properties of a difference of two decompositions.
struct AmbiguityReport {
    double hermitian = 0, left = 0, right = 0, parity = 0, real = 0;
    double max() const { return std::max({hermitian, left, right, parity, real}); }
};

inline AmbiguityReport ambiguity_report(const FermionSpace& fs, const cmat& psi) {
    PreparedSpace ps(fs);
    AmbiguityReport r;
    r.hermitian = max_abs(psi - psi.adjoint());
    for (auto& L : ps.left) r.left = std::max(r.left, max_abs(cmat(psi * L - L * psi)));
    for (auto& R : ps.right) r.right = std::max(r.right, max_abs(cmat(psi * R - R * psi)));
    r.parity = max_abs(psi * fs.Gamma + double(fs.s % 2 == 0 ? 1 : -1) * fs.Gamma * psi);
    r.real = max_abs(cmat(psi + double(fs.epsilon_prime()) * ps.conj_right(psi)));
    return r;
}

// U = (h (x) 1) rho(g) J rho(g) J^-1, acting as v (x) m -> h v (x) g m g*
inline cmat transformation_operator(const FermionSpace& fs, const cmat& g, const cmat& h, double tol = 1e-10) {
    const cmat& gam = fs.clifford.chirality;
    const cmat& C = fs.clifford.C.A;
    if (h.rows() != fs.dim_v || g.rows() != fs.algebra.ambient) throw invalid_input("transformation: size mismatch");
    if (max_abs(h * gam - gam * h) > tol) throw invalid_input("transformation: h must commute with the chirality");
    if (max_abs(C * h.conjugate() - h * C) > tol) throw invalid_input("transformation: h must commute with C");
    if (max_abs(h.adjoint() * h - eye(h.rows())) > tol) throw invalid_input("transformation: h not unitary");
    if (max_abs(g.adjoint() * g - eye(g.rows())) > tol) throw invalid_input("transformation: g not unitary");
    PreparedSpace ps(fs);
    const spmat rg = fs.rho(g);
    const spmat hv = kron(sparse_of(h), sparse_eye(fs.block_dim));
    return cmat(hv * spmat(rg * ps.conj_right(rg)));
}

inline DiracOperator apply_transformation(const FermionSpace& fs, const DiracOperator& d, const cmat& g,
                                          const cmat& h) {
    const cmat U = transformation_operator(fs, g, h);
    DiracOperator out{U * d.matrix * U.adjoint(), {}};
    for (auto t : d.terms) {
        const cmat w = t.omega.size() ? t.omega : fs.clifford.word(t.omega_word);
        t.omega = h * w * h.adjoint();
        Index off = 0;
        for (auto& k : t.K) {
            const cmat gb = g.block(off, off, k.rows(), k.cols());
            k = gb * k * gb.adjoint();
            off += k.rows();
        }
        out.terms.push_back(std::move(t));
    }
    return out;
}

inline DiracOperator modified_dirac(const FermionSpace& fs, const DiracOperator& d) {
    if (fs.s != 2 && fs.s != 6) throw invalid_input("modified_dirac: only defined for s = 2 or 6");
    return {-iu * fs.Gamma * d.matrix, {}};
}

}  // namespace ncg
