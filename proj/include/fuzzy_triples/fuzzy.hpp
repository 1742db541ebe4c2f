#pragma once

#include "triple.hpp"

#include <map>
#include <numeric>

namespace ncg {

namespace detail {

// transpose on row-major vectorised r x c matrices: (i,j) -> (j,i)
inline spmat transpose_perm(Index r, Index c) {
    spmat t(r * c, r * c);
    std::vector<Eigen::Triplet<cplx>> tr;
    for (Index i = 0; i < r; ++i)
        for (Index j = 0; j < c; ++j) tr.emplace_back(j * r + i, i * c + j, 1.0);
    t.setFromTriplets(tr.begin(), tr.end());
    return t;
}

inline spmat block_diag(const spmat& a, const spmat& b) {
    std::vector<Eigen::Triplet<cplx>> t;
    for (Index k = 0; k < a.outerSize(); ++k)
        for (spmat::InnerIterator it(a, k); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
    for (Index k = 0; k < b.outerSize(); ++k)
        for (spmat::InnerIterator it(b, k); it; ++it) t.emplace_back(a.rows() + it.row(), a.cols() + it.col(), it.value());
    spmat s(a.rows() + b.rows(), a.cols() + b.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

inline bool is_chirally_irreducible(const CliffordModule& cm) {
    const Index expect = Index(1) << (cm.n() % 2 == 0 ? cm.n() / 2 : (cm.n() - 1) / 2);
    return cm.dim_v == expect;
}

}  // namespace detail

inline FermionSpace fuzzy_fermion_space(const CliffordModule& cm, int n,
                                        AlgebraKind kind = AlgebraKind::complex_matrices) {
    if (n < 1) throw invalid_input("fuzzy_fermion_space: n must be positive");
    if (!detail::is_chirally_irreducible(cm)) throw invalid_input("fuzzy_fermion_space: module not irreducible");
    FermionSpace fs;
    fs.s = cm.s;
    fs.signs = cm.signs;
    fs.clifford = cm;
    fs.algebra = simple_algebra(kind, n);
    fs.dim_v = cm.dim_v;
    fs.block_dim = Index(n) * n;
    fs.hilbert_dim = fs.dim_v * fs.block_dim;
    const Index dv = fs.dim_v;
    const spmat in = sparse_eye(n), iv = sparse_eye(dv);
    fs.rho = [dv, n, in, iv](const cmat& a) {
        if (a.rows() != n) throw invalid_input("rho: element size mismatch");
        return kron(iv, kron(sparse_of(a), in));
    };
    fs.Gamma = kron(cm.chirality, eye(fs.block_dim));
    fs.J = {kron(cm.C.A, cmat(detail::transpose_perm(n, n)))};
    return fs;
}

inline FermionSpace gen_fuzzy_fermion_space(const CliffordModule& cm, int n1, int n2) {
    if (n1 < 1 || n2 < 1) throw invalid_input("gen_fuzzy_fermion_space: sizes must be positive");
    if (!detail::is_chirally_irreducible(cm)) throw invalid_input("gen_fuzzy_fermion_space: module not irreducible");
    FermionSpace fs;
    fs.s = cm.s;
    fs.signs = cm.signs;
    fs.clifford = cm;
    fs.algebra = direct_sum_algebra(n1, n2);
    fs.dim_v = cm.dim_v;
    fs.block_dim = 2 * Index(n1) * n2;
    fs.hilbert_dim = fs.dim_v * fs.block_dim;
    fs.n1 = n1;
    fs.n2 = n2;
    fs.generalised = true;
    const Index dv = fs.dim_v;
    fs.rho = [dv, n1, n2](const cmat& a) {
        if (a.rows() != n1 + n2) throw invalid_input("rho: element size mismatch");
        const spmat a1 = sparse_of(a.topLeftCorner(n1, n1)), a2 = sparse_of(a.bottomRightCorner(n2, n2));
        return kron(sparse_eye(dv), detail::block_diag(kron(a1, sparse_eye(n2)), kron(a2, sparse_eye(n1))));
    };
    fs.Gamma = kron(cm.chirality, eye(fs.block_dim));
    // (m1, m2) -> (m2*, m1*)
    const Index h = Index(n1) * n2;
    cmat sw = cmat::Zero(2 * h, 2 * h);
    for (Index i = 0; i < n1; ++i)
        for (Index j = 0; j < n2; ++j) {
            sw(i * n2 + j, h + j * n1 + i) = 1.0;
            sw(h + j * n1 + i, i * n2 + j) = 1.0;
        }
    fs.J = {kron(cm.C.A, sw)};
    return fs;
}

// delta in K m + delta m K* for a word of length r
inline int term_delta(const FermionSpace& fs, size_t word_length) {
    const int ep = fs.epsilon_prime();
    return (ep == 1 || word_length % 2 == 1) ? 1 : -1;
}

inline TermFlavor flavor_for(bool k_hermitian, int delta) {
    if (delta == 1) return k_hermitian ? TermFlavor::anticommutator : TermFlavor::commutator;
    return k_hermitian ? TermFlavor::commutator_hermitian : TermFlavor::anticommutator_antihermitian;
}

// +1 Hermitian, -1 anti-Hermitian, 0 neither
inline int hermiticity(const cmat& m, double tol = 1e-12) {
    if (max_abs(m - m.adjoint()) <= tol) return 1;
    if (max_abs(m + m.adjoint()) <= tol) return -1;
    return 0;
}

// m -> K m + delta m K* on the block space of fs
inline cmat block_action(const FermionSpace& fs, const std::vector<cmat>& K, int delta) {
    const double d = delta;
    if (!fs.generalised) {
        if (K.size() != 1) throw invalid_input("fuzzy term needs one K block");
        const Index n = K[0].rows();
        if (n * n != fs.block_dim) throw invalid_input("K size mismatch");
        return kron(K[0], eye(n)) + d * kron(eye(n), K[0].conjugate());
    }
    if (K.size() != 2) throw invalid_input("generalised term needs two K blocks");
    const Index n1 = fs.n1, n2 = fs.n2;
    if (K[0].rows() != n1 || K[1].rows() != n2) throw invalid_input("K size mismatch");
    cmat out = cmat::Zero(fs.block_dim, fs.block_dim);
    out.topLeftCorner(n1 * n2, n1 * n2) = kron(K[0], eye(n2)) + d * kron(eye(n1), K[1].conjugate());
    out.bottomRightCorner(n1 * n2, n1 * n2) = kron(K[1], eye(n1)) + d * kron(eye(n2), K[0].conjugate());
    return out;
}

inline cmat term_omega(const FermionSpace& fs, const DiracTerm& t) {
    return t.omega.size() ? t.omega : fs.clifford.word(t.omega_word);
}

inline void validate_term(const FermionSpace& fs, const DiracTerm& t) {
    for (size_t i = 1; i < t.omega_word.size(); ++i)
        if (t.omega_word[i] <= t.omega_word[i - 1]) throw invalid_input("omega word must be strictly increasing");
    for (int a : t.omega_word)
        if (a < 0 || a >= fs.clifford.n()) throw invalid_input("omega word index out of range");
    if (fs.s % 2 == 0 && t.omega_word.size() % 2 == 0) throw invalid_input("even s needs odd omega words");
    const int ho = hermiticity(term_omega(fs, t));
    int hk = 0;
    for (size_t b = 0; b < t.K.size(); ++b) {
        const int h = hermiticity(t.K[b]);
        if (h == 0 && max_abs(t.K[b]) > 0) throw invalid_input("K must be Hermitian or anti-Hermitian");
        if (h != 0 && max_abs(t.K[b]) > 0) {
            if (hk != 0 && h != hk) throw invalid_input("K blocks of mixed hermiticity");
            hk = h;
        }
    }
    if (hk == 0) return;
    if (ho != hk) throw invalid_input("omega and K hermiticity differ");
    if (t.flavor != flavor_for(hk == 1, term_delta(fs, t.omega_word.size())))
        throw invalid_input("term flavor inconsistent with the sign eps'");
}

inline DiracOperator assemble_dirac(const FermionSpace& fs, const std::vector<DiracTerm>& terms) {
    DiracOperator d{cmat::Zero(fs.hilbert_dim, fs.hilbert_dim), terms};
    for (auto& t : terms) {
        validate_term(fs, t);
        d.matrix += kron(term_omega(fs, t), block_action(fs, t.K, term_delta(fs, t.omega_word.size())));
    }
    return d;
}

// strictly increasing words: odd lengths for even s, lengths <= (n-1)/2 for odd s
inline std::vector<std::vector<int>> omega_words(const CliffordModule& cm) {
    const int n = cm.n();
    std::vector<std::vector<int>> out;
    for (int len = 0; len <= n; ++len) {
        if (cm.s % 2 == 0 && len % 2 == 0) continue;
        if (cm.s % 2 == 1 && 2 * len > n - 1) continue;
        std::vector<int> w(static_cast<size_t>(len));
        std::function<void(int, int)> rec = [&](int pos, int start) {
            if (pos == len) {
                out.push_back(w);
                return;
            }
            for (int a = start; a < n; ++a) {
                w[static_cast<size_t>(pos)] = a;
                rec(pos + 1, a + 1);
            }
        };
        rec(0, 0);
    }
    return out;
}

// traceless Hermitian basis followed by the identity
inline std::vector<cmat> hermitian_basis(int n) {
    std::vector<cmat> b;
    for (int k = 0; k < n; ++k)
        for (int l = k + 1; l < n; ++l) {
            b.push_back(unit(n, n, k, l) + unit(n, n, l, k));
            b.push_back(iu * (unit(n, n, k, l) - unit(n, n, l, k)));
        }
    for (int k = 0; k + 1 < n; ++k) b.push_back(unit(n, n, k, k) - unit(n, n, k + 1, k + 1));
    b.push_back(eye(n));
    return b;
}

struct GeometryBasis {
    const FermionSpace* fermion_space = nullptr;
    std::vector<DiracOperator> basis;
    int dim_g = 0;

    DiracOperator combine(const rvec& x) const {
        DiracOperator d{cmat::Zero(fermion_space->hilbert_dim, fermion_space->hilbert_dim), {}};
        for (Index i = 0; i < x.size(); ++i) d.matrix += x(i) * basis[static_cast<size_t>(i)].matrix;
        return d;
    }
};

inline std::vector<std::vector<cmat>> k_basis(const FermionSpace& fs, bool hermitian) {
    const cplx ph = hermitian ? cplx(1) : iu;
    std::vector<std::vector<cmat>> out;
    if (!fs.generalised) {
        for (auto& h : hermitian_basis(static_cast<int>(fs.algebra.ambient))) out.push_back({ph * h});
        return out;
    }
    const int n1 = fs.n1, n2 = fs.n2;
    auto h1 = hermitian_basis(n1), h2 = hermitian_basis(n2);
    for (size_t i = 0; i + 1 < h1.size(); ++i) out.push_back({ph * h1[i], cmat::Zero(n2, n2)});
    for (size_t i = 0; i + 1 < h2.size(); ++i) out.push_back({cmat::Zero(n1, n1), ph * h2[i]});
    out.push_back({ph * eye(n1), ph * eye(n2)});
    out.push_back({ph * eye(n1), -ph * eye(n2)});
    return out;
}

inline GeometryBasis geometry_basis(const FermionSpace& fs) {
    GeometryBasis g;
    g.fermion_space = &fs;
    for (auto& w : omega_words(fs.clifford)) {
        const cmat om = fs.clifford.word(w);
        const int ho = hermiticity(om);
        const int delta = term_delta(fs, w.size());
        for (auto& K : k_basis(fs, ho == 1)) {
            const cmat X = block_action(fs, K, delta);
            if (max_abs(X) < 1e-14) continue;
            DiracTerm t{w, cmat(), K, flavor_for(ho == 1, delta)};
            g.basis.push_back({kron(om, X), {t}});
        }
    }
    g.dim_g = static_cast<int>(g.basis.size());
    return g;
}

namespace detail {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(static_cast<size_t>(n)) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

inline spmat pruned(const spmat& m, double drop = 1e-13) {
    spmat out = m;
    out.prune([drop](Index, Index, const cplx& v) { return std::abs(v) > drop; });
    return out;
}

// real null space of the columns of m (rows >= 1)
inline rmat null_space(const rmat& m, double rel_tol) {
    const Index k = m.cols();
    rmat r = m;
    if (m.rows() > k) {
        Eigen::HouseholderQR<rmat> qr(m);
        r = qr.matrixQR().topRows(k).triangularView<Eigen::Upper>();
    }
    Eigen::BDCSVD<rmat> svd(r, Eigen::ComputeFullV);
    const rvec& sv = svd.singularValues();
    const double top = sv.size() ? sv(0) : 0.0;
    Index rank = 0;
    for (Index i = 0; i < sv.size(); ++i)
        if (sv(i) > rel_tol * top) ++rank;
    return svd.matrixV().rightCols(k - rank);
}

inline std::vector<spmat> restrict_basis(const std::vector<spmat>& basis,
                                         const std::function<spmat(const spmat&)>& f, double rel_tol) {
    const int nb = static_cast<int>(basis.size());
    std::vector<spmat> img(basis.size());
    std::vector<spmat> out;
    UnionFind uf(nb);
    std::map<std::pair<Index, Index>, int> owner;
    for (int i = 0; i < nb; ++i) {
        img[i] = pruned(f(basis[i]));
        for (Index k = 0; k < img[i].outerSize(); ++k)
            for (spmat::InnerIterator it(img[i], k); it; ++it) {
                auto [pos, fresh] = owner.emplace(std::make_pair(it.row(), it.col()), i);
                if (!fresh) uf.unite(i, pos->second);
            }
    }
    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < nb; ++i) {
        if (img[i].nonZeros() == 0) out.push_back(basis[i]);
        else groups[uf.find(i)].push_back(i);
    }
    for (auto& [root, members] : groups) {
        std::map<std::pair<Index, Index>, Index> rows;
        for (int i : members)
            for (Index k = 0; k < img[i].outerSize(); ++k)
                for (spmat::InnerIterator it(img[i], k); it; ++it) rows.emplace(std::make_pair(it.row(), it.col()), 0);
        Index r = 0;
        for (auto& [key, idx] : rows) idx = r++;
        rmat M = rmat::Zero(2 * r, static_cast<Index>(members.size()));
        for (size_t c = 0; c < members.size(); ++c) {
            const spmat& im = img[members[c]];
            for (Index k = 0; k < im.outerSize(); ++k)
                for (spmat::InnerIterator it(im, k); it; ++it) {
                    const Index row = rows[{it.row(), it.col()}];
                    M(2 * row, static_cast<Index>(c)) = it.value().real();
                    M(2 * row + 1, static_cast<Index>(c)) = it.value().imag();
                }
        }
        const rmat ns = null_space(M, rel_tol);
        for (Index v = 0; v < ns.cols(); ++v) {
            spmat acc(basis[0].rows(), basis[0].cols());
            for (size_t c = 0; c < members.size(); ++c)
                if (std::abs(ns(static_cast<Index>(c), v)) > 1e-15)
                    acc += cplx(ns(static_cast<Index>(c), v)) * basis[members[c]];
            out.push_back(pruned(acc, 1e-14));
        }
    }
    return out;
}

inline bool is_diagonal(const spmat& m) {
    for (Index k = 0; k < m.outerSize(); ++k)
        for (spmat::InnerIterator it(m, k); it; ++it)
            if (it.row() != it.col()) return false;
    return true;
}

}  // namespace detail

// Real basis of all Hermitian D obeying axioms 11-13, found as a null space without using the term formulas.
inline std::vector<cmat> geometry_oracle_basis(const FermionSpace& fs, double rel_tol = 1e-9) {
    const Index N = fs.hilbert_dim;
    if (N > 64) throw invalid_input("geometry_dim_oracle: hilbert_dim above 64");
    std::vector<spmat> basis;
    for (Index i = 0; i < N; ++i)
        for (Index j = i; j < N; ++j) {
            std::vector<Eigen::Triplet<cplx>> t;
            if (i == j) t.emplace_back(i, i, 1.0);
            spmat m(N, N);
            if (i == j) {
                m.setFromTriplets(t.begin(), t.end());
                basis.push_back(m);
                continue;
            }
            t = {{int(i), int(j), 1.0}, {int(j), int(i), 1.0}};
            m.setFromTriplets(t.begin(), t.end());
            basis.push_back(m);
            t = {{int(i), int(j), iu}, {int(j), int(i), -iu}};
            spmat m2(N, N);
            m2.setFromTriplets(t.begin(), t.end());
            basis.push_back(m2);
        }

    PreparedSpace ps(fs);
    const spmat G = sparse_of(fs.Gamma);
    const double sigma = fs.s % 2 == 0 ? 1.0 : -1.0;
    const double ep = fs.epsilon_prime();
    const spmat A = ps.A;

    std::vector<spmat> L, R;
    for (auto& g : fs.algebra.generators) {
        L.push_back(fs.rho(g));
        R.push_back(ps.conj_right(fs.rho(g)));
    }
    using F = std::function<spmat(const spmat&)>;
    std::vector<F> cheap, rest;
    for (size_t a = 0; a < L.size(); ++a)
        for (size_t b = 0; b < R.size(); ++b) {
            F f = [&, a, b](const spmat& D) {
                spmat X = D * L[a] - L[a] * D;
                return spmat(X * R[b] - R[b] * X);
            };
            (detail::is_diagonal(L[a]) && detail::is_diagonal(R[b]) ? cheap : rest).push_back(f);
        }
    cheap.push_back([&](const spmat& D) { return spmat(D * G + sigma * G * D); });
    cheap.push_back([&](const spmat& D) { return spmat(A * spmat(D.conjugate()) - ep * D * A); });
    for (auto& f : cheap) basis = detail::restrict_basis(basis, f, rel_tol);
    for (auto& f : rest) basis = detail::restrict_basis(basis, f, rel_tol);

    std::vector<cmat> out;
    for (auto& b : basis) out.push_back(cmat(b));
    return out;
}

inline int geometry_dim_oracle(const FermionSpace& fs, double rel_tol = 1e-9) {
    return static_cast<int>(geometry_oracle_basis(fs, rel_tol).size());
}

}  // namespace ncg
