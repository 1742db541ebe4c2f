#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace ncg {

using cplx = std::complex<double>;
using cmat = Eigen::MatrixXcd;
using cvec = Eigen::VectorXcd;
using rmat = Eigen::MatrixXd;
using rvec = Eigen::VectorXd;
using spmat = Eigen::SparseMatrix<cplx>;
using Index = Eigen::Index;

inline constexpr cplx iu{0.0, 1.0};

struct invalid_input : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// i^k for integer k
inline cplx ipow(int k) {
    switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

inline int mod8(int s) { return ((s % 8) + 8) % 8; }

inline cmat eye(Index n) { return cmat::Identity(n, n); }

inline cmat kron(const cmat& a, const cmat& b) {
    cmat out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

inline spmat sparse_of(const cmat& m, double drop = 0.0) {
    std::vector<Eigen::Triplet<cplx>> t;
    for (Index j = 0; j < m.cols(); ++j)
        for (Index i = 0; i < m.rows(); ++i)
            if (std::abs(m(i, j)) > drop) t.emplace_back(i, j, m(i, j));
    spmat s(m.rows(), m.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

inline spmat sparse_eye(Index n) {
    spmat s(n, n);
    s.setIdentity();
    return s;
}

inline spmat kron(const spmat& a, const spmat& b) {
    std::vector<Eigen::Triplet<cplx>> t;
    t.reserve(static_cast<size_t>(a.nonZeros() * b.nonZeros()));
    for (Index ka = 0; ka < a.outerSize(); ++ka)
        for (spmat::InnerIterator ia(a, ka); ia; ++ia)
            for (Index kb = 0; kb < b.outerSize(); ++kb)
                for (spmat::InnerIterator ib(b, kb); ib; ++ib)
                    t.emplace_back(ia.row() * b.rows() + ib.row(),
                                   ia.col() * b.cols() + ib.col(),
                                   ia.value() * ib.value());
    spmat s(a.rows() * b.rows(), a.cols() * b.cols());
    s.setFromTriplets(t.begin(), t.end());
    return s;
}

inline double max_abs(const cmat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

inline double max_abs(const spmat& m) {
    double r = 0.0;
    for (Index k = 0; k < m.outerSize(); ++k)
        for (spmat::InnerIterator it(m, k); it; ++it) r = std::max(r, std::abs(it.value()));
    return r;
}

inline cmat comm(const cmat& a, const cmat& b) { return a * b - b * a; }
inline cmat acomm(const cmat& a, const cmat& b) { return a * b + b * a; }

// Matrix units, row-major vectorisation: entry (i,j) of an r x c matrix sits at i*c + j.
inline cmat unit(Index r, Index c, Index i, Index j) {
    cmat e = cmat::Zero(r, c);
    e(i, j) = 1.0;
    return e;
}

// m -> a m b as an operator on row-major vectorised r x c matrices
inline cmat sandwich(const cmat& a, const cmat& b) { return kron(a, b.transpose()); }

inline cmat ad(const cmat& l) { return sandwich(l, eye(l.cols())) - sandwich(eye(l.rows()), l); }

// Antilinear operator v -> A conj(v).
struct AntilinearOp {
    cmat A;

    Index dim() const { return A.rows(); }
    cvec apply(const cvec& v) const { return A * v.conjugate(); }

    // J K J^-1 for a linear K
    cmat conj_op(const cmat& K) const { return A * K.conjugate() * A.inverse(); }
    // J^-1 K J
    cmat conj_op_inv(const cmat& K) const { return (A.inverse() * K * A).conjugate(); }
    // J^2 as a linear operator
    cmat square() const { return A * A.conjugate(); }
    double unitarity_defect() const { return max_abs(A * A.adjoint() - eye(A.rows())); }
};

inline cmat compose(const AntilinearOp& a, const AntilinearOp& b) { return a.A * b.A.conjugate(); }
// a after the linear map l
inline AntilinearOp compose(const AntilinearOp& a, const cmat& l) { return {a.A * l.conjugate()}; }
// the linear map l after a
inline AntilinearOp compose(const cmat& l, const AntilinearOp& a) { return {l * a.A}; }
inline AntilinearOp tensor(const AntilinearOp& a, const AntilinearOp& b) { return {kron(a.A, b.A)}; }
inline AntilinearOp inverse(const AntilinearOp& a) { return {a.A.inverse().conjugate()}; }

// Builds the matrix of an antilinear map given as a function on vectors.
template <class F>
AntilinearOp antilinear_from_map(F&& f, Index n) {
    AntilinearOp out{cmat(n, n)};
    for (Index k = 0; k < n; ++k) out.A.col(k) = f(cvec::Unit(n, k));
    return out;
}

// Hermitian eigenvalues in ascending order.
inline rvec eigenvalues_hermitian(const cmat& m) {
    Eigen::SelfAdjointEigenSolver<cmat> es(m, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) throw std::runtime_error("eigensolver failed");
    return es.eigenvalues();
}

struct SpectrumEntry {
    double value;
    int multiplicity;
};

struct Spectrum {
    std::vector<SpectrumEntry> entries;
    double aggregation_tol = 1e-7;

    int total() const {
        int t = 0;
        for (auto& e : entries) t += e.multiplicity;
        return t;
    }

    std::vector<double> expanded() const {
        std::vector<double> v;
        for (auto& e : entries) v.insert(v.end(), static_cast<size_t>(e.multiplicity), e.value);
        return v;
    }

    static Spectrum from_values(std::vector<double> v, double tol = 1e-7) {
        std::sort(v.begin(), v.end());
        Spectrum s;
        s.aggregation_tol = tol;
        size_t i = 0;
        while (i < v.size()) {
            size_t j = i + 1;
            double sum = v[i];
            while (j < v.size() && v[j] - v[j - 1] <= tol) sum += v[j++];
            s.entries.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
            i = j;
        }
        return s;
    }

    static Spectrum of(const cmat& hermitian, double tol = 1e-7) {
        rvec e = eigenvalues_hermitian(hermitian);
        return from_values(std::vector<double>(e.data(), e.data() + e.size()), tol);
    }

    Spectrum negated() const {
        Spectrum s = *this;
        std::reverse(s.entries.begin(), s.entries.end());
        for (auto& e : s.entries) e.value = -e.value;
        return s;
    }

    Spectrum merged(const Spectrum& o) const {
        auto a = expanded();
        auto b = o.expanded();
        a.insert(a.end(), b.begin(), b.end());
        return from_values(a, aggregation_tol);
    }

    Spectrum scaled_multiplicity(int k) const {
        Spectrum s = *this;
        for (auto& e : s.entries) e.multiplicity *= k;
        return s;
    }
};

// Same entries, values within tol, identical multiplicities.
inline bool spectra_match(const Spectrum& a, const Spectrum& b, double tol = 1e-9) {
    if (a.entries.size() != b.entries.size()) return false;
    for (size_t i = 0; i < a.entries.size(); ++i) {
        if (a.entries[i].multiplicity != b.entries[i].multiplicity) return false;
        if (std::abs(a.entries[i].value - b.entries[i].value) > tol) return false;
    }
    return true;
}

}  // namespace ncg
