// Self-contained dense complex linear algebra for small dimensions:
// Hermitian eigendecomposition (cyclic Jacobi), matrix functions on the
// spectrum, norms, tensor products and partial traces.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace privamp::qmat {

using cplx = std::complex<double>;

inline constexpr std::size_t kMaxDim = 64;
/// Single global rank-decision tolerance: eigenvalues below
/// kSupportCutoff * max|lambda| count as zero.
inline constexpr double kSupportCutoff = 1e-10;

class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cplx{0.0, 0.0}) {}

    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<cplx> entries)
        : rows_(rows), cols_(cols), a_(std::move(entries)) {
        if (a_.size() != rows_ * cols_)
            throw std::invalid_argument("entry count does not match shape");
        for (const cplx& v : a_)
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw std::invalid_argument("non-finite matrix entry");
    }

    static ComplexMatrix identity(std::size_t d) {
        ComplexMatrix m(d, d);
        for (std::size_t i = 0; i < d; ++i) m(i, i) = 1.0;
        return m;
    }

    static ComplexMatrix diagonal(const std::vector<double>& d) {
        ComplexMatrix m(d.size(), d.size());
        for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    cplx& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    const cplx& operator()(std::size_t i, std::size_t j) const {
        return a_[i * cols_ + j];
    }

    const std::vector<cplx>& data() const { return a_; }

    ComplexMatrix dagger() const {
        ComplexMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j)
                m(j, i) = std::conj((*this)(i, j));
        return m;
    }

    cplx trace() const {
        if (!is_square()) throw std::invalid_argument("trace of non-square matrix");
        cplx t = 0.0;
        for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
        return t;
    }

    double max_abs() const {
        double m = 0.0;
        for (const cplx& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    ComplexMatrix& operator+=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }
    ComplexMatrix& operator-=(const ComplexMatrix& o) {
        check_same_shape(o);
        for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }
    ComplexMatrix& operator*=(cplx s) {
        for (cplx& v : a_) v *= s;
        return *this;
    }

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) {
        a += b;
        return a;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) {
        a -= b;
        return a;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) {
        a *= s;
        return a;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
        a *= s;
        return a;
    }

    friend ComplexMatrix operator*(const ComplexMatrix& a,
                                   const ComplexMatrix& b) {
        if (a.cols_ != b.rows_)
            throw std::invalid_argument("matrix product shape mismatch");
        ComplexMatrix c(a.rows_, b.cols_);
        for (std::size_t i = 0; i < a.rows_; ++i)
            for (std::size_t k = 0; k < a.cols_; ++k) {
                cplx av = a(i, k);
                if (av == cplx{0.0, 0.0}) continue;
                for (std::size_t j = 0; j < b.cols_; ++j)
                    c(i, j) += av * b(k, j);
            }
        return c;
    }

    std::vector<cplx> apply(const std::vector<cplx>& v) const {
        if (v.size() != cols_) throw std::invalid_argument("vector size mismatch");
        std::vector<cplx> out(rows_, cplx{0.0, 0.0});
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
        return out;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::vector<cplx> a_;

    void check_same_shape(const ComplexMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }
};

/// Square matrix that is Hermitian up to 1e-12 in max norm at construction
/// and exactly Hermitian afterwards (symmetrized).
class HermitianOperator {
public:
    HermitianOperator() = default;

    explicit HermitianOperator(const ComplexMatrix& m) {
        if (!m.is_square()) throw std::invalid_argument("not square");
        double asym = 0.0;
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                asym = std::max(asym,
                                std::abs(m(i, j) - std::conj(m(j, i))));
        if (asym > 1e-12)
            throw std::invalid_argument("matrix is not Hermitian");
        m_ = symmetrize(m);
    }

    /// Force-symmetrizes (M + M^dagger)/2 without the tolerance check; for
    /// internally assembled products that are Hermitian up to roundoff.
    static HermitianOperator symmetrized(const ComplexMatrix& m) {
        if (!m.is_square()) throw std::invalid_argument("not square");
        HermitianOperator h;
        h.m_ = symmetrize(m);
        return h;
    }

    static HermitianOperator identity(std::size_t d) {
        return HermitianOperator(ComplexMatrix::identity(d));
    }
    static HermitianOperator diagonal(const std::vector<double>& d) {
        return HermitianOperator(ComplexMatrix::diagonal(d));
    }
    static HermitianOperator zero(std::size_t d) {
        return HermitianOperator(ComplexMatrix(d, d));
    }

    std::size_t dim() const { return m_.rows(); }
    const ComplexMatrix& matrix() const { return m_; }
    const cplx& operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

    double trace_real() const { return m_.trace().real(); }

    HermitianOperator& operator+=(const HermitianOperator& o) {
        m_ += o.m_;
        return *this;
    }
    HermitianOperator& operator-=(const HermitianOperator& o) {
        m_ -= o.m_;
        return *this;
    }
    HermitianOperator& operator*=(double s) {
        m_ *= cplx{s, 0.0};
        return *this;
    }
    friend HermitianOperator operator+(HermitianOperator a,
                                       const HermitianOperator& b) {
        a += b;
        return a;
    }
    friend HermitianOperator operator-(HermitianOperator a,
                                       const HermitianOperator& b) {
        a -= b;
        return a;
    }
    friend HermitianOperator operator*(HermitianOperator a, double s) {
        a *= s;
        return a;
    }
    friend HermitianOperator operator*(double s, HermitianOperator a) {
        a *= s;
        return a;
    }

private:
    ComplexMatrix m_;

    static ComplexMatrix symmetrize(const ComplexMatrix& m) {
        ComplexMatrix s(m.rows(), m.cols());
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j)
                s(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
        return s;
    }
};

struct EigResult {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // columns are eigenvectors, unitary
};

/// Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
/// Off-diagonal mass is annihilated with exact 2x2 unitaries until the
/// largest off-diagonal entry falls below 1e-14 of the matrix scale;
/// throws if 100 sweeps do not converge.
inline EigResult herm_eig(const HermitianOperator& h) {
    std::size_t d = h.dim();
    if (d > kMaxDim) throw std::invalid_argument("dimension above limit");
    ComplexMatrix a = h.matrix();
    ComplexMatrix v = ComplexMatrix::identity(d);
    if (d == 0) return EigResult{{}, v};

    double scale = std::max(a.max_abs(), 1e-300);
    const double stop = 1e-14 * scale;
    const int max_sweeps = 100;
    bool converged = false;
    double off = 0.0;

    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        off = 0.0;
        for (std::size_t p = 0; p + 1 < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q)
                off = std::max(off, std::abs(a(p, q)));
        if (off <= stop) {
            converged = true;
            break;
        }
        for (std::size_t p = 0; p + 1 < d; ++p) {
            for (std::size_t q = p + 1; q < d; ++q) {
                cplx beta = a(p, q);
                if (std::abs(beta) <= stop * 1e-2) continue;
                double alpha = a(p, p).real();
                double gamma = a(q, q).real();
                double dd = 0.5 * (alpha - gamma);
                double rad = std::hypot(dd, std::abs(beta));
                // eigenvector basis of the 2x2 block [[alpha, beta],[conj, gamma]]
                double t = (dd >= 0.0)
                               ? std::norm(beta) / (rad + dd)  // rad - dd, stable
                               : rad - dd;
                cplx c1 = -t;            // column for the lower eigenvalue
                cplx c2 = std::conj(beta);
                double n1 = std::sqrt(std::norm(c1) + std::norm(c2));
                if (n1 == 0.0) continue;
                cplx u11 = c1 / n1, u21 = c2 / n1;
                // second column: orthonormal complement
                cplx u12 = -std::conj(u21), u22 = std::conj(u11);

                // A <- J^dagger A J on rows/cols p,q
                for (std::size_t i = 0; i < d; ++i) {
                    cplx ap = a(i, p), aq = a(i, q);
                    a(i, p) = ap * u11 + aq * u21;
                    a(i, q) = ap * u12 + aq * u22;
                }
                for (std::size_t j = 0; j < d; ++j) {
                    cplx ap = a(p, j), aq = a(q, j);
                    a(p, j) = std::conj(u11) * ap + std::conj(u21) * aq;
                    a(q, j) = std::conj(u12) * ap + std::conj(u22) * aq;
                }
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = cplx{a(p, p).real(), 0.0};
                a(q, q) = cplx{a(q, q).real(), 0.0};
                for (std::size_t i = 0; i < d; ++i) {
                    cplx vp = v(i, p), vq = v(i, q);
                    v(i, p) = vp * u11 + vq * u21;
                    v(i, q) = vp * u12 + vq * u22;
                }
            }
        }
    }
    if (!converged) {
        for (std::size_t p = 0; p + 1 < d; ++p)
            for (std::size_t q = p + 1; q < d; ++q)
                off = std::max(off, std::abs(a(p, q)));
        if (off > stop)
            throw std::runtime_error(
                "eigensolver did not converge, residual " + std::to_string(off));
    }

    std::vector<std::size_t> order(d);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });
    EigResult r;
    r.values.resize(d);
    r.vectors = ComplexMatrix(d, d);
    for (std::size_t j = 0; j < d; ++j) {
        r.values[j] = a(order[j], order[j]).real();
        for (std::size_t i = 0; i < d; ++i) r.vectors(i, j) = v(i, order[j]);
    }
    return r;
}

enum class MatFunc { Sqrt, InvSqrtSupport, SupportProjector, Abs };

/// Applies f to the spectrum.  Eigenvalues below kSupportCutoff * max|lambda|
/// are treated as zero (outside the support).
inline HermitianOperator mat_func(const HermitianOperator& h, MatFunc f) {
    EigResult e = herm_eig(h);
    double lmax = 0.0;
    for (double x : e.values) lmax = std::max(lmax, std::abs(x));
    double cutoff = kSupportCutoff * lmax;

    if (f == MatFunc::Sqrt) {
        for (double x : e.values)
            if (x < -1e-8)
                throw std::invalid_argument("not positive");
    }

    std::vector<double> g(e.values.size());
    for (std::size_t i = 0; i < e.values.size(); ++i) {
        double x = e.values[i];
        bool in_support = std::abs(x) > cutoff;
        switch (f) {
            case MatFunc::Sqrt:
                g[i] = (in_support && x > 0.0) ? std::sqrt(x) : 0.0;
                break;
            case MatFunc::InvSqrtSupport:
                g[i] = (in_support && x > 0.0) ? 1.0 / std::sqrt(x) : 0.0;
                break;
            case MatFunc::SupportProjector:
                g[i] = in_support ? 1.0 : 0.0;
                break;
            case MatFunc::Abs:
                g[i] = std::abs(x);
                break;
        }
    }
    ComplexMatrix res(h.dim(), h.dim());
    for (std::size_t i = 0; i < h.dim(); ++i)
        for (std::size_t j = 0; j < h.dim(); ++j) {
            cplx s = 0.0;
            for (std::size_t m = 0; m < h.dim(); ++m)
                s += e.vectors(i, m) * g[m] * std::conj(e.vectors(j, m));
            res(i, j) = s;
        }
    return HermitianOperator::symmetrized(res);
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = 1e-12) {
    if (!m.is_square()) return false;
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            if (std::abs(m(i, j) - std::conj(m(j, i))) > tol) return false;
    return true;
}

/// Sum of singular values.  Hermitian inputs go through the spectrum;
/// otherwise singular values come from the Hermitian eigenvalues of M^dagger M.
inline double trace_norm(const ComplexMatrix& m) {
    if (!m.is_square()) throw std::invalid_argument("trace norm of non-square");
    if (is_hermitian(m)) {
        EigResult e = herm_eig(HermitianOperator::symmetrized(m));
        double s = 0.0;
        for (double x : e.values) s += std::abs(x);
        return s;
    }
    ComplexMatrix gram = m.dagger() * m;
    EigResult e = herm_eig(HermitianOperator::symmetrized(gram));
    double lmax = 0.0;
    for (double x : e.values) lmax = std::max(lmax, std::abs(x));
    double cutoff = kSupportCutoff * lmax;
    double s = 0.0;
    for (double x : e.values)
        if (x > cutoff) s += std::sqrt(x);
    return s;
}

inline double trace_norm(const HermitianOperator& h) {
    EigResult e = herm_eig(h);
    double s = 0.0;
    for (double x : e.values) s += std::abs(x);
    return s;
}

/// Largest absolute eigenvalue.
inline double op_norm(const HermitianOperator& h) {
    EigResult e = herm_eig(h);
    double s = 0.0;
    for (double x : e.values) s = std::max(s, std::abs(x));
    return s;
}

inline ComplexMatrix tensor(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) {
            cplx av = a(i, j);
            if (av == cplx{0.0, 0.0}) continue;
            for (std::size_t k = 0; k < b.rows(); ++k)
                for (std::size_t l = 0; l < b.cols(); ++l)
                    c(i * b.rows() + k, j * b.cols() + l) = av * b(k, l);
        }
    return c;
}

inline HermitianOperator tensor(const HermitianOperator& a,
                                const HermitianOperator& b) {
    return HermitianOperator::symmetrized(tensor(a.matrix(), b.matrix()));
}

enum class Subsystem { A, B };

/// Partial trace of an operator on a d_A x d_B product space.
inline HermitianOperator partial_trace(const HermitianOperator& m,
                                       std::size_t d_a, std::size_t d_b,
                                       Subsystem keep) {
    if (m.dim() != d_a * d_b)
        throw std::invalid_argument("dimensions do not match the matrix");
    if (keep == Subsystem::A) {
        ComplexMatrix out(d_a, d_a);
        for (std::size_t i = 0; i < d_a; ++i)
            for (std::size_t j = 0; j < d_a; ++j) {
                cplx s = 0.0;
                for (std::size_t b = 0; b < d_b; ++b)
                    s += m(i * d_b + b, j * d_b + b);
                out(i, j) = s;
            }
        return HermitianOperator::symmetrized(out);
    }
    ComplexMatrix out(d_b, d_b);
    for (std::size_t i = 0; i < d_b; ++i)
        for (std::size_t j = 0; j < d_b; ++j) {
            cplx s = 0.0;
            for (std::size_t a = 0; a < d_a; ++a)
                s += m(a * d_b + i, a * d_b + j);
            out(i, j) = s;
        }
    return HermitianOperator::symmetrized(out);
}

inline double min_eigenvalue(const HermitianOperator& h) {
    EigResult e = herm_eig(h);
    return e.values.empty() ? 0.0 : e.values.front();
}

inline double max_eigenvalue(const HermitianOperator& h) {
    EigResult e = herm_eig(h);
    return e.values.empty() ? 0.0 : e.values.back();
}

}  // namespace privamp::qmat
