// Copyright 2026 The qdimer Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace qdimer {

using cplx = std::complex<double>;

/// Small square complex matrix, row-major. Sized for gate unitaries and
/// Hamiltonians up to a few qubits; not a general linear-algebra library.
class DenseMatrix {
  public:
    DenseMatrix() = default;
    explicit DenseMatrix(std::size_t dim) : dim_(dim), a_(dim * dim) {}
    DenseMatrix(std::size_t dim, std::vector<cplx> entries)
        : dim_(dim), a_(std::move(entries)) {
        if (a_.size() != dim_ * dim_) {
            throw std::invalid_argument("DenseMatrix: entry count != dim^2");
        }
    }

    static DenseMatrix identity(std::size_t dim) {
        DenseMatrix m(dim);
        for (std::size_t i = 0; i < dim; ++i) {
            m(i, i) = 1.0;
        }
        return m;
    }

    std::size_t dim() const { return dim_; }
    cplx &operator()(std::size_t r, std::size_t c) { return a_[r * dim_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const {
        return a_[r * dim_ + c];
    }
    const std::vector<cplx> &data() const { return a_; }

    DenseMatrix adjoint() const {
        DenseMatrix m(dim_);
        for (std::size_t r = 0; r < dim_; ++r) {
            for (std::size_t c = 0; c < dim_; ++c) {
                m(c, r) = std::conj((*this)(r, c));
            }
        }
        return m;
    }

    cplx trace() const {
        cplx t = 0.0;
        for (std::size_t i = 0; i < dim_; ++i) {
            t += (*this)(i, i);
        }
        return t;
    }

    friend DenseMatrix operator*(const DenseMatrix &lhs, const DenseMatrix &rhs) {
        if (lhs.dim_ != rhs.dim_) {
            throw std::invalid_argument("DenseMatrix multiply: dimension mismatch");
        }
        DenseMatrix out(lhs.dim_);
        const std::size_t n = lhs.dim_;
        for (std::size_t r = 0; r < n; ++r) {
            for (std::size_t k = 0; k < n; ++k) {
                const cplx v = lhs(r, k);
                if (v == cplx{0.0, 0.0}) {
                    continue;
                }
                for (std::size_t c = 0; c < n; ++c) {
                    out(r, c) += v * rhs(k, c);
                }
            }
        }
        return out;
    }

    /// Max |entry| of (this - other).
    double max_abs_diff(const DenseMatrix &other) const {
        if (dim_ != other.dim_) {
            throw std::invalid_argument("DenseMatrix diff: dimension mismatch");
        }
        double m = 0.0;
        for (std::size_t i = 0; i < a_.size(); ++i) {
            m = std::max(m, std::abs(a_[i] - other.a_[i]));
        }
        return m;
    }

    bool is_unitary(double tol = 1e-8) const {
        return (adjoint() * (*this)).max_abs_diff(identity(dim_)) < tol;
    }

  private:
    std::size_t dim_ = 0;
    std::vector<cplx> a_;
};

inline DenseMatrix kron(const DenseMatrix &lhs, const DenseMatrix &rhs) {
    const std::size_t dl = lhs.dim(), dr = rhs.dim();
    DenseMatrix out(dl * dr);
    for (std::size_t i = 0; i < dl; ++i) {
        for (std::size_t j = 0; j < dl; ++j) {
            for (std::size_t k = 0; k < dr; ++k) {
                for (std::size_t l = 0; l < dr; ++l) {
                    out(i * dr + k, j * dr + l) = lhs(i, j) * rhs(k, l);
                }
            }
        }
    }
    return out;
}

struct SymmetricEigen {
    std::vector<double> eigenvalues;           // ascending
    std::vector<std::vector<double>> vectors;  // vectors[k] pairs with eigenvalues[k]
};

/// Cyclic Jacobi diagonalization of a real symmetric matrix (entries must
/// have negligible imaginary part). Plenty for the 4x4 problems here.
inline SymmetricEigen symmetric_eigen(const DenseMatrix &m, double tol = 1e-14) {
    const std::size_t n = m.dim();
    std::vector<std::vector<double>> a(n, std::vector<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            if (std::abs(m(r, c).imag()) > 1e-12) {
                throw std::invalid_argument("symmetric_eigen: matrix is not real");
            }
            a[r][c] = m(r, c).real();
        }
    }
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = r + 1; c < n; ++c) {
            if (std::abs(a[r][c] - a[c][r]) > 1e-10) {
                throw std::invalid_argument("symmetric_eigen: matrix is not symmetric");
            }
        }
    }

    std::vector<std::vector<double>> v(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
        v[i][i] = 1.0;
    }

    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                off += a[p][q] * a[p][q];
            }
        }
        if (off < tol * tol) {
            break;
        }
        for (std::size_t p = 0; p < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                if (std::abs(a[p][q]) < 1e-300) {
                    continue;
                }
                const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v[k][p], vkq = v[k][q];
                    v[k][p] = c * vkp - s * vkq;
                    v[k][q] = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return a[x][x] < a[y][y]; });

    SymmetricEigen out;
    out.eigenvalues.reserve(n);
    out.vectors.reserve(n);
    for (std::size_t k : order) {
        out.eigenvalues.push_back(a[k][k]);
        std::vector<double> col(n);
        for (std::size_t r = 0; r < n; ++r) {
            col[r] = v[r][k];
        }
        out.vectors.push_back(std::move(col));
    }
    return out;
}

}  // namespace qdimer
