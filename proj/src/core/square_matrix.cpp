#include "maxlab/core.hpp"
#include "maxlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace maxlab {

SquareMatrix::SquareMatrix(int dim) : dim_(dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw ConfigError("SquareMatrix dimension must be 1, 2 or 3");
    }
}

SquareMatrix SquareMatrix::identity(int dim) {
    SquareMatrix m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
}

SquareMatrix SquareMatrix::diagonal(std::initializer_list<double> entries) {
    SquareMatrix m(static_cast<int>(entries.size()));
    int i = 0;
    for (double v : entries) {
        m(i, i) = v;
        ++i;
    }
    return m;
}

SquareMatrix SquareMatrix::from_rows(int dim, std::initializer_list<double> entries) {
    if (static_cast<int>(entries.size()) != dim * dim) {
        throw ConfigError("SquareMatrix::from_rows: expected dim*dim entries");
    }
    SquareMatrix m(dim);
    int k = 0;
    for (double v : entries) {
        m(k / dim, k % dim) = v;
        ++k;
    }
    return m;
}

SquareMatrix& SquareMatrix::operator+=(const SquareMatrix& o) {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) (*this)(i, j) += o(i, j);
    return *this;
}

SquareMatrix& SquareMatrix::operator-=(const SquareMatrix& o) {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) (*this)(i, j) -= o(i, j);
    return *this;
}

SquareMatrix& SquareMatrix::operator*=(double s) {
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) (*this)(i, j) *= s;
    return *this;
}

SquareMatrix SquareMatrix::transpose() const {
    SquareMatrix t(dim_);
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
    return t;
}

SquareMatrix SquareMatrix::symmetrized() const {
    SquareMatrix s(dim_);
    for (int i = 0; i < dim_; ++i) {
        s(i, i) = (*this)(i, i);
        for (int j = i + 1; j < dim_; ++j) {
            const double v = 0.5 * ((*this)(i, j) + (*this)(j, i));
            s(i, j) = v;
            s(j, i) = v;
        }
    }
    return s;
}

double SquareMatrix::trace() const {
    double t = 0.0;
    for (int i = 0; i < dim_; ++i) t += (*this)(i, i);
    return t;
}

double SquareMatrix::determinant() const {
    const auto& m = *this;
    switch (dim_) {
        case 1:
            return m(0, 0);
        case 2:
            return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
        default:
            return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
                   m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
                   m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
    }
}

SquareMatrix SquareMatrix::inverse() const {
    const double det = determinant();
    const double scale = std::pow(std::max(max_abs(), 1e-300), dim_);
    if (!std::isfinite(det) || std::abs(det) <= 1e-14 * scale) {
        throw DomainError("SquareMatrix::inverse: singular matrix");
    }
    const auto& m = *this;
    SquareMatrix inv(dim_);
    switch (dim_) {
        case 1:
            inv(0, 0) = 1.0 / m(0, 0);
            break;
        case 2:
            inv(0, 0) = m(1, 1) / det;
            inv(0, 1) = -m(0, 1) / det;
            inv(1, 0) = -m(1, 0) / det;
            inv(1, 1) = m(0, 0) / det;
            break;
        default:
            inv(0, 0) = (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) / det;
            inv(0, 1) = (m(0, 2) * m(2, 1) - m(0, 1) * m(2, 2)) / det;
            inv(0, 2) = (m(0, 1) * m(1, 2) - m(0, 2) * m(1, 1)) / det;
            inv(1, 0) = (m(1, 2) * m(2, 0) - m(1, 0) * m(2, 2)) / det;
            inv(1, 1) = (m(0, 0) * m(2, 2) - m(0, 2) * m(2, 0)) / det;
            inv(1, 2) = (m(0, 2) * m(1, 0) - m(0, 0) * m(1, 2)) / det;
            inv(2, 0) = (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0)) / det;
            inv(2, 1) = (m(0, 1) * m(2, 0) - m(0, 0) * m(2, 1)) / det;
            inv(2, 2) = (m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0)) / det;
            break;
    }
    return inv;
}

double SquareMatrix::norm_inf() const {
    double best = 0.0;
    for (int i = 0; i < dim_; ++i) {
        double row = 0.0;
        for (int j = 0; j < dim_; ++j) row += std::abs((*this)(i, j));
        best = std::max(best, row);
    }
    return best;
}

double SquareMatrix::max_abs() const {
    double best = 0.0;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j) best = std::max(best, std::abs((*this)(i, j)));
    return best;
}

std::array<double, SquareMatrix::kMaxDim> SquareMatrix::symmetric_eigenvalues() const {
    std::array<double, kMaxDim> ev{};
    const SquareMatrix s = symmetrized();
    if (dim_ == 1) {
        ev[0] = s(0, 0);
        return ev;
    }
    if (dim_ == 2) {
        const double mean = 0.5 * (s(0, 0) + s(1, 1));
        const double half_diff = 0.5 * (s(0, 0) - s(1, 1));
        const double r = std::hypot(half_diff, s(0, 1));
        ev[0] = mean - r;
        ev[1] = mean + r;
        return ev;
    }
    // Cyclic Jacobi on a 3x3 copy.
    double a[3][3];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) a[i][j] = s(i, j);
    for (int sweep = 0; sweep < 50; ++sweep) {
        const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
        if (off < 1e-300) break;
        for (int p = 0; p < 2; ++p) {
            for (int q = p + 1; q < 3; ++q) {
                if (a[p][q] == 0.0) continue;
                const double theta = 0.5 * (a[q][q] - a[p][p]) / a[p][q];
                const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (int k = 0; k < 3; ++k) {
                    const double akp = a[k][p];
                    const double akq = a[k][q];
                    a[k][p] = c * akp - sn * akq;
                    a[k][q] = sn * akp + c * akq;
                }
                for (int k = 0; k < 3; ++k) {
                    const double apk = a[p][k];
                    const double aqk = a[q][k];
                    a[p][k] = c * apk - sn * aqk;
                    a[q][k] = sn * apk + c * aqk;
                }
            }
        }
    }
    ev = {a[0][0], a[1][1], a[2][2]};
    std::sort(ev.begin(), ev.end());
    return ev;
}

double SquareMatrix::min_symmetric_eigenvalue() const { return symmetric_eigenvalues()[0]; }

double SquareMatrix::max_symmetric_eigenvalue() const {
    return symmetric_eigenvalues()[static_cast<std::size_t>(dim_ - 1)];
}

bool SquareMatrix::operator==(const SquareMatrix& o) const {
    if (dim_ != o.dim_) return false;
    for (int i = 0; i < dim_; ++i)
        for (int j = 0; j < dim_; ++j)
            if ((*this)(i, j) != o(i, j)) return false;
    return true;
}

SquareMatrix operator+(SquareMatrix a, const SquareMatrix& b) { return a += b; }
SquareMatrix operator-(SquareMatrix a, const SquareMatrix& b) { return a -= b; }
SquareMatrix operator*(SquareMatrix a, double s) { return a *= s; }
SquareMatrix operator*(double s, SquareMatrix a) { return a *= s; }

SquareMatrix operator*(const SquareMatrix& a, const SquareMatrix& b) {
    const int d = a.dim();
    SquareMatrix c(d);
    for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) {
            const double aik = a(i, k);
            for (int j = 0; j < d; ++j) c(i, j) += aik * b(k, j);
        }
    return c;
}

double frobenius(const SquareMatrix& a, const SquareMatrix& b) {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i)
        for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
    return s;
}

}  // namespace maxlab
