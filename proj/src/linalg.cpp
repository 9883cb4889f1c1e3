#include "preint/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "preint/errors.hpp"

namespace preint {

Matrix multiply_transpose(const Matrix& a) {
    Matrix out(a.rows(), a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < a.cols(); ++k) s += a(i, k) * a(j, k);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

double frobenius_norm(const Matrix& a) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
    }
    return std::sqrt(s);
}

double frobenius_distance(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DomainError("frobenius_distance: shape mismatch");
    }
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const double d = a(i, j) - b(i, j);
            s += d * d;
        }
    }
    return std::sqrt(s);
}

EigenDecomposition symmetric_eigen(const Matrix& s, int max_sweeps) {
    const std::size_t n = s.rows();
    if (s.cols() != n) throw DomainError("symmetric_eigen: matrix is not square");
    Matrix a = s;
    Matrix v(n, n);
    for (std::size_t i = 0; i < n; ++i) v(i, i) = 1.0;

    const double total = frobenius_norm(a);
    auto off_norm = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) acc += 2.0 * a(i, j) * a(i, j);
        }
        return std::sqrt(acc);
    };

    int sweep = 0;
    for (; sweep < max_sweeps; ++sweep) {
        if (off_norm() <= 1e-14 * total) break;
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (apq == 0.0) continue;
                // Rotation angle from the symmetric Schur decomposition.
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = std::copysign(1.0, theta) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * c;
                for (std::size_t k = 0; k < n; ++k) {
                    const double akp = a(k, p);
                    const double akq = a(k, q);
                    a(k, p) = c * akp - sn * akq;
                    a(k, q) = sn * akp + c * akq;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double apk = a(p, k);
                    const double aqk = a(q, k);
                    a(p, k) = c * apk - sn * aqk;
                    a(q, k) = sn * apk + c * aqk;
                }
                for (std::size_t k = 0; k < n; ++k) {
                    const double vkp = v(k, p);
                    const double vkq = v(k, q);
                    v(k, p) = c * vkp - sn * vkq;
                    v(k, q) = sn * vkp + c * vkq;
                }
            }
        }
    }
    if (sweep == max_sweeps && off_norm() > 1e-14 * total) {
        throw FactorizationError("symmetric_eigen: no convergence after " +
                                 std::to_string(max_sweeps) + " sweeps");
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
    EigenDecomposition out;
    out.vectors = Matrix(n, n);
    for (std::size_t j = 0; j < n; ++j) {
        out.values.push_back(a(order[j], order[j]));
        for (std::size_t k = 0; k < n; ++k) out.vectors(k, j) = v(k, order[j]);
    }
    return out;
}

}  // namespace preint
