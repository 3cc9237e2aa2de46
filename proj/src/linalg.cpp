#include "dampwave/linalg.hpp"

#include "dampwave/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <random>
#include <string>

namespace dampwave::linalg {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

double norm2(std::span<const double> a) { return std::sqrt(dot(a, a)); }

}  // namespace

// ---------------------------------------------------------------- banded

BandedMatrix::BandedMatrix(std::size_t n, std::size_t lower, std::size_t upper)
    : n_(n), kl_(std::min(lower, n ? n - 1 : 0)), ku_(std::min(upper, n ? n - 1 : 0)),
      data_(n * (kl_ + ku_ + 1), 0.0) {
    if (n == 0) throw InvalidArgument("banded matrix of size zero");
}

BandedMatrix BandedMatrix::identity(std::size_t n) {
    BandedMatrix m(n, 0, 0);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

double& BandedMatrix::at(std::size_t i, std::size_t j) {
    if (i >= n_ || j >= n_ || !in_band(i, j)) {
        throw InvalidArgument("banded matrix: entry (" + std::to_string(i) + "," + std::to_string(j) +
                              ") outside band");
    }
    return data_[index(i, j)];
}

std::vector<double> BandedMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionMismatch("banded multiply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        const std::size_t j0 = i > kl_ ? i - kl_ : 0;
        const std::size_t j1 = std::min(n_ - 1, i + ku_);
        double s = 0.0;
        for (std::size_t j = j0; j <= j1; ++j) s += data_[index(i, j)] * x[j];
        y[i] = s;
    }
    return y;
}

double BandedMatrix::max_abs() const {
    double m = 0.0;
    for (double v : data_) m = std::max(m, std::abs(v));
    return m;
}

std::vector<double> BandedMatrix::densify() const {
    std::vector<double> d(n_ * n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        for (std::size_t j = 0; j < n_; ++j) d[i * n_ + j] = (*this)(i, j);
    }
    return d;
}

BandedMatrix operator*(const BandedMatrix& a, const BandedMatrix& b) {
    if (a.size() != b.size()) throw DimensionMismatch("banded product: size mismatch");
    const std::size_t n = a.size();
    BandedMatrix c(n, a.lower() + b.lower(), a.upper() + b.upper());
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i > c.lower() ? i - c.lower() : 0;
        const std::size_t j1 = std::min(n - 1, i + c.upper());
        for (std::size_t j = j0; j <= j1; ++j) {
            const std::size_t k0 = std::max({i > a.lower() ? i - a.lower() : 0,
                                             j > b.upper() ? j - b.upper() : 0});
            const std::size_t k1 = std::min({n - 1, i + a.upper(), j + b.lower()});
            double s = 0.0;
            for (std::size_t k = k0; k <= k1; ++k) s += a(i, k) * b(k, j);
            c.at(i, j) = s;
        }
    }
    return c;
}

BandedMatrix axpy_identity(double alpha, const BandedMatrix& a, double beta) {
    BandedMatrix c(a.size(), a.lower(), a.upper());
    for (std::size_t i = 0; i < a.size(); ++i) {
        const std::size_t j0 = i > a.lower() ? i - a.lower() : 0;
        const std::size_t j1 = std::min(a.size() - 1, i + a.upper());
        for (std::size_t j = j0; j <= j1; ++j) c.at(i, j) = alpha * a(i, j);
        c.at(i, i) += beta;
    }
    return c;
}

BandedFactorization lu_factor_banded(const BandedMatrix& m) {
    const std::size_t n = m.size();
    const std::size_t kl = m.lower();
    const std::size_t ku = m.upper();
    const std::size_t w = 2 * kl + ku + 1;  // row r spans columns r-kl .. r+kl+ku
    std::vector<double> work(n * w, 0.0);
    auto cell = [&](std::size_t r, std::size_t j) -> double& { return work[r * w + (j + kl - r)]; };

    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j0 = i > kl ? i - kl : 0;
        const std::size_t j1 = std::min(n - 1, i + ku);
        for (std::size_t j = j0; j <= j1; ++j) cell(i, j) = m(i, j);
    }

    const double threshold = 1e-14 * m.max_abs();
    BandedFactorization f;
    f.n_ = n;
    f.kl_ = kl;
    f.ku_ = ku;
    f.width_ = kl + ku + 1;
    f.lower_.assign(n * kl, 0.0);
    f.pivots_.resize(n);

    for (std::size_t c = 0; c < n; ++c) {
        const std::size_t last_row = std::min(n - 1, c + kl);
        const std::size_t last_col = std::min(n - 1, c + kl + ku);
        std::size_t p = c;
        for (std::size_t r = c + 1; r <= last_row; ++r) {
            if (std::abs(cell(r, c)) > std::abs(cell(p, c))) p = r;
        }
        const double pivot = cell(p, c);
        if (!(std::abs(pivot) > threshold)) {
            throw SingularMatrix(c, pivot,
                                 "matrix is numerically singular: pivot " + std::to_string(pivot) +
                                     " at row " + std::to_string(c));
        }
        f.pivots_[c] = p;
        if (p != c) {
            for (std::size_t j = c; j <= last_col; ++j) std::swap(cell(c, j), cell(p, j));
        }
        for (std::size_t r = c + 1; r <= last_row; ++r) {
            const double l = cell(r, c) / cell(c, c);
            f.lower_[c * kl + (r - c - 1)] = l;
            cell(r, c) = 0.0;
            if (l == 0.0) continue;
            for (std::size_t j = c + 1; j <= last_col; ++j) cell(r, j) -= l * cell(c, j);
        }
    }

    f.upper_.assign(n * f.width_, 0.0);
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t j1 = std::min(n - 1, r + kl + ku);
        for (std::size_t j = r; j <= j1; ++j) f.upper_[r * f.width_ + (j - r)] = cell(r, j);
    }
    return f;
}

void BandedFactorization::solve_in_place(std::span<double> x) const {
    if (x.size() != n_) {
        throw DimensionMismatch("banded solve: rhs length " + std::to_string(x.size()) +
                                " does not match system size " + std::to_string(n_));
    }
    for (std::size_t c = 0; c < n_; ++c) {
        std::swap(x[c], x[pivots_[c]]);
        const std::size_t last_row = std::min(n_ - 1, c + kl_);
        for (std::size_t r = c + 1; r <= last_row; ++r) x[r] -= lower_[c * kl_ + (r - c - 1)] * x[c];
    }
    for (std::size_t r = n_; r-- > 0;) {
        const std::size_t j1 = std::min(n_ - 1, r + kl_ + ku_);
        double s = x[r];
        for (std::size_t j = r + 1; j <= j1; ++j) s -= upper_[r * width_ + (j - r)] * x[j];
        x[r] = s / upper_[r * width_];
    }
}

std::vector<double> BandedFactorization::solve(std::span<const double> rhs) const {
    std::vector<double> x(rhs.begin(), rhs.end());
    solve_in_place(x);
    return x;
}

std::vector<double> solve_banded(const BandedFactorization& fact, std::span<const double> rhs) {
    return fact.solve(rhs);
}

BandedMatrix interleaved_operator(const BlockOperator& op) {
    const std::size_t n = op.n_interior();
    BandedMatrix m(2 * n, 3, 1);
    const double s = op.inv_h2();
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t u = 2 * i;
        const std::size_t v = 2 * i + 1;
        m.at(u, v) = 1.0;
        if (i > 0) m.at(v, u - 2) = s;
        m.at(v, u) = -2.0 * s;
        if (i + 1 < n) m.at(v, u + 2) = s;
        m.at(v, v) = -op.damping()[i];
    }
    return m;
}

void interleave(std::span<const double> blocked, std::span<double> interleaved) {
    const std::size_t n = blocked.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
        interleaved[2 * i] = blocked[i];
        interleaved[2 * i + 1] = blocked[n + i];
    }
}

void deinterleave(std::span<const double> interleaved, std::span<double> blocked) {
    const std::size_t n = interleaved.size() / 2;
    for (std::size_t i = 0; i < n; ++i) {
        blocked[i] = interleaved[2 * i];
        blocked[n + i] = interleaved[2 * i + 1];
    }
}

// ---------------------------------------------------------------- dense

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major) : n_(n), data_(std::move(row_major)) {
    if (data_.size() != n * n) throw DimensionMismatch("dense matrix: data size is not n*n");
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
    DenseMatrix m(n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

DenseMatrix DenseMatrix::diagonal(std::span<const double> d) {
    DenseMatrix m(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
    if (x.size() != n_) throw DimensionMismatch("dense multiply: size mismatch");
    std::vector<double> y(n_, 0.0);
    for (std::size_t i = 0; i < n_; ++i) {
        y[i] = dot(std::span<const double>(data_).subspan(i * n_, n_), x);
    }
    return y;
}

double DenseMatrix::norm1() const {
    double best = 0.0;
    for (std::size_t j = 0; j < n_; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < n_; ++i) s += std::abs((*this)(i, j));
        best = std::max(best, s);
    }
    return best;
}

double DenseMatrix::norm_frobenius() const { return norm2(data_); }

DenseMatrix operator*(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("dense product: size mismatch");
    const std::size_t n = a.n_;
    DenseMatrix c(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < n; ++k) {
            const double aik = a(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
        }
    }
    return c;
}

DenseMatrix operator+(const DenseMatrix& a, const DenseMatrix& b) {
    if (a.n_ != b.n_) throw DimensionMismatch("dense sum: size mismatch");
    DenseMatrix c = a;
    for (std::size_t i = 0; i < c.data_.size(); ++i) c.data_[i] += b.data_[i];
    return c;
}

DenseMatrix operator-(const DenseMatrix& a, const DenseMatrix& b) { return a + (-1.0) * b; }

DenseMatrix operator*(double s, const DenseMatrix& a) {
    DenseMatrix c = a;
    for (double& v : c.data_) v *= s;
    return c;
}

DenseMatrix solve_dense(const DenseMatrix& a, const DenseMatrix& b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("dense solve: size mismatch");
    DenseMatrix lu = a;
    DenseMatrix x = b;
    double scale = 0.0;
    for (double v : a.data()) scale = std::max(scale, std::abs(v));
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(lu(r, c)) > std::abs(lu(p, c))) p = r;
        }
        if (!(std::abs(lu(p, c)) > 1e-14 * scale)) {
            throw SingularMatrix(c, lu(p, c), "dense matrix is numerically singular at row " + std::to_string(c));
        }
        if (p != c) {
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(lu(c, j), lu(p, j));
                std::swap(x(c, j), x(p, j));
            }
        }
        for (std::size_t r = c + 1; r < n; ++r) {
            const double l = lu(r, c) / lu(c, c);
            if (l == 0.0) continue;
            for (std::size_t j = c; j < n; ++j) lu(r, j) -= l * lu(c, j);
            for (std::size_t j = 0; j < n; ++j) x(r, j) -= l * x(c, j);
        }
    }
    for (std::size_t r = n; r-- > 0;) {
        for (std::size_t j = 0; j < n; ++j) {
            double s = x(r, j);
            for (std::size_t k = r + 1; k < n; ++k) s -= lu(r, k) * x(k, j);
            x(r, j) = s / lu(r, r);
        }
    }
    return x;
}

std::vector<double> solve_dense(const DenseMatrix& a, std::span<const double> b) {
    const std::size_t n = a.size();
    if (b.size() != n) throw DimensionMismatch("dense solve: size mismatch");
    DenseMatrix rhs(n);
    for (std::size_t i = 0; i < n; ++i) rhs(i, 0) = b[i];
    const DenseMatrix x = solve_dense(a, rhs);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = x(i, 0);
    return out;
}

DenseMatrix matrix_exponential(const DenseMatrix& a) {
    const std::size_t n = a.size();
    if (n == 0) throw InvalidArgument("matrix exponential of empty matrix");
    if (n > kMaxExponentialSize) {
        throw InvalidArgument("matrix exponential oracle limited to size " +
                              std::to_string(kMaxExponentialSize) + " (got " + std::to_string(n) + ")");
    }
    constexpr int kDegree = 8;
    const double norm = a.norm1();
    int squarings = 0;
    if (norm > 0.5) squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
    const DenseMatrix scaled = std::ldexp(1.0, -squarings) * a;

    // c_j = (2d - j)! d! / ((2d)! j! (d - j)!)
    std::vector<double> c(kDegree + 1);
    c[0] = 1.0;
    for (int j = 1; j <= kDegree; ++j) {
        c[j] = c[j - 1] * static_cast<double>(kDegree - j + 1) / (static_cast<double>(2 * kDegree - j + 1) * j);
    }
    DenseMatrix power = DenseMatrix::identity(n);
    DenseMatrix p = DenseMatrix::identity(n);
    DenseMatrix q = DenseMatrix::identity(n);
    for (int j = 1; j <= kDegree; ++j) {
        power = power * scaled;
        p = p + c[j] * power;
        q = q + ((j % 2) ? -c[j] : c[j]) * power;
    }
    DenseMatrix r = solve_dense(q, p);
    for (int i = 0; i < squarings; ++i) r = r * r;
    return r;
}

DenseMatrix matrix_exponential(const BlockOperator& op, double k) {
    const std::size_t n = op.state_size();
    if (n > kMaxExponentialSize) {
        throw InvalidArgument("matrix exponential oracle limited to state size " +
                              std::to_string(kMaxExponentialSize) + " (got " + std::to_string(n) + ")");
    }
    return matrix_exponential(k * DenseMatrix(n, op.densify()));
}

// ---------------------------------------------------------------- spectra

SpectralEstimate spectral_radius(const LinearMap& apply, std::size_t n, std::uint64_t seed, double rel_tol,
                                 int max_iterations) {
    if (n == 0) throw InvalidArgument("spectral radius of an empty map");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);

    std::vector<double> y0(n), y1(n), y2(n);
    for (double& v : y0) v = normal(rng);
    const double n0 = norm2(y0);
    for (double& v : y0) v /= n0;
    apply(y0, y1);
    apply(y1, y2);

    SpectralEstimate est;
    double previous = -1.0;
    for (int it = 1; it <= max_iterations; ++it) {
        est.iterations = it;
        const double n1 = norm2(y1);
        if (n1 == 0.0) {
            est.value = 0.0;
            est.converged = true;
            return est;
        }
        const double n2 = norm2(y2);

        // single real eigenvalue: y2 ~ mu y1
        const double mu = dot(y1, y2) / (n1 * n1);
        double real_res = 0.0;
        for (std::size_t i = 0; i < n; ++i) real_res += (y2[i] - mu * y1[i]) * (y2[i] - mu * y1[i]);
        real_res = n2 > 0.0 ? std::sqrt(real_res) / n2 : 0.0;
        double value = std::abs(mu);
        double residual = real_res;

        // conjugate pair: y2 + p y1 + q y0 ~ 0
        const double a11 = n1 * n1, a12 = dot(y1, y0), a22 = dot(y0, y0);
        const double det = a11 * a22 - a12 * a12;
        if (det > 1e-12 * a11 * a22) {
            const double r1 = -dot(y1, y2), r2 = -dot(y0, y2);
            const double p = (r1 * a22 - a12 * r2) / det;
            const double q = (a11 * r2 - a12 * r1) / det;
            double pair_res = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double e = y2[i] + p * y1[i] + q * y0[i];
                pair_res += e * e;
            }
            pair_res = n2 > 0.0 ? std::sqrt(pair_res) / n2 : 0.0;
            if (pair_res < residual) {
                const std::complex<double> disc = std::sqrt(std::complex<double>(p * p - 4.0 * q, 0.0));
                const double m1 = std::abs((-p + disc) / 2.0);
                const double m2 = std::abs((-p - disc) / 2.0);
                value = std::max(m1, m2);
                residual = pair_res;
            }
        }

        est.value = value;
        if (previous >= 0.0 && std::abs(value - previous) <= rel_tol * value && residual <= 10.0 * rel_tol) {
            est.converged = true;
            return est;
        }
        previous = value;

        // shift the window one step: (y0, y1, y2) <- (y1, y2, A y2) / |y1|
        for (std::size_t i = 0; i < n; ++i) {
            y0[i] = y1[i] / n1;
            y1[i] = y2[i] / n1;
        }
        apply(y1, y2);
    }
    return est;
}

}  // namespace dampwave::linalg
