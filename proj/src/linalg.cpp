#include "msvol/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

namespace msvol {

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix& Matrix::operator+=(const Matrix& other) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += other.a_[i];
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= other.a_[i];
    return *this;
}

Matrix& Matrix::operator*=(double c) {
    for (auto& v : a_) v *= c;
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double c, Matrix a) { return a *= c; }

Matrix operator*(const Matrix& a, const Matrix& b) {
    Matrix r(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i)
        for (int k = 0; k < a.cols(); ++k) {
            double aik = a(i, k);
            if (aik == 0.0) continue;
            for (int j = 0; j < b.cols(); ++j) r(i, j) += aik * b(k, j);
        }
    return r;
}

Vector operator*(const Matrix& a, const Vector& x) {
    Vector r(a.rows(), 0.0);
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += a(i, j) * x[j];
        r[i] = s;
    }
    return r;
}

Matrix transpose(const Matrix& a) {
    Matrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j);
    return r;
}

Matrix hadamard_transposed(const Matrix& a, const Matrix& b) {
    Matrix r(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i)
        for (int j = 0; j < a.cols(); ++j) r(j, i) = a(i, j) * b(i, j);
    return r;
}

double inf_norm(const Matrix& a) {
    double best = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (int j = 0; j < a.cols(); ++j) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double one_norm(const Matrix& a) {
    double best = 0.0;
    for (int j = 0; j < a.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += std::abs(a(i, j));
        best = std::max(best, s);
    }
    return best;
}

double dot(const Vector& x, const Vector& y) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double sum(const Vector& x) {
    double s = 0.0;
    for (double v : x) s += v;
    return s;
}

LuDecomposition lu_factor(const Matrix& a) {
    const int n = a.rows();
    LuDecomposition f{a, std::vector<int>(n), false};
    for (int i = 0; i < n; ++i) f.perm[i] = i;
    for (int k = 0; k < n; ++k) {
        int piv = k;
        double best = std::abs(f.lu(k, k));
        for (int i = k + 1; i < n; ++i) {
            double v = std::abs(f.lu(i, k));
            if (v > best) { best = v; piv = i; }
        }
        if (best == 0.0) { f.singular = true; return f; }
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
            std::swap(f.perm[k], f.perm[piv]);
        }
        for (int i = k + 1; i < n; ++i) {
            double m = f.lu(i, k) / f.lu(k, k);
            f.lu(i, k) = m;
            for (int j = k + 1; j < n; ++j) f.lu(i, j) -= m * f.lu(k, j);
        }
    }
    return f;
}

Vector lu_solve(const LuDecomposition& f, const Vector& b) {
    const int n = f.lu.rows();
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = b[f.perm[i]];
    for (int i = 1; i < n; ++i)
        for (int j = 0; j < i; ++j) x[i] -= f.lu(i, j) * x[j];
    for (int i = n - 1; i >= 0; --i) {
        for (int j = i + 1; j < n; ++j) x[i] -= f.lu(i, j) * x[j];
        x[i] /= f.lu(i, i);
    }
    return x;
}

Matrix lu_solve(const LuDecomposition& f, const Matrix& b) {
    Matrix x(b.rows(), b.cols());
    Vector col(b.rows());
    for (int j = 0; j < b.cols(); ++j) {
        for (int i = 0; i < b.rows(); ++i) col[i] = b(i, j);
        Vector s = lu_solve(f, col);
        for (int i = 0; i < b.rows(); ++i) x(i, j) = s[i];
    }
    return x;
}

Vector solve(const Matrix& a, const Vector& b) {
    auto f = lu_factor(a);
    if (f.singular) throw std::runtime_error("solve: singular matrix");
    return lu_solve(f, b);
}

Matrix solve(const Matrix& a, const Matrix& b) {
    auto f = lu_factor(a);
    if (f.singular) throw std::runtime_error("solve: singular matrix");
    return lu_solve(f, b);
}

namespace {

// Pade approximant of order m evaluated at A; returns (-U+V, U+V) solved.
Matrix pade_low(const Matrix& a, const std::vector<double>& b) {
    const int n = a.rows();
    const Matrix a2 = a * a;
    const int m = static_cast<int>(b.size()) - 1;
    Matrix even(n, n), odd(n, n);
    Matrix p = Matrix::identity(n);  // powers A^0, A^2, A^4, ...
    for (int k = 0; k <= m; k += 2) {
        if (k > 0) p = p * a2;
        Matrix term = p;
        term *= b[k];
        even += term;
        if (k + 1 <= m) {
            Matrix t2 = p;
            t2 *= b[k + 1];
            odd += t2;
        }
    }
    Matrix u = a * odd;
    return solve(even - u, even + u);
}

Matrix pade13(const Matrix& a) {
    static const double b[14] = {
        64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
        1187353796428800.0,  129060195264000.0,   10559470521600.0,
        670442572800.0,      33522128640.0,       1323241920.0,
        40840800.0,          960960.0,            16380.0,
        182.0,               1.0};
    const int n = a.rows();
    const Matrix a2 = a * a;
    const Matrix a4 = a2 * a2;
    const Matrix a6 = a2 * a4;
    Matrix u_in = b[13] * a6 + b[11] * a4 + b[9] * a2;
    Matrix u = a6 * u_in + b[7] * a6 + b[5] * a4 + b[3] * a2;
    for (int i = 0; i < n; ++i) u(i, i) += b[1];
    u = a * u;
    Matrix v_in = b[12] * a6 + b[10] * a4 + b[8] * a2;
    Matrix v = a6 * v_in + b[6] * a6 + b[4] * a4 + b[2] * a2;
    for (int i = 0; i < n; ++i) v(i, i) += b[0];
    return solve(v - u, v + u);
}

}  // namespace

Matrix expm(const Matrix& a) {
    const double nrm = one_norm(a);
    if (!(nrm < 1e154)) throw std::runtime_error("expm: norm overflow or nan");
    if (nrm <= 1.495585217958292e-2)
        return pade_low(a, {120.0, 60.0, 12.0, 1.0});
    if (nrm <= 2.539398330063230e-1)
        return pade_low(a, {30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0});
    if (nrm <= 9.504178996162932e-1)
        return pade_low(a, {17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0,
                            1512.0, 56.0, 1.0});
    if (nrm <= 2.097847961257068)
        return pade_low(a, {17643225600.0, 8821612800.0, 2075673600.0, 302702400.0,
                            30270240.0, 2162160.0, 110880.0, 3960.0, 90.0, 1.0});
    const double theta13 = 5.371920351148152;
    int s = 0;
    Matrix scaled = a;
    if (nrm > theta13) {
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        scaled *= std::ldexp(1.0, -s);
    }
    Matrix r = pade13(scaled);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

Matrix van_loan_integral(const Matrix& a, const Matrix& b, const Matrix& c, double t) {
    const int n = a.rows();
    const int m = c.rows();
    Matrix blk(n + m, n + m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) blk(i, j) = a(i, j) * t;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) blk(i, n + j) = b(i, j) * t;
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) blk(n + i, n + j) = c(i, j) * t;
    Matrix e = expm(blk);
    Matrix r(n, m);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < m; ++j) r(i, j) = e(i, n + j);
    return r;
}

Matrix integral_expm(const Matrix& a, double t) {
    return van_loan_integral(Matrix(a.rows(), a.cols()), Matrix::identity(a.rows()), a, t);
}

namespace {

using cplx = std::complex<double>;

// Real Householder reduction to upper Hessenberg form.
void hessenberg(Matrix& a) {
    const int n = a.rows();
    for (int k = 0; k < n - 2; ++k) {
        double scale = 0.0;
        for (int i = k + 1; i < n; ++i) scale += std::abs(a(i, k));
        if (scale == 0.0) continue;
        Vector v(n, 0.0);
        double norm2 = 0.0;
        for (int i = k + 1; i < n; ++i) {
            v[i] = a(i, k) / scale;
            norm2 += v[i] * v[i];
        }
        double alpha = (v[k + 1] >= 0.0) ? -std::sqrt(norm2) : std::sqrt(norm2);
        double vnorm2 = norm2 - 2.0 * alpha * v[k + 1] + alpha * alpha;
        if (vnorm2 == 0.0) continue;
        v[k + 1] -= alpha;
        // A <- (I - 2vv'/v'v) A (I - 2vv'/v'v)
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = k + 1; i < n; ++i) s += v[i] * a(i, j);
            s *= 2.0 / vnorm2;
            for (int i = k + 1; i < n; ++i) a(i, j) -= s * v[i];
        }
        for (int i = 0; i < n; ++i) {
            double s = 0.0;
            for (int j = k + 1; j < n; ++j) s += a(i, j) * v[j];
            s *= 2.0 / vnorm2;
            for (int j = k + 1; j < n; ++j) a(i, j) -= s * v[j];
        }
        for (int i = k + 2; i < n; ++i) a(i, k) = 0.0;
    }
}

// Single-shift QR step with Wilkinson shift on the active window
// [lo, hi] of the complex Hessenberg matrix h (dimension n).
void qr_step(std::vector<cplx>& h, int n, int lo, int hi) {
    auto at = [&](int i, int j) -> cplx& { return h[static_cast<std::size_t>(i) * n + j]; };
    // Wilkinson shift from the trailing 2x2 block.
    cplx a = at(hi - 1, hi - 1), b = at(hi - 1, hi), c = at(hi, hi - 1), d = at(hi, hi);
    cplx tr = a + d;
    cplx det = a * d - b * c;
    cplx disc = std::sqrt(tr * tr - 4.0 * det);
    cplx mu1 = 0.5 * (tr + disc), mu2 = 0.5 * (tr - disc);
    cplx mu = (std::abs(mu1 - d) < std::abs(mu2 - d)) ? mu1 : mu2;

    const int w = hi - lo + 1;
    std::vector<cplx> t(static_cast<std::size_t>(w) * w);
    auto tt = [&](int i, int j) -> cplx& { return t[static_cast<std::size_t>(i) * w + j]; };
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) tt(i, j) = at(lo + i, lo + j);
    for (int i = 0; i < w; ++i) tt(i, i) -= mu;

    // QR by Givens, T -> R, recording the rotations.
    std::vector<double> cs(w - 1);
    std::vector<cplx> sn(w - 1);
    for (int k = 0; k < w - 1; ++k) {
        cplx x = tt(k, k), y = tt(k + 1, k);
        double ax = std::abs(x), ay = std::abs(y);
        double r = std::hypot(ax, ay);
        if (r == 0.0) { cs[k] = 1.0; sn[k] = 0.0; continue; }
        cplx phase = (ax == 0.0) ? cplx(1.0, 0.0) : x / ax;
        cs[k] = ax / r;
        sn[k] = phase * std::conj(y) / r;
        for (int j = k; j < w; ++j) {
            cplx u = tt(k, j), v2 = tt(k + 1, j);
            tt(k, j) = cs[k] * u + sn[k] * v2;
            tt(k + 1, j) = -std::conj(sn[k]) * u + cs[k] * v2;
        }
    }
    // T <- R Q + mu I with Q = G_0^H G_1^H ... applied column-wise.
    for (int k = 0; k < w - 1; ++k) {
        int top = std::min(k + 2, w - 1);
        for (int i = 0; i <= top; ++i) {
            cplx u = tt(i, k), v2 = tt(i, k + 1);
            tt(i, k) = cs[k] * u + std::conj(sn[k]) * v2;
            tt(i, k + 1) = -sn[k] * u + cs[k] * v2;
        }
    }
    for (int i = 0; i < w; ++i) tt(i, i) += mu;
    for (int i = 0; i < w; ++i)
        for (int j = 0; j < w; ++j) at(lo + i, lo + j) = tt(i, j);
}

std::vector<cplx> hessenberg_eigenvalues(const Matrix& hess) {
    const int n = hess.rows();
    std::vector<cplx> h(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) h[static_cast<std::size_t>(i) * n + j] = hess(i, j);
    auto at = [&](int i, int j) -> cplx& { return h[static_cast<std::size_t>(i) * n + j]; };

    double anorm = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = std::max(0, i - 1); j < n; ++j) anorm += std::abs(at(i, j));
    if (anorm == 0.0) anorm = 1.0;
    const double eps = 1e-15;

    std::vector<cplx> eig(n);
    int hi = n - 1;
    int iters = 0;
    const int max_iters = 60 * n;
    while (hi >= 0) {
        if (hi == 0) { eig[0] = at(0, 0); break; }
        // deflate converged subdiagonals
        double sub = std::abs(at(hi, hi - 1));
        double ref = std::abs(at(hi - 1, hi - 1)) + std::abs(at(hi, hi));
        if (ref == 0.0) ref = anorm;
        if (sub <= eps * ref) {
            eig[hi] = at(hi, hi);
            --hi;
            continue;
        }
        int lo = hi - 1;
        while (lo > 0) {
            double s = std::abs(at(lo, lo - 1));
            double r = std::abs(at(lo - 1, lo - 1)) + std::abs(at(lo, lo));
            if (r == 0.0) r = anorm;
            if (s <= eps * r) break;
            --lo;
        }
        if (++iters > max_iters)
            throw std::runtime_error("eigenvalues: QR iteration failed to converge");
        qr_step(h, n, lo, hi);
    }
    return eig;
}

}  // namespace

std::vector<std::pair<double, double>> eigenvalues(const Matrix& a) {
    if (a.rows() != a.cols()) throw std::invalid_argument("eigenvalues: square matrix required");
    Matrix hess = a;
    hessenberg(hess);
    auto eig = hessenberg_eigenvalues(hess);
    std::vector<std::pair<double, double>> out;
    out.reserve(eig.size());
    for (const auto& z : eig) out.emplace_back(z.real(), z.imag());
    return out;
}

double spectral_abscissa(const Matrix& a) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& [re, im] : eigenvalues(a)) {
        (void)im;
        best = std::max(best, re);
    }
    return best;
}

}  // namespace msvol
