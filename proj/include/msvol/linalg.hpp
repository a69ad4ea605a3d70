#pragma once

#include <cstddef>
#include <vector>

namespace msvol {

using Vector = std::vector<double>;

// Dense row-major matrix. Kernels below are tuned for the N <= 32
// state counts of the models (Van Loan blocks double that).
class Matrix {
public:
    Matrix() = default;
    Matrix(int rows, int cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * cols, fill) {}

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    double& operator()(int i, int j) { return a_[static_cast<std::size_t>(i) * cols_ + j]; }
    double operator()(int i, int j) const { return a_[static_cast<std::size_t>(i) * cols_ + j]; }

    Matrix& operator+=(const Matrix& other);
    Matrix& operator-=(const Matrix& other);
    Matrix& operator*=(double c);

    const std::vector<double>& data() const { return a_; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> a_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(const Matrix& a, const Matrix& b);
Matrix operator*(double c, Matrix a);
Vector operator*(const Matrix& a, const Vector& x);

Matrix transpose(const Matrix& a);
// (A o B)^T, entry [i][j] = a_ji * b_ji; the moment formulas only ever
// need the Hadamard product in this transposed combination.
Matrix hadamard_transposed(const Matrix& a, const Matrix& b);

double inf_norm(const Matrix& a);
double one_norm(const Matrix& a);

double dot(const Vector& x, const Vector& y);
double sum(const Vector& x);

// LU with partial pivoting.
struct LuDecomposition {
    Matrix lu;
    std::vector<int> perm;
    bool singular = false;
};
LuDecomposition lu_factor(const Matrix& a);
Vector lu_solve(const LuDecomposition& f, const Vector& b);
Matrix lu_solve(const LuDecomposition& f, const Matrix& b);

// Solve A x = b; throws std::runtime_error on singular A.
Vector solve(const Matrix& a, const Vector& b);
Matrix solve(const Matrix& a, const Matrix& b);

// Scaling-and-squaring matrix exponential (Pade 3/5/7/9/13 with the
// usual 1-norm thresholds). Accurate to ~1e-13 for the matrix sizes
// and norms in play here.
Matrix expm(const Matrix& a);

// Van Loan block trick: integral_0^t e^{A(t-s)} B e^{Cs} ds equals the
// upper-right block of expm([[A,B],[0,C]] t).
Matrix van_loan_integral(const Matrix& a, const Matrix& b, const Matrix& c, double t);

// integral_0^t e^{As} ds (A = 0 block of the same trick).
Matrix integral_expm(const Matrix& a, double t);

// Max real part of the eigenvalues, via Hessenberg reduction followed
// by the Francis double-shift QR iteration.
double spectral_abscissa(const Matrix& a);

// All eigenvalues as (real, imag) pairs; exposed for tests.
std::vector<std::pair<double, double>> eigenvalues(const Matrix& a);

}  // namespace msvol
