#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace resetfreq {

using Mat = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;
using RowVec = Eigen::RowVectorXd;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;
using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;
inline constexpr double kTwoPi = 2.0 * kPi;

inline double hz_to_radps(double f_hz) { return kTwoPi * f_hz; }
inline double radps_to_hz(double w) { return w / kTwoPi; }

/// Numeric failure while evaluating a model (singular resolvent, bad kernel, ...).
class EvaluationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Continuous-time state-space model dx/dt = Ax + Bu, y = Cx + Du.
/// Zero-state models (pure gains) are allowed: A is 0x0 and D carries the gain.
struct StateSpace {
    Mat A, B, C, D;

    StateSpace() : A(0, 0), B(0, 1), C(1, 0), D(Mat::Zero(1, 1)) {}
    StateSpace(Mat a, Mat b, Mat c, Mat d);

    Eigen::Index states() const { return A.rows(); }
    Eigen::Index inputs() const { return B.cols(); }
    Eigen::Index outputs() const { return C.rows(); }

    /// C (jwI - A)^-1 B + D. Throws EvaluationError when jw is an eigenvalue of A.
    CMat response(double omega) const;

    /// SISO convenience: response(omega)(0,0).
    Complex freq_response(double omega) const;

    static StateSpace gain(double k);
};

/// Rational transfer function, coefficient lists in descending powers of s.
struct RationalTf {
    std::vector<double> num;
    std::vector<double> den;

    RationalTf(std::vector<double> n, std::vector<double> d);

    Complex eval(Complex s) const;
    Complex freq_response(double omega) const { return eval(Complex(0.0, omega)); }

    /// Controllable-canonical realization (supports biproper num/den).
    StateSpace to_state_space() const;
};

/// Series connection u -> a -> b -> y. States of `a` come first in the
/// combined state vector, so a leading resetting block stays leading.
StateSpace series(const StateSpace& a, const StateSpace& b);

/// Matrix exponential via Pade(13) with scaling and squaring.
Mat matrix_exp(const Mat& m);

/// All eigenvalue real parts < -tol.
bool is_hurwitz(const Mat& a, double tol = 1e-10);
/// All eigenvalue moduli < 1 - tol.
bool is_schur(const Mat& m, double tol = 1e-10);

}  // namespace resetfreq
