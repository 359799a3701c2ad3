#include "resetfreq/lti.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace resetfreq {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

bool all_finite(const Mat& m) { return m.allFinite(); }

}  // namespace

StateSpace::StateSpace(Mat a, Mat b, Mat c, Mat d)
    : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
    require(A.rows() == A.cols(), "state matrix A must be square");
    require(B.rows() == A.rows(), "B row count must match state dimension");
    require(C.cols() == A.cols(), "C column count must match state dimension");
    require(D.rows() == C.rows() && D.cols() == B.cols(), "D shape must be outputs x inputs");
    require(all_finite(A) && all_finite(B) && all_finite(C) && all_finite(D),
            "state-space matrices must be finite");
}

StateSpace StateSpace::gain(double k) {
    StateSpace g;
    g.D(0, 0) = k;
    return g;
}

CMat StateSpace::response(double omega) const {
    if (states() == 0) return D.cast<Complex>();
    CMat m = CMat::Identity(states(), states()) * Complex(0.0, omega) - A.cast<Complex>();
    Eigen::FullPivLU<CMat> lu(m);
    if (!lu.isInvertible()) {
        throw EvaluationError("frequency response singular at omega = " + std::to_string(omega) +
                              " rad/s (undamped pole)");
    }
    return C.cast<Complex>() * lu.solve(B.cast<Complex>()) + D.cast<Complex>();
}

Complex StateSpace::freq_response(double omega) const { return response(omega)(0, 0); }

RationalTf::RationalTf(std::vector<double> n, std::vector<double> d)
    : num(std::move(n)), den(std::move(d)) {
    require(!den.empty() && den.front() != 0.0, "denominator leading coefficient must be nonzero");
    bool any = false;
    for (double c : num) any = any || c != 0.0;
    require(any, "numerator must not be identically zero");
    require(num.size() <= den.size(), "transfer function must be proper");
}

Complex RationalTf::eval(Complex s) const {
    auto horner = [&](const std::vector<double>& c) {
        Complex acc(0.0, 0.0);
        for (double ck : c) acc = acc * s + ck;
        return acc;
    };
    Complex d = horner(den);
    if (std::abs(d) == 0.0) {
        throw EvaluationError("transfer function pole hit at s = (" + std::to_string(s.real()) +
                              ", " + std::to_string(s.imag()) + ")");
    }
    return horner(num) / d;
}

StateSpace RationalTf::to_state_space() const {
    const auto n = static_cast<Eigen::Index>(den.size()) - 1;
    std::vector<double> a(den.begin(), den.end());
    for (auto& c : a) c /= den.front();
    std::vector<double> b(den.size(), 0.0);  // numerator padded to denominator length
    const auto off = den.size() - num.size();
    for (size_t i = 0; i < num.size(); ++i) b[off + i] = num[i] / den.front();

    if (n == 0) return StateSpace::gain(b[0]);

    Mat A = Mat::Zero(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
    for (Eigen::Index j = 0; j < n; ++j) A(n - 1, j) = -a[den.size() - 1 - j];
    Mat B = Mat::Zero(n, 1);
    B(n - 1, 0) = 1.0;
    const double d0 = b[0];
    Mat C = Mat::Zero(1, n);
    for (Eigen::Index j = 0; j < n; ++j) C(0, j) = b[den.size() - 1 - j] - d0 * a[den.size() - 1 - j];
    Mat D = Mat::Constant(1, 1, d0);
    return {A, B, C, D};
}

StateSpace series(const StateSpace& a, const StateSpace& b) {
    if (a.outputs() != b.inputs()) {
        throw std::invalid_argument("series: output dimension of first block (" +
                                    std::to_string(a.outputs()) + ") must match input dimension (" +
                                    std::to_string(b.inputs()) + ")");
    }
    const auto na = a.states(), nb = b.states();
    Mat A = Mat::Zero(na + nb, na + nb);
    A.topLeftCorner(na, na) = a.A;
    A.bottomRightCorner(nb, nb) = b.A;
    A.bottomLeftCorner(nb, na) = b.B * a.C;
    Mat B(na + nb, a.inputs());
    B.topRows(na) = a.B;
    B.bottomRows(nb) = b.B * a.D;
    Mat C(b.outputs(), na + nb);
    C.leftCols(na) = b.D * a.C;
    C.rightCols(nb) = b.C;
    Mat D = b.D * a.D;
    return {A, B, C, D};
}

// Higham's scaling-and-squaring with the (13,13) Pade approximant.
Mat matrix_exp(const Mat& m) {
    if (!m.allFinite()) throw std::invalid_argument("matrix_exp: entries must be finite");
    const auto n = m.rows();
    if (n == 0) return Mat(0, 0);
    const double theta13 = 5.371920351148152;
    const double norm = m.cwiseAbs().colwise().sum().maxCoeff();  // 1-norm
    int squarings = 0;
    Mat a = m;
    if (norm > theta13) {
        squarings = std::max(0, static_cast<int>(std::ceil(std::log2(norm / theta13))));
        a /= std::ldexp(1.0, squarings);
    }
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    const Mat I = Mat::Identity(n, n);
    const Mat a2 = a * a;
    const Mat a4 = a2 * a2;
    const Mat a6 = a4 * a2;
    Mat u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 + b[3] * a2 +
                 b[1] * I);
    Mat v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 + b[2] * a2 + b[0] * I;
    Mat e = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i) e = e * e;
    return e;
}

bool is_hurwitz(const Mat& a, double tol) {
    if (a.rows() != a.cols()) throw std::invalid_argument("is_hurwitz: matrix must be square");
    if (a.rows() == 0) return true;
    Eigen::EigenSolver<Mat> es(a, /*computeEigenvectors=*/false);
    return es.eigenvalues().real().maxCoeff() < -tol;
}

bool is_schur(const Mat& m, double tol) {
    if (m.rows() != m.cols()) throw std::invalid_argument("is_schur: matrix must be square");
    if (m.rows() == 0) return true;
    Eigen::EigenSolver<Mat> es(m, /*computeEigenvectors=*/false);
    return es.eigenvalues().cwiseAbs().maxCoeff() < 1.0 - tol;
}

}  // namespace resetfreq
