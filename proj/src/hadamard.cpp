#include "spinlab/hadamard.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <numeric>
#include <sstream>

namespace spinlab {

namespace {

long long safe_gcd(long long a, long long b) {
    return std::gcd(std::llabs(a), std::llabs(b));
}

Complex unit_phase(double radians) {
    return {std::cos(radians), std::sin(radians)};
}

}  // namespace

Angle Angle::rational(long long p, long long q) {
    if (q == 0) fail("BadArgument", "angle denominator must be nonzero");
    if (q < 0) { p = -p; q = -q; }
    long long g = safe_gcd(p, q);
    if (g > 1) { p /= g; q /= g; }
    Angle a;
    a.num = p;
    a.den = q;
    return a;
}

Angle Angle::irrational_radians(double r) {
    Angle a;
    a.irrational = true;
    a.raw = r;
    return a;
}

Angle Angle::parse(const std::string& s) {
    if (s.rfind("irr:", 0) == 0) {
        const std::string body = s.substr(4);
        size_t pos = 0;
        double v = 0;
        try {
            v = std::stod(body, &pos);
        } catch (const std::exception&) {
            fail("BadAngle", "cannot parse '" + s + "'");
        }
        if (pos != body.size()) fail("BadAngle", "cannot parse '" + s + "'");
        return irrational_radians(v);
    }
    long long p = 0, q = 1;
    auto slash = s.find('/');
    const std::string ps = slash == std::string::npos ? s : s.substr(0, slash);
    const std::string qs = slash == std::string::npos ? std::string("1") : s.substr(slash + 1);
    auto r1 = std::from_chars(ps.data(), ps.data() + ps.size(), p);
    auto r2 = std::from_chars(qs.data(), qs.data() + qs.size(), q);
    if (r1.ec != std::errc() || r1.ptr != ps.data() + ps.size() ||
        r2.ec != std::errc() || r2.ptr != qs.data() + qs.size())
        fail("BadAngle", "angle must be 'p/q' (times pi) or 'irr:<radians>', got '" + s + "'");
    return rational(p, q);
}

double Angle::radians() const {
    return irrational ? raw : M_PI * static_cast<double>(num) / static_cast<double>(den);
}

Angle Angle::operator-(const Angle& o) const {
    if (irrational || o.irrational) return irrational_radians(radians() - o.radians());
    return rational(num * o.den - o.num * den, den * o.den);
}

Angle Angle::operator+(const Angle& o) const {
    if (irrational || o.irrational) return irrational_radians(radians() + o.radians());
    return rational(num * o.den + o.num * den, den * o.den);
}

Angle Angle::mod2() const {
    if (irrational) {
        double r = std::fmod(raw, 2.0 * M_PI);
        if (r < 0) r += 2.0 * M_PI;
        return irrational_radians(r);
    }
    long long p = num % (2 * den);
    if (p < 0) p += 2 * den;
    return rational(p, den);
}

bool Angle::is_zero_mod2() const {
    if (irrational) return false;
    return mod2().num == 0;
}

bool Angle::is_pi_mod2() const {
    if (irrational) return false;
    Angle m = mod2();
    return m.num == m.den;
}

std::string Angle::str() const {
    if (irrational) {
        std::ostringstream os;
        os << "irr:" << raw;
        return os.str();
    }
    std::ostringstream os;
    os << num;
    if (den != 1) os << "/" << den;
    return os.str();
}

HadamardMatrix fourier(int n) {
    if (n < 1) fail("BadArgument", "fourier order must be >= 1");
    HadamardMatrix h;
    h.order = n;
    h.matrix = fourier_matrix(n);
    h.family = HadamardFamily::Fourier;
    return h;
}

HadamardMatrix hadamard2(const Angle& alpha) {
    HadamardMatrix h;
    h.order = 2;
    h.family = HadamardFamily::TwoByTwo;
    h.parameters = {alpha};
    const double s = 1.0 / std::sqrt(2.0);
    Complex e = unit_phase(alpha.radians());
    h.matrix = CMat(2, 2);
    h.matrix << s, s, s * e, -s * e;
    return h;
}

HadamardMatrix hadamard2_full(const Angle& a1, const Angle& a2, const Angle& a3) {
    HadamardMatrix h;
    h.order = 2;
    h.family = HadamardFamily::TwoByTwo;
    h.parameters = {a1, a2, a3};
    const double s = 1.0 / std::sqrt(2.0);
    h.matrix = CMat(2, 2);
    h.matrix << s * unit_phase(a1.radians()), s * unit_phase(a1.radians() + a3.radians()),
        s * unit_phase(a2.radians()), -s * unit_phase(a2.radians() + a3.radians());
    return h;
}

HadamardMatrix hadamard4(const Angle& phi) {
    bool in_range;
    if (phi.irrational) {
        in_range = phi.raw >= 0.0 && phi.raw < M_PI;
    } else {
        in_range = phi.num >= 0 && phi.num < phi.den;
    }
    if (!in_range)
        fail("OutOfParameterRange", "4x4 family parameter must lie in [0, pi), got " + phi.str());
    HadamardMatrix h;
    h.order = 4;
    h.family = HadamardFamily::FourByFour;
    h.parameters = {phi};
    Complex z = unit_phase(phi.radians());
    Complex iz = Complex(0, 1) * z;
    h.matrix = CMat(4, 4);
    h.matrix << 1, 1, 1, 1,
        1, iz, -1, -iz,
        1, -1, 1, -1,
        1, -iz, -1, iz;
    h.matrix *= 0.5;
    return h;
}

bool is_complex_hadamard(const CMat& u, double tol) {
    if (u.rows() != u.cols() || u.rows() == 0) return false;
    if (!is_unitary(u, tol)) return false;
    const double want = 1.0 / std::sqrt(static_cast<double>(u.rows()));
    for (Eigen::Index i = 0; i < u.rows(); ++i)
        for (Eigen::Index j = 0; j < u.cols(); ++j)
            if (std::abs(std::abs(u(i, j)) - want) > tol) return false;
    return true;
}

int hamming(const CVec& v, double tol) {
    int count = 0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (std::abs(v(i)) > tol) ++count;
    if (count == 0) fail("ZeroVector", "Hamming number of the zero vector is undefined");
    return count;
}

bool monomial_equivalent(const CMat& u, const CMat& v, double tol) {
    if (u.rows() != v.rows() || u.cols() != v.cols()) fail("BadArgument", "orders differ");
    CMat w = u.adjoint() * v;
    const int n = static_cast<int>(w.rows());
    for (int i = 0; i < n; ++i) {
        int row_big = 0, col_big = 0;
        for (int j = 0; j < n; ++j) {
            double rij = std::abs(w(i, j)), cji = std::abs(w(j, i));
            if (rij > 0.5) ++row_big;
            else if (rij > tol) return false;
            if (cji > 0.5) ++col_big;
            else if (cji > tol) return false;
        }
        if (row_big != 1 || col_big != 1) return false;
    }
    return true;
}

bool hadamard_equivalent(const CMat& u, const CMat& v) {
    const int n = static_cast<int>(u.rows());
    if (u.rows() != u.cols() || v.rows() != v.cols() || v.rows() != n)
        fail("BadArgument", "orders differ");
    if (n > 5) fail("OrderTooLarge", "Hadamard equivalence search is capped at order 5");

    std::vector<int> p1(n), p2(n);
    std::iota(p1.begin(), p1.end(), 0);
    do {
        std::iota(p2.begin(), p2.end(), 0);
        do {
            // b = P1 v P2, test u = D1 b D2 by solving the phases from the
            // first row and column and verifying the rest.
            CMat b(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) b(i, j) = v(p1[i], p2[j]);
            bool ok = true;
            std::vector<Complex> d1(n), d2(n);
            for (int i = 0; i < n && ok; ++i) {
                if (std::abs(b(i, 0)) < 1e-12) { ok = false; break; }
                d1[i] = u(i, 0) / b(i, 0);
            }
            if (!ok) continue;
            for (int j = 0; j < n && ok; ++j) {
                if (std::abs(b(0, j)) < 1e-12) { ok = false; break; }
                d2[j] = u(0, j) / (d1[0] * b(0, j));
            }
            if (!ok) continue;
            for (int i = 0; i < n && ok; ++i)
                for (int j = 0; j < n && ok; ++j)
                    if (std::abs(u(i, j) - d1[i] * b(i, j) * d2[j]) > 1e-8) ok = false;
            if (ok) return true;
        } while (std::next_permutation(p2.begin(), p2.end()));
    } while (std::next_permutation(p1.begin(), p1.end()));
    return false;
}

ThetaClass classify_theta(const Angle& a_angle, const Angle& b_angle) {
    Angle t = (b_angle - a_angle).mod2();
    ThetaClass tc;
    tc.angle = t;
    tc.theta = unit_phase(t.radians());
    if (t.irrational) {
        tc.even_root = false;
        tc.m = 0;
        return tc;
    }
    if (t.is_zero_mod2() || t.is_pi_mod2())
        fail("DegeneratePair", "b = +-a leaves no pair to classify");
    // theta = exp(i pi p/q) in lowest terms; theta^m = 1 iff q | m and
    // (m/q) p is even. m = q fails either way (p odd when q even, q odd
    // otherwise), so the minimal even order is 2q; q >= 2 here, so m >= 4.
    long long q = t.den;
    tc.even_root = true;
    tc.m = 2 * q;
    return tc;
}

}  // namespace spinlab
