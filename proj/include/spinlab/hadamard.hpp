// Complex Hadamard matrices: the 2x2 and 4x4 families, Fourier matrices,
// Hamming numbers, monomial and Hadamard equivalence, and the classification
// of theta = conj(a)*b by its minimal even order.
#pragma once

#include "spinlab/linalg.hpp"

#include <optional>
#include <string>
#include <vector>

namespace spinlab {

// An angle kept as an exact rational multiple of pi, or a declared-irrational
// value in radians. The rational path is exact: the finite/infinite index
// dichotomy is discontinuous and cannot be decided in floating point.
struct Angle {
    bool irrational = false;
    long long num = 0;  // (num/den) * pi, den > 0, gcd(num, den) = 1
    long long den = 1;
    double raw = 0.0;  // radians, irrational case only

    static Angle rational(long long p, long long q);
    static Angle irrational_radians(double r);

    // "p/q" or "p" meaning (p/q)*pi; "irr:<radians>". Anything else rejected.
    static Angle parse(const std::string& s);

    double radians() const;
    Angle operator-(const Angle& o) const;
    Angle operator+(const Angle& o) const;
    Angle mod2() const;  // representative with value in [0, 2) (times pi)
    bool is_zero_mod2() const;
    bool is_pi_mod2() const;
    std::string str() const;
};

enum class HadamardFamily { Fourier, TwoByTwo, FourByFour };

struct HadamardMatrix {
    int order = 0;
    CMat matrix;
    HadamardFamily family = HadamardFamily::Fourier;
    std::vector<Angle> parameters;
};

struct ThetaClass {
    Complex theta;          // conj(a) * b
    Angle angle;            // its angle, exact when rational
    bool even_root = false; // theta^m = 1 for the minimal even m >= 4
    long long m = 0;        // minimal even order; 0 when not an even root
};

HadamardMatrix fourier(int n);
HadamardMatrix hadamard2(const Angle& alpha);
HadamardMatrix hadamard2_full(const Angle& a1, const Angle& a2, const Angle& a3);
HadamardMatrix hadamard4(const Angle& phi);  // OutOfParameterRange unless phi in [0, pi)

bool is_complex_hadamard(const CMat& u, double tol = tols::structural);

int hamming(const CVec& v, double tol = 1e-8);  // ZeroVector on v = 0

// u ~ v: v = u * (unitary monomial). Detected through the modulus pattern of
// u^dag v; a unitary is monomial iff each row/column has a single unit entry.
bool monomial_equivalent(const CMat& u, const CMat& v, double tol = 1e-8);

// Hadamard equivalence u = D1 P1 v P2 D2, exhaustive over permutation pairs.
// OrderTooLarge beyond n = 5.
bool hadamard_equivalent(const CMat& u, const CMat& v);

// theta = conj(a) b for 4x4 circle parameters given as angles (times pi).
// DegeneratePair when b = +-a.
ThetaClass classify_theta(const Angle& a_angle, const Angle& b_angle);

}  // namespace spinlab
