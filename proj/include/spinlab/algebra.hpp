// Finite-dimensional unital *-subalgebras of M_N: spans, commutants,
// intersections, Wedderburn structure, trace-preserving conditional
// expectations, and inclusion matrices.
#pragma once

#include "spinlab/linalg.hpp"

#include <optional>
#include <random>
#include <vector>

namespace spinlab {

// Canonical block layout: the ambient space splits into consecutive segments,
// the r-th segment carries M_{n_r} tensor I_{m_r} (matrix part acting on the
// fast index). A structured algebra is a unitary conjugate of that pattern.
struct StructuredForm {
    CMat conjugator;                  // U, ambient x ambient
    std::vector<int> block_sizes;     // n_r
    std::vector<int> multiplicities;  // m_r
};

class SubAlgebra {
public:
    SubAlgebra() = default;

    // Spanning set; orthonormalized, identity adjoined, closure checked.
    static SubAlgebra from_basis(int ambient, const std::vector<CMat>& spanning,
                                 bool check_closure = true);
    // Pre-orthonormalized basis, no checks (internal fast path).
    static SubAlgebra from_orthonormal_basis(int ambient, std::vector<CMat> basis);
    static SubAlgebra structured(int ambient, const CMat& conjugator,
                                 std::vector<int> block_sizes, std::vector<int> multiplicities);

    static SubAlgebra full(int n);                    // M_n
    static SubAlgebra diagonal(int n);                // Delta_n
    static SubAlgebra scalars(int n);                 // C
    static SubAlgebra diag_tensor_full(int d, int b); // Delta_d (x) M_b
    static SubAlgebra amplified_full(int m, int b);   // C (x) M_b inside M_{mb}, x = I_m (x) A

    int ambient_dim() const { return ambient_; }
    int hs_dim() const;

    bool has_structured() const { return structured_.has_value(); }
    const StructuredForm& structured_form() const;

    // HS-orthonormal basis; built lazily, DimensionOverflow when the ambient
    // is too large to materialize (> 64).
    const std::vector<CMat>& basis() const;
    bool basis_available() const;

    SubAlgebra conjugated(const CMat& u) const;  // Ad_u

    // Trace-preserving conditional expectation applied to x.
    CMat expect(const CMat& x) const;
    // HS distance from x to the algebra, relative to |x|.
    double membership_residual(const CMat& x) const;
    // max residual of another algebra's basis under this expectation
    double contains_residual(const SubAlgebra& other) const;

    CMat random_element(std::mt19937_64& rng, bool hermitian = true) const;

private:
    int ambient_ = 0;
    mutable std::vector<CMat> basis_;
    std::optional<StructuredForm> structured_;

    void build_basis_from_structured() const;
};

struct Superoperator {
    int ambient = 0;
    CMat matrix;  // N^2 x N^2 acting on vec(x), column-major
    CMat apply(const CMat& x) const;
};

// E as an N^2 x N^2 matrix; capped at ambient 16.
Superoperator conditional_expectation(const SubAlgebra& a);

// Superoperator of x -> a x b.
Superoperator sandwich_superoperator(const CMat& a, const CMat& b);

// Smallest unital *-algebra containing the generators. DimensionOverflow
// beyond ambient 64.
SubAlgebra generate_algebra(const std::vector<CMat>& generators, int ambient);

// {x in M_N : [x, s] = 0 for all s}. The generic nullspace path is capped at
// ambient 64; a single normal generator takes the spectral path (any ambient)
// and returns a structured block algebra.
SubAlgebra commutant(const std::vector<CMat>& gens, int ambient, double tol = tols::span);
SubAlgebra commutant(const SubAlgebra& a, double tol = tols::span);

// {x in span(T) : [x, s] = 0 for all s in S}; returns an orthonormal basis of
// the solution space (an algebra whenever S is self-adjoint and T is one).
std::vector<CMat> commutant_in(const std::vector<CMat>& s, const SubAlgebra& t,
                               double tol = tols::span);

// Span intersection of two algebras, asserted to be an algebra.
SubAlgebra intersect(const SubAlgebra& a, const SubAlgebra& b, double tol = tols::span);

struct WedderburnData {
    std::vector<int> block_sizes;       // n_r
    std::vector<int> multiplicities;    // m_r
    std::vector<CMat> central_projections;
};

WedderburnData wedderburn(const SubAlgebra& a, std::mt19937_64& rng);

struct InclusionMatrix {
    Eigen::MatrixXi entries;   // rows: summands of the smaller algebra
    std::vector<double> s;     // minimal-projection traces, smaller
    std::vector<double> t;     // minimal-projection traces, larger
};

InclusionMatrix inclusion_matrix(const SubAlgebra& smaller, const SubAlgebra& larger,
                                 std::mt19937_64& rng);

double squared_norm(const InclusionMatrix& lambda);

}  // namespace spinlab
