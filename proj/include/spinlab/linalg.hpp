// Dense complex matrix kernels: Kronecker products, spectra of normal
// matrices, nullspaces, and Hilbert-Schmidt orthonormalization.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace spinlab {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

/// Error with a stable machine-readable code ("NotNormal", "DimensionOverflow", ...).
class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& what)
        : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
    const std::string& code() const { return code_; }

private:
    std::string code_;
};

[[noreturn]] inline void fail(const std::string& code, const std::string& what) {
    throw Error(code, what);
}

namespace tols {
inline constexpr double structural = 1e-9;   // unitarity, exact identities
inline constexpr double spectra = 1e-7;      // eigenvalue clustering / reconstruction
inline constexpr double span = 1e-8;         // span equality / containment
inline constexpr double gram = 1e-10;        // orthonormality of HS bases
}  // namespace tols

// Normalized trace tr/N; the tracial state every inner product below uses.
double tr_norm(const CMat& a);

// <x,y> = tr_norm(y^dag x)
Complex hs_inner(const CMat& x, const CMat& y);
double hs_norm(const CMat& x);

double max_abs(const CMat& a);
bool is_unitary(const CMat& a, double tol = tols::structural);

CMat unit_matrix(int n, int i, int j);  // E_ij, 0-indexed
CMat pauli(int k);                      // sigma_1, sigma_2, sigma_3
CMat jones_j(int n);                    // (1/n) sum_ij E_ij
CMat fourier_matrix(int n);

CMat kron(const CMat& a, const CMat& b);
CMat kron_pow(const CMat& a, int k);  // a^{(k)} = a tensor ... tensor a; k = 0 gives [1]

CVec vec(const CMat& a);
CMat unvec(const CVec& v, int n);

struct SpectralDecomposition {
    std::vector<Complex> eigenvalues;   // one representative per cluster
    std::vector<CMat> projectors;       // orthogonal projections onto eigenspaces
    std::vector<int> multiplicities;    // cluster sizes = projector ranks
    CMat eigenvectors;                  // unitary, columns grouped by cluster
    std::vector<int> cluster_offsets;   // column offset of each cluster in `eigenvectors`
};

// Spectral decomposition of a normal matrix with eigenvalue clustering.
// Throws NotNormal / ClusterAmbiguity.
SpectralDecomposition eig_normal(const CMat& a, double cluster_tol = tols::spectra);

// Orthonormal basis (columns) of {x : |Ax| <= tol * |A|}.
CMat nullspace_basis(const CMat& a, double tol);

// Gram-Schmidt under the normalized HS inner product; dependent inputs dropped.
std::vector<CMat> orthonormalize_hs(const std::vector<CMat>& mats, int* rank_out = nullptr);

CMat random_unitary(int n, std::mt19937_64& rng);
CMat random_hermitian(int n, std::mt19937_64& rng);

}  // namespace spinlab
