#include "spinlab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinlab {

double tr_norm(const CMat& a) {
    return a.trace().real() / static_cast<double>(a.rows());
}

Complex hs_inner(const CMat& x, const CMat& y) {
    return (y.adjoint() * x).trace() / static_cast<double>(x.rows());
}

double hs_norm(const CMat& x) {
    return std::sqrt(std::max(0.0, hs_inner(x, x).real()));
}

double max_abs(const CMat& a) {
    return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff();
}

bool is_unitary(const CMat& a, double tol) {
    if (a.rows() != a.cols()) return false;
    CMat d = a * a.adjoint() - CMat::Identity(a.rows(), a.cols());
    return max_abs(d) <= tol;
}

CMat unit_matrix(int n, int i, int j) {
    CMat e = CMat::Zero(n, n);
    e(i, j) = 1.0;
    return e;
}

CMat pauli(int k) {
    CMat s(2, 2);
    switch (k) {
        case 1: s << 0, 1, 1, 0; break;
        case 2: s << 0, Complex(0, -1), Complex(0, 1), 0; break;
        case 3: s << 1, 0, 0, -1; break;
        default: fail("BadArgument", "pauli index must be 1, 2 or 3");
    }
    return s;
}

CMat jones_j(int n) {
    return CMat::Constant(n, n, Complex(1.0 / n, 0.0));
}

CMat fourier_matrix(int n) {
    CMat f(n, n);
    const double s = 1.0 / std::sqrt(static_cast<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            double ph = 2.0 * M_PI * static_cast<double>((static_cast<long long>(i) * j) % n) / n;
            f(i, j) = s * Complex(std::cos(ph), std::sin(ph));
        }
    return f;
}

CMat kron(const CMat& a, const CMat& b) {
    const Eigen::Index ra = a.rows(), ca = a.cols(), rb = b.rows(), cb = b.cols();
    CMat out(ra * rb, ca * cb);
    for (Eigen::Index i = 0; i < ra; ++i)
        for (Eigen::Index j = 0; j < ca; ++j)
            out.block(i * rb, j * cb, rb, cb) = a(i, j) * b;
    return out;
}

CMat kron_pow(const CMat& a, int k) {
    CMat out = CMat::Identity(1, 1);
    for (int i = 0; i < k; ++i) out = kron(out, a);
    return out;
}

CVec vec(const CMat& a) {
    return Eigen::Map<const CVec>(a.data(), a.size());
}

CMat unvec(const CVec& v, int n) {
    return Eigen::Map<const CMat>(v.data(), n, n);
}

namespace {

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); }
    void unite(int i, int j) { parent[find(i)] = find(j); }
};

}  // namespace

SpectralDecomposition eig_normal(const CMat& a, double cluster_tol) {
    const int n = static_cast<int>(a.rows());
    if (a.rows() != a.cols()) fail("BadArgument", "eig_normal needs a square matrix");
    if (max_abs(a * a.adjoint() - a.adjoint() * a) > 1e-8)
        fail("NotNormal", "matrix is not normal within 1e-8");

    Eigen::ComplexSchur<CMat> schur(a, true);
    if (schur.info() != Eigen::Success) fail("NumericalFailure", "Schur decomposition failed");
    CVec evs = schur.matrixT().diagonal();
    CMat q = schur.matrixU();

    DisjointSet ds(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (std::abs(evs(i) - evs(j)) <= cluster_tol) ds.unite(i, j);

    std::vector<std::vector<int>> groups;
    {
        std::vector<int> root_to_group(n, -1);
        for (int i = 0; i < n; ++i) {
            int r = ds.find(i);
            if (root_to_group[r] < 0) {
                root_to_group[r] = static_cast<int>(groups.size());
                groups.emplace_back();
            }
            groups[root_to_group[r]].push_back(i);
        }
    }
    // deterministic ordering: by argument of the cluster mean
    std::vector<Complex> reps(groups.size());
    for (size_t g = 0; g < groups.size(); ++g) {
        Complex m = 0;
        for (int i : groups[g]) m += evs(i);
        reps[g] = m / static_cast<double>(groups[g].size());
    }
    std::vector<int> order(groups.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int x, int y) {
        double ax = std::arg(reps[x]), ay = std::arg(reps[y]);
        if (ax < -1e-12) ax += 2 * M_PI;  // canonical argument in [0, 2pi)
        if (ay < -1e-12) ay += 2 * M_PI;
        return ax < ay;
    });

    for (size_t x = 0; x < order.size(); ++x)
        for (size_t y = x + 1; y < order.size(); ++y) {
            double d = std::abs(reps[order[x]] - reps[order[y]]);
            if (d >= cluster_tol && d < 2.0 * cluster_tol)
                fail("ClusterAmbiguity", "two eigenvalue clusters are separated by less than twice the cluster tolerance");
        }

    SpectralDecomposition dec;
    dec.eigenvectors = CMat(n, n);
    int col = 0;
    CMat recon = CMat::Zero(n, n);
    for (int g : order) {
        dec.cluster_offsets.push_back(col);
        CMat p = CMat::Zero(n, n);
        for (int i : groups[g]) {
            dec.eigenvectors.col(col++) = q.col(i);
            p += q.col(i) * q.col(i).adjoint();
        }
        dec.eigenvalues.push_back(reps[g]);
        dec.projectors.push_back(p);
        dec.multiplicities.push_back(static_cast<int>(std::lround(p.trace().real())));
        recon += reps[g] * p;
    }
    if (max_abs(a - recon) > tols::spectra)
        fail("NumericalFailure", "spectral reconstruction residual exceeds 1e-7");
    return dec;
}

CMat nullspace_basis(const CMat& a, double tol) {
    if (a.size() == 0) return CMat(0, 0);
    Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv(0) : 0.0;
    int null_dim = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) <= tol * smax) ++null_dim;
    null_dim += static_cast<int>(a.cols()) - static_cast<int>(sv.size());
    if (smax == 0.0) null_dim = static_cast<int>(a.cols());
    return svd.matrixV().rightCols(null_dim);
}

std::vector<CMat> orthonormalize_hs(const std::vector<CMat>& mats, int* rank_out) {
    std::vector<CMat> basis;
    for (const CMat& m : mats) {
        double scale = hs_norm(m);
        if (scale <= 1e-14) continue;
        CMat r = m;
        for (int pass = 0; pass < 2; ++pass)
            for (const CMat& b : basis) r -= hs_inner(r, b) * b;
        double nr = hs_norm(r);
        if (nr <= 1e-8 * scale) continue;  // dependent input, dropped
        basis.push_back(r / nr);
    }
    if (rank_out) *rank_out = static_cast<int>(basis.size());
    return basis;
}

CMat random_unitary(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    Eigen::HouseholderQR<CMat> qr(z);
    CMat q = qr.householderQ();
    CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int i = 0; i < n; ++i) {
        Complex d = r(i, i);
        q.col(i) *= (std::abs(d) > 0 ? d / std::abs(d) : Complex(1, 0));
    }
    return q;
}

CMat random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat z(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) z(i, j) = Complex(g(rng), g(rng));
    return 0.5 * (z + z.adjoint());
}

}  // namespace spinlab
