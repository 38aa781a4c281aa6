#include "spinlab/algebra.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace spinlab {

namespace {

constexpr int kBasisAmbientCap = 64;
constexpr int kSuperoperatorCap = 16;

// offsets of the structured segments; segment r has size n_r * m_r
std::vector<int> segment_offsets(const StructuredForm& f) {
    std::vector<int> off(f.block_sizes.size() + 1, 0);
    for (size_t r = 0; r < f.block_sizes.size(); ++r)
        off[r + 1] = off[r] + f.block_sizes[r] * f.multiplicities[r];
    return off;
}

// orthogonal projection of y onto the canonical block pattern of f
CMat pattern_project(const StructuredForm& f, const CMat& y) {
    CMat out = CMat::Zero(y.rows(), y.cols());
    auto off = segment_offsets(f);
    for (size_t r = 0; r < f.block_sizes.size(); ++r) {
        const int n = f.block_sizes[r], m = f.multiplicities[r], o = off[r];
        CMat a = CMat::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                Complex acc = 0;
                for (int s = 0; s < m; ++s) acc += y(o + i * m + s, o + j * m + s);
                a(i, j) = acc / static_cast<double>(m);
            }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int s = 0; s < m; ++s) out(o + i * m + s, o + j * m + s) = a(i, j);
    }
    return out;
}

}  // namespace

SubAlgebra SubAlgebra::from_orthonormal_basis(int ambient, std::vector<CMat> basis) {
    SubAlgebra a;
    a.ambient_ = ambient;
    a.basis_ = std::move(basis);
    return a;
}

SubAlgebra SubAlgebra::from_basis(int ambient, const std::vector<CMat>& spanning,
                                  bool check_closure) {
    for (const CMat& m : spanning)
        if (m.rows() != ambient || m.cols() != ambient)
            fail("BadArgument", "spanning element has wrong ambient dimension");
    std::vector<CMat> gens = spanning;
    gens.push_back(CMat::Identity(ambient, ambient));
    for (const CMat& m : spanning) gens.push_back(m.adjoint());
    SubAlgebra a = from_orthonormal_basis(ambient, orthonormalize_hs(gens));
    if (check_closure) {
        const auto& b = a.basis_;
        const size_t d = b.size();
        double worst = 0.0;
        for (size_t i = 0; i < d; ++i)
            for (size_t j = 0; j < d; ++j)
                worst = std::max(worst, a.membership_residual(b[i] * b[j]));
        if (worst > tols::span)
            fail("NotAnAlgebra", "span is not closed under products (residual " +
                                     std::to_string(worst) + ")");
    }
    return a;
}

SubAlgebra SubAlgebra::structured(int ambient, const CMat& conjugator,
                                  std::vector<int> block_sizes, std::vector<int> multiplicities) {
    if (block_sizes.size() != multiplicities.size())
        fail("BadArgument", "block size / multiplicity lists differ in length");
    long long total = 0;
    for (size_t r = 0; r < block_sizes.size(); ++r)
        total += static_cast<long long>(block_sizes[r]) * multiplicities[r];
    if (total != ambient) fail("BadArgument", "structured blocks do not fill the ambient space");
    if (!is_unitary(conjugator)) fail("NotUnitary", "structured conjugator must be unitary");
    SubAlgebra a;
    a.ambient_ = ambient;
    a.structured_ = StructuredForm{conjugator, std::move(block_sizes), std::move(multiplicities)};
    return a;
}

SubAlgebra SubAlgebra::full(int n) {
    return structured(n, CMat::Identity(n, n), {n}, {1});
}

SubAlgebra SubAlgebra::diagonal(int n) {
    return structured(n, CMat::Identity(n, n), std::vector<int>(n, 1), std::vector<int>(n, 1));
}

SubAlgebra SubAlgebra::scalars(int n) {
    return structured(n, CMat::Identity(n, n), {1}, {n});
}

SubAlgebra SubAlgebra::diag_tensor_full(int d, int b) {
    return structured(d * b, CMat::Identity(d * b, d * b), std::vector<int>(d, b),
                      std::vector<int>(d, 1));
}

SubAlgebra SubAlgebra::amplified_full(int m, int b) {
    // I_m (x) A = Q (A (x) I_m) Q^dag with Q the index shuffle (i*m+s) -> (s*b+i)
    const int nb = m * b;
    CMat q = CMat::Zero(nb, nb);
    for (int i = 0; i < b; ++i)
        for (int s = 0; s < m; ++s) q(s * b + i, i * m + s) = 1.0;
    return structured(nb, q, {b}, {m});
}

int SubAlgebra::hs_dim() const {
    if (structured_) {
        int d = 0;
        for (int n : structured_->block_sizes) d += n * n;
        return d;
    }
    return static_cast<int>(basis_.size());
}

const StructuredForm& SubAlgebra::structured_form() const {
    if (!structured_) fail("BadArgument", "algebra has no structured form");
    return *structured_;
}

bool SubAlgebra::basis_available() const {
    return !basis_.empty() || ambient_ <= kBasisAmbientCap;
}

void SubAlgebra::build_basis_from_structured() const {
    const auto& f = *structured_;
    auto off = segment_offsets(f);
    std::vector<CMat> b;
    for (size_t r = 0; r < f.block_sizes.size(); ++r) {
        const int n = f.block_sizes[r], m = f.multiplicities[r], o = off[r];
        const double scale = std::sqrt(static_cast<double>(ambient_) / m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                CMat e = CMat::Zero(ambient_, ambient_);
                for (int s = 0; s < m; ++s) e(o + i * m + s, o + j * m + s) = scale;
                b.push_back(f.conjugator * e * f.conjugator.adjoint());
            }
    }
    basis_ = std::move(b);
}

const std::vector<CMat>& SubAlgebra::basis() const {
    if (basis_.empty()) {
        if (!structured_) fail("BadArgument", "empty algebra");
        if (ambient_ > kBasisAmbientCap)
            fail("DimensionOverflow",
                 "basis materialization is capped at ambient 64, got " + std::to_string(ambient_));
        build_basis_from_structured();
    }
    return basis_;
}

SubAlgebra SubAlgebra::conjugated(const CMat& u) const {
    if (!is_unitary(u)) fail("NotUnitary", "conjugation needs a unitary");
    SubAlgebra a;
    a.ambient_ = ambient_;
    if (structured_) {
        a.structured_ = StructuredForm{u * structured_->conjugator, structured_->block_sizes,
                                       structured_->multiplicities};
    } else {
        a.basis_.reserve(basis_.size());
        for (const CMat& b : basis_) a.basis_.push_back(u * b * u.adjoint());
    }
    return a;
}

CMat SubAlgebra::expect(const CMat& x) const {
    if (structured_) {
        const CMat& u = structured_->conjugator;
        return u * pattern_project(*structured_, u.adjoint() * x * u) * u.adjoint();
    }
    CMat out = CMat::Zero(ambient_, ambient_);
    for (const CMat& b : basis_) out += hs_inner(x, b) * b;
    return out;
}

double SubAlgebra::membership_residual(const CMat& x) const {
    double nx = hs_norm(x);
    if (nx <= 1e-300) return 0.0;
    return hs_norm(x - expect(x)) / nx;
}

double SubAlgebra::contains_residual(const SubAlgebra& other) const {
    double worst = 0.0;
    for (const CMat& b : other.basis()) worst = std::max(worst, membership_residual(b));
    return worst;
}

CMat SubAlgebra::random_element(std::mt19937_64& rng, bool hermitian) const {
    std::normal_distribution<double> g(0.0, 1.0);
    CMat x = CMat::Zero(ambient_, ambient_);
    if (structured_) {
        const auto& f = *structured_;
        auto off = segment_offsets(f);
        for (size_t r = 0; r < f.block_sizes.size(); ++r) {
            const int n = f.block_sizes[r], m = f.multiplicities[r], o = off[r];
            CMat a(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) a(i, j) = Complex(g(rng), g(rng));
            if (hermitian) a = 0.5 * (a + a.adjoint()).eval();
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    for (int s = 0; s < m; ++s) x(o + i * m + s, o + j * m + s) = a(i, j);
        }
        return f.conjugator * x * f.conjugator.adjoint();
    }
    for (const CMat& b : basis_) x += Complex(g(rng), g(rng)) * b;
    if (hermitian) x = 0.5 * (x + x.adjoint()).eval();
    return x;
}

CMat Superoperator::apply(const CMat& x) const {
    return unvec(matrix * vec(x), ambient);
}

Superoperator conditional_expectation(const SubAlgebra& a) {
    const int n = a.ambient_dim();
    if (n > kSuperoperatorCap)
        fail("DimensionOverflow",
             "superoperators are capped at ambient 16, got " + std::to_string(n));
    Superoperator e;
    e.ambient = n;
    e.matrix = CMat::Zero(n * n, n * n);
    for (const CMat& b : a.basis()) {
        CVec v = vec(b);
        e.matrix += v * v.adjoint() / static_cast<double>(n);
    }
    return e;
}

Superoperator sandwich_superoperator(const CMat& a, const CMat& b) {
    Superoperator s;
    s.ambient = static_cast<int>(a.rows());
    s.matrix = kron(b.transpose(), a);  // vec(a x b) = (b^T kron a) vec(x)
    return s;
}

SubAlgebra generate_algebra(const std::vector<CMat>& generators, int ambient) {
    if (ambient > kBasisAmbientCap)
        fail("DimensionOverflow",
             "span closure is quadratic in the basis; ambients beyond 64 need structured forms");
    std::vector<CMat> seed;
    seed.push_back(CMat::Identity(ambient, ambient));
    for (const CMat& g : generators) {
        if (g.rows() != ambient || g.cols() != ambient)
            fail("BadArgument", "generator has wrong ambient dimension");
        seed.push_back(g);
        seed.push_back(g.adjoint());
    }
    std::vector<CMat> basis = orthonormalize_hs(seed);
    const int max_dim = ambient * ambient;
    while (static_cast<int>(basis.size()) < max_dim) {
        std::vector<CMat> grown = basis;
        for (size_t i = 0; i < basis.size(); ++i) {
            grown.push_back(basis[i].adjoint());
            for (size_t j = 0; j < basis.size(); ++j) grown.push_back(basis[i] * basis[j]);
        }
        std::vector<CMat> next = orthonormalize_hs(grown);
        if (next.size() == basis.size()) break;
        basis = std::move(next);
    }
    return SubAlgebra::from_orthonormal_basis(ambient, std::move(basis));
}

namespace {

SubAlgebra commutant_of_normal(const CMat& g, int ambient, double cluster_tol) {
    SpectralDecomposition dec = eig_normal(g, cluster_tol);
    std::vector<int> blocks = dec.multiplicities;
    std::vector<int> mults(blocks.size(), 1);
    return SubAlgebra::structured(ambient, dec.eigenvectors, std::move(blocks), std::move(mults));
}

}  // namespace

std::vector<CMat> commutant_in(const std::vector<CMat>& s, const SubAlgebra& t, double tol) {
    const int n = t.ambient_dim();
    const auto& tb = t.basis();
    const int d = static_cast<int>(tb.size());
    CMat stack(static_cast<Eigen::Index>(s.size()) * n * n, d);
    for (size_t k = 0; k < s.size(); ++k)
        for (int c = 0; c < d; ++c)
            stack.block(static_cast<Eigen::Index>(k) * n * n, c, n * n, 1) =
                vec(tb[c] * s[k] - s[k] * tb[c]);
    CMat null_cols = nullspace_basis(stack, tol);
    std::vector<CMat> out;
    for (int c = 0; c < null_cols.cols(); ++c) {
        CMat x = CMat::Zero(n, n);
        for (int i = 0; i < d; ++i) x += null_cols(i, c) * tb[i];
        out.push_back(x);
    }
    return orthonormalize_hs(out);
}

SubAlgebra commutant(const std::vector<CMat>& gens, int ambient, double tol) {
    if (gens.size() == 1 && max_abs(gens[0] * gens[0].adjoint() - gens[0].adjoint() * gens[0]) <= 1e-8)
        return commutant_of_normal(gens[0], ambient, tols::spectra);
    if (ambient > kBasisAmbientCap)
        fail("DimensionOverflow", "generic commutant path is capped at ambient 64");
    std::vector<CMat> self_adjoint = gens;
    for (const CMat& g : gens) self_adjoint.push_back(g.adjoint());
    return SubAlgebra::from_orthonormal_basis(
        ambient, commutant_in(self_adjoint, SubAlgebra::full(ambient), tol));
}

SubAlgebra commutant(const SubAlgebra& a, double tol) {
    return commutant(a.basis(), a.ambient_dim(), tol);
}

SubAlgebra intersect(const SubAlgebra& a, const SubAlgebra& b, double tol) {
    if (a.ambient_dim() != b.ambient_dim()) fail("BadArgument", "ambient dimensions differ");
    const int n = a.ambient_dim();
    if (n > kBasisAmbientCap) fail("DimensionOverflow", "intersection basis path capped at 64");
    const auto& ab = a.basis();
    const auto& bb = b.basis();
    const int da = static_cast<int>(ab.size()), db = static_cast<int>(bb.size());
    CMat stack(n * n, da + db);
    for (int i = 0; i < da; ++i) stack.col(i) = vec(ab[i]);
    for (int i = 0; i < db; ++i) stack.col(da + i) = -vec(bb[i]);
    CMat null_cols = nullspace_basis(stack, tol);
    std::vector<CMat> raw;
    for (int c = 0; c < null_cols.cols(); ++c) {
        CMat x = CMat::Zero(n, n);
        for (int i = 0; i < da; ++i) x += null_cols(i, c) * ab[i];
        raw.push_back(x);
    }
    SubAlgebra out = SubAlgebra::from_orthonormal_basis(n, orthonormalize_hs(raw));
    // intersections of algebras must already be closed; assert instead of re-closing
    double worst = 0.0;
    for (const CMat& x : out.basis())
        for (const CMat& y : out.basis())
            worst = std::max(worst, out.membership_residual(x * y));
    if (worst > 1e-7)
        fail("NotAnAlgebra", "intersection failed the closure assertion (residual " +
                                 std::to_string(worst) + ")");
    return out;
}

WedderburnData wedderburn(const SubAlgebra& a, std::mt19937_64& rng) {
    WedderburnData w;
    const int n = a.ambient_dim();
    if (a.has_structured()) {
        const auto& f = a.structured_form();
        w.block_sizes = f.block_sizes;
        w.multiplicities = f.multiplicities;
        auto off = segment_offsets(f);
        for (size_t r = 0; r < f.block_sizes.size(); ++r) {
            CMat z = CMat::Zero(n, n);
            const int len = f.block_sizes[r] * f.multiplicities[r];
            z.block(off[r], off[r], len, len) = CMat::Identity(len, len);
            w.central_projections.push_back(f.conjugator * z * f.conjugator.adjoint());
        }
        return w;
    }

    std::vector<CMat> center = commutant_in(a.basis(), a);
    for (int attempt = 0; attempt < 3; ++attempt) {
        std::normal_distribution<double> g(0.0, 1.0);
        CMat h = CMat::Zero(n, n);
        for (const CMat& c : center) h += Complex(g(rng), g(rng)) * c;
        h = 0.5 * (h + h.adjoint()).eval();
        SpectralDecomposition dec;
        try {
            dec = eig_normal(h, 1e-6 * std::max(1.0, max_abs(h)));
        } catch (const Error&) {
            continue;
        }
        if (dec.eigenvalues.size() != center.size()) continue;  // degenerate draw

        WedderburnData cand;
        bool ok = true;
        int covered = 0;
        for (size_t r = 0; r < dec.projectors.size() && ok; ++r) {
            const CMat& z = dec.projectors[r];
            std::vector<CMat> corner;
            for (const CMat& b : a.basis()) corner.push_back(z * b * z);
            int dim = 0;
            orthonormalize_hs(corner, &dim);
            int nr = static_cast<int>(std::lround(std::sqrt(static_cast<double>(dim))));
            if (nr * nr != dim) { ok = false; break; }
            int rank = static_cast<int>(std::lround(z.trace().real()));
            if (nr == 0 || rank % nr != 0) { ok = false; break; }
            cand.block_sizes.push_back(nr);
            cand.multiplicities.push_back(rank / nr);
            cand.central_projections.push_back(z);
            covered += rank;
        }
        if (ok && covered == n) return cand;
    }
    fail("CenterDegenerate", "random center elements kept clustered spectra after 3 retries");
}

namespace {

// trace(e z) for projections given by isometry factors (p = w w^dag)
double overlap_trace(const CMat& we, const CMat& wz) {
    return (wz.adjoint() * we).squaredNorm();
}

// fast path: both algebras structured, everything from conjugator columns
InclusionMatrix inclusion_matrix_structured(const SubAlgebra& smaller, const SubAlgebra& larger) {
    const auto& fs = smaller.structured_form();
    const auto& fl = larger.structured_form();
    const int n = smaller.ambient_dim();
    auto offs = segment_offsets(fs);
    auto offl = segment_offsets(fl);
    const int rows = static_cast<int>(fs.block_sizes.size());
    const int cols = static_cast<int>(fl.block_sizes.size());
    InclusionMatrix lam;
    lam.entries = Eigen::MatrixXi(rows, cols);
    for (int r = 0; r < rows; ++r) {
        // minimal projection of summand r: E_11 (x) I_{m_r} pattern
        CMat we = fs.conjugator.middleCols(offs[r], fs.multiplicities[r]);
        for (int l = 0; l < cols; ++l) {
            const int seg = fl.block_sizes[l] * fl.multiplicities[l];
            CMat wz = fl.conjugator.middleCols(offl[l], seg);
            double a = overlap_trace(we, wz) * fl.block_sizes[l] / seg;
            long long rounded = std::llround(a);
            if (std::abs(a - static_cast<double>(rounded)) > 1e-6)
                fail("NonIntegerEntry", "inclusion-matrix entry " + std::to_string(a) +
                                            " is not close to an integer");
            lam.entries(r, l) = static_cast<int>(rounded);
        }
    }
    for (int l = 0; l < cols; ++l)
        lam.t.push_back(static_cast<double>(fl.multiplicities[l]) / n);
    for (int r = 0; r < rows; ++r)
        lam.s.push_back(static_cast<double>(fs.multiplicities[r]) / n);
    for (int r = 0; r < rows; ++r) {
        double acc = 0;
        for (int l = 0; l < cols; ++l) acc += lam.entries(r, l) * lam.t[l];
        if (std::abs(acc - lam.s[r]) > tols::span)
            fail("NonIntegerEntry", "trace-vector consistency check failed");
    }
    return lam;
}

}  // namespace

InclusionMatrix inclusion_matrix(const SubAlgebra& smaller, const SubAlgebra& larger,
                                 std::mt19937_64& rng) {
    if (smaller.ambient_dim() != larger.ambient_dim())
        fail("BadArgument", "ambient dimensions differ");
    const int n = smaller.ambient_dim();

    if (n <= kBasisAmbientCap && larger.contains_residual(smaller) > tols::span)
        fail("NotIncluded", "smaller algebra does not embed in the larger one");

    if (smaller.has_structured() && larger.has_structured())
        return inclusion_matrix_structured(smaller, larger);
    if (n > kBasisAmbientCap)
        fail("DimensionOverflow", "dense inclusion-matrix path is capped at ambient 64");

    WedderburnData wn = wedderburn(smaller, rng);
    WedderburnData wm = wedderburn(larger, rng);
    const int rows = static_cast<int>(wn.block_sizes.size());
    const int cols = static_cast<int>(wm.block_sizes.size());

    // minimal projection of each summand of the smaller algebra
    std::vector<CMat> min_projs(rows);
    if (smaller.has_structured()) {
        const auto& f = smaller.structured_form();
        auto off = segment_offsets(f);
        for (int r = 0; r < rows; ++r) {
            const int m = f.multiplicities[r], o = off[r];
            CMat e = CMat::Zero(n, n);
            for (int s = 0; s < m; ++s) e(o + s, o + s) = 1.0;  // E_11 (x) I_m pattern
            min_projs[r] = f.conjugator * e * f.conjugator.adjoint();
        }
    } else {
        for (int r = 0; r < rows; ++r) {
            const CMat& z = wn.central_projections[r];
            std::vector<CMat> corner;
            for (const CMat& b : smaller.basis()) corner.push_back(z * b * z);
            std::vector<CMat> cb = orthonormalize_hs(corner);
            bool found = false;
            for (int attempt = 0; attempt < 3 && !found; ++attempt) {
                std::normal_distribution<double> g(0.0, 1.0);
                CMat h = CMat::Zero(n, n);
                for (const CMat& c : cb) h += Complex(g(rng), g(rng)) * c;
                h = 0.5 * (h + h.adjoint()).eval();
                SpectralDecomposition dec;
                try {
                    dec = eig_normal(h, 1e-6 * std::max(1.0, max_abs(h)));
                } catch (const Error&) {
                    continue;
                }
                for (size_t c = 0; c < dec.projectors.size(); ++c) {
                    if (dec.multiplicities[c] == wn.multiplicities[r] &&
                        std::abs(dec.eigenvalues[c]) > 1e-8) {
                        min_projs[r] = dec.projectors[c];
                        found = true;
                        break;
                    }
                }
            }
            if (!found) fail("CenterDegenerate", "could not isolate a minimal projection");
        }
    }

    InclusionMatrix lam;
    lam.entries = Eigen::MatrixXi(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int l = 0; l < cols; ++l) {
            const CMat& z = wm.central_projections[l];
            double rank_ez = (min_projs[r] * z).trace().real();
            double rank_z = std::lround(z.trace().real());
            double a = rank_ez * wm.block_sizes[l] / rank_z;
            long long rounded = std::llround(a);
            if (std::abs(a - static_cast<double>(rounded)) > 1e-6)
                fail("NonIntegerEntry", "inclusion-matrix entry " + std::to_string(a) +
                                            " is not close to an integer");
            lam.entries(r, l) = static_cast<int>(rounded);
        }

    for (int l = 0; l < cols; ++l) {
        double rank_z = std::lround(wm.central_projections[l].trace().real());
        lam.t.push_back(rank_z / wm.block_sizes[l] / n);
    }
    for (int r = 0; r < rows; ++r) {
        double rank_z = std::lround(wn.central_projections[r].trace().real());
        lam.s.push_back(rank_z / wn.block_sizes[r] / n);
    }
    // Lambda t = s
    for (int r = 0; r < rows; ++r) {
        double acc = 0;
        for (int l = 0; l < cols; ++l) acc += lam.entries(r, l) * lam.t[l];
        if (std::abs(acc - lam.s[r]) > tols::span)
            fail("NonIntegerEntry", "trace-vector consistency check failed");
    }
    return lam;
}

double squared_norm(const InclusionMatrix& lambda) {
    Eigen::MatrixXd l = lambda.entries.cast<double>();
    Eigen::MatrixXd g = l * l.transpose();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g);
    return es.eigenvalues().maxCoeff();
}

}  // namespace spinlab
