#include "spinlab/towers.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <random>

namespace spinlab {

namespace {

long long ipow(long long b, int e) {
    long long r = 1;
    while (e-- > 0) r *= b;
    return r;
}

int level_ambient(int n, int j) {
    // n^{k+1} at j = 2k, n^{k+2} at j = 2k+1
    return static_cast<int>(ipow(n, j / 2 + 1 + (j % 2)));
}

void check_tower_unitary(const CMat& u, int level) {
    if (u.rows() <= 64) {
        if (!is_unitary(u, tols::structural))
            fail("NotUnitary", "tower level " + std::to_string(level) + " lost unitarity");
        return;
    }
    std::mt19937_64 rng(0x7073u + level);
    std::normal_distribution<double> g(0.0, 1.0);
    for (int probe = 0; probe < 2; ++probe) {
        CVec x(u.rows());
        for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = Complex(g(rng), g(rng));
        if ((u.adjoint() * (u * x) - x).cwiseAbs().maxCoeff() > tols::structural * x.norm())
            fail("NotUnitary", "tower level " + std::to_string(level) + " lost unitarity");
    }
}

}  // namespace

SubAlgebra amplify_structured(int amp, const SubAlgebra& inner) {
    const auto& f = inner.structured_form();
    const int n = inner.ambient_dim();
    const int nn = amp * n;
    std::vector<int> offs(f.block_sizes.size() + 1, 0);
    for (size_t r = 0; r < f.block_sizes.size(); ++r)
        offs[r + 1] = offs[r] + f.block_sizes[r] * f.multiplicities[r];
    CMat q = CMat::Zero(nn, nn);
    for (size_t r = 0; r < f.block_sizes.size(); ++r) {
        const int c = f.block_sizes[r], m = f.multiplicities[r];
        for (int i = 0; i < c; ++i)
            for (int s = 0; s < amp; ++s)
                for (int t = 0; t < m; ++t)
                    q(static_cast<Eigen::Index>(s) * n + offs[r] + i * m + t,
                      static_cast<Eigen::Index>(amp) * offs[r] + (i * amp + s) * m + t) = 1.0;
    }
    std::vector<int> blocks = f.block_sizes;
    std::vector<int> mults;
    for (int m : f.multiplicities) mults.push_back(amp * m);
    CMat iv = CMat::Zero(nn, nn);
    for (int s = 0; s < amp; ++s) iv.block(static_cast<Eigen::Index>(s) * n, static_cast<Eigen::Index>(s) * n, n, n) = f.conjugator;
    return SubAlgebra::structured(nn, iv * q, std::move(blocks), std::move(mults));
}

CMat spin_jones_projection(int n, int k) {
    if (k < 1) fail("BadArgument", "Jones projections start at level 1");
    if (k % 2 == 1) {
        const int j = (k - 1) / 2;
        CMat e1 = CMat::Zero(n * n, n * n);
        for (int i = 0; i < n; ++i) e1.block(i * n, i * n, n, n) = unit_matrix(n, i, i);
        return kron(e1, CMat::Identity(ipow(n, j), ipow(n, j)));
    }
    const int j = k / 2;
    return kron(jones_j(n), CMat::Identity(ipow(n, j), ipow(n, j)));
}

CMat vertex_jones_projection(int k) {
    if (k < 1) fail("BadArgument", "vertex ladder starts at level 1");
    const int tail = static_cast<int>(ipow(2, k));
    CMat f = CMat::Zero(4, 4);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) f += 0.5 * kron(unit_matrix(2, i, j), unit_matrix(2, i, j));
    return kron(f, CMat::Identity(tail, tail));
}

CMat tower_w2k(int k) {
    CMat s1k = kron_pow(pauli(1), k);
    const int m = static_cast<int>(s1k.rows());
    CMat w = CMat::Zero(2 * m, 2 * m);
    w.topLeftCorner(m, m) = CMat::Identity(m, m);
    w.bottomRightCorner(m, m) = s1k;
    return w;
}

CMat tower_v2k(int k) {
    CMat v2(4, 4);
    v2 << 1, 0, 0, 0,
          0, 0, 1, 0,
          0, 1, 0, 0,
          0, 0, 0, 1;
    const int total = static_cast<int>(ipow(2, k + 1));
    CMat out = CMat::Identity(total, total);
    for (int j = 0; j < k; ++j) {
        CMat factor = kron(CMat::Identity(ipow(2, j), ipow(2, j)),
                           kron(v2, CMat::Identity(ipow(2, k - j - 1), ipow(2, k - j - 1))));
        out = out * factor;
    }
    return out;
}

Tower tower2(const HadamardMatrix& u, int jmax) {
    if (u.order != 2 || !is_complex_hadamard(u.matrix))
        fail("BadArgument", "tower2 needs a 2x2 complex Hadamard seed");
    CMat eta(2, 2), xi(2, 2);
    eta << u.matrix(0, 1) / u.matrix(0, 0), 0,
           0, u.matrix(1, 1) / u.matrix(1, 0);
    const double s = 1.0 / std::sqrt(2.0);
    xi << s, s * u.matrix(0, 1) / u.matrix(0, 0),
          s, s * u.matrix(1, 1) / u.matrix(1, 0);

    Tower t;
    t.family = Family::TwoByTwo;
    t.n = 2;
    t.seed = u;
    t.levels.push_back(u.matrix);
    for (int j = 1; j <= jmax; ++j) {
        if (j % 2 == 1) {
            const int k = (j - 1) / 2;
            const CMat& prev = t.levels[2 * k];
            const int m = static_cast<int>(prev.rows());
            CMat eta_k = k == 0 ? eta : kron(pauli(3), CMat::Identity(m / 2, m / 2));
            CMat next = CMat::Zero(2 * m, 2 * m);
            next.topLeftCorner(m, m) = prev;
            next.bottomRightCorner(m, m) = prev * eta_k;
            t.levels.push_back(std::move(next));
        } else {
            const int k = j / 2;
            const CMat& prev = t.levels[j - 1];
            CMat xi_k = k == 1 ? CMat(xi.adjoint()) : fourier_matrix(2);
            const int tail = static_cast<int>(prev.rows()) / 2;
            t.levels.push_back(prev * kron(xi_k, CMat::Identity(tail, tail)));
        }
    }
    for (int j = 0; j < static_cast<int>(t.levels.size()); ++j) {
        t.ambient.push_back(static_cast<int>(t.levels[j].rows()));
        if (t.ambient[j] != level_ambient(2, j)) fail("NumericalFailure", "tower ambient mismatch");
        check_tower_unitary(t.levels[j], j);
    }
    return t;
}

Tower tower4(const Angle& a_angle, int jmax) {
    HadamardMatrix u = hadamard4(a_angle);
    const Complex a = std::polar(1.0, a_angle.radians());
    const Complex i1(0, 1);
    CMat xi(4, 4);
    xi << 1, 1, 1, 1,
          -i1, a, i1, -a,
          1, -1, 1, -1,
          i1, a, -i1, -a;
    xi *= 0.5;
    std::array<CVec, 3> w_diag;
    for (auto& d : w_diag) d = CVec(4);
    w_diag[0] << i1, std::conj(a), -i1, -std::conj(a);
    w_diag[1] << 1, -1, 1, -1;
    w_diag[2] << -i1, std::conj(a), i1, -std::conj(a);

    Tower t;
    t.family = Family::FourByFour;
    t.n = 4;
    t.seed = u;
    t.levels.push_back(u.matrix);
    for (int j = 1; j <= jmax; ++j) {
        if (j % 2 == 1) {
            const CMat& prev = t.levels[j - 1];
            const int m = static_cast<int>(prev.rows());
            CMat next = CMat::Zero(4 * m, 4 * m);
            next.topLeftCorner(m, m) = prev;
            for (int b = 1; b <= 3; ++b) {
                CMat scaled = prev;  // prev * (W_b (x) I), a diagonal right factor
                const int tail = m / 4;
                for (int c = 0; c < 4; ++c)
                    scaled.middleCols(c * tail, tail) *= w_diag[b - 1](c);
                next.block(static_cast<Eigen::Index>(b) * m, static_cast<Eigen::Index>(b) * m, m, m) = scaled;
            }
            t.levels.push_back(std::move(next));
        } else {
            const CMat& prev = t.levels[j - 1];
            const int tail = static_cast<int>(prev.rows()) / 4;
            t.levels.push_back(prev * kron(xi, CMat::Identity(tail, tail)));
        }
    }
    for (int j = 0; j < static_cast<int>(t.levels.size()); ++j) {
        t.ambient.push_back(static_cast<int>(t.levels[j].rows()));
        if (t.ambient[j] != level_ambient(4, j)) fail("NumericalFailure", "tower ambient mismatch");
        check_tower_unitary(t.levels[j], j);
    }
    return t;
}

Tower build_tower(Family family, const Angle& param, int jmax) {
    return family == Family::TwoByTwo ? tower2(hadamard2(param), jmax) : tower4(param, jmax);
}

SubAlgebra standard_level_algebra(Family family, int j) {
    const int n = family == Family::TwoByTwo ? 2 : 4;
    if (j < 0) fail("BadArgument", "level must be >= 0");
    if (j % 2 == 0) {
        const int k = j / 2;
        return SubAlgebra::diag_tensor_full(n, static_cast<int>(ipow(n, k)));
    }
    const int k = (j - 1) / 2;
    return SubAlgebra::amplified_full(n, static_cast<int>(ipow(n, k + 1)));
}

SubAlgebra tower_level_algebra(const Tower& t, int j) {
    if (j < 0) return SubAlgebra::scalars(t.ambient.empty() ? t.n : t.ambient[0]);
    return standard_level_algebra(t.family, j).conjugated(t.u(j));
}

BasicStepReport verify_basic_step(const SubAlgebra& smaller, const SubAlgebra& mid,
                                  const CMat& e, const SubAlgebra& larger, double tol) {
    const int n = larger.ambient_dim();
    if (n > 64) fail("DimensionOverflow", "basic-step verification is capped at ambient 64");
    if (smaller.ambient_dim() != n || mid.ambient_dim() != n || e.rows() != n)
        fail("BadArgument", "basic-step inputs must share one ambient dimension");

    BasicStepReport rep;
    for (const CMat& s : smaller.basis())
        rep.commute_residual = std::max(rep.commute_residual, max_abs(e * s - s * e));
    for (const CMat& x : mid.basis())
        rep.expectation_residual =
            std::max(rep.expectation_residual, max_abs(e * x * e - smaller.expect(x) * e));

    // larger = span(mid + mid e mid); containment plus a dimension count is
    // enough since larger is an algebra containing mid and e
    const auto& mb = mid.basis();
    const auto& lb = larger.basis();
    const int dm = static_cast<int>(mb.size());
    const int dl = static_cast<int>(lb.size());
    CMat lmat(static_cast<Eigen::Index>(n) * n, dl);
    for (int i = 0; i < dl; ++i) lmat.col(i) = vec(lb[i]) / std::sqrt(static_cast<double>(n));
    CMat cand(static_cast<Eigen::Index>(n) * n, dm + dm * dm);
    for (int i = 0; i < dm; ++i) cand.col(i) = vec(mb[i]);
    for (int i = 0; i < dm; ++i) {
        CMat left = mb[i] * e;
        for (int j = 0; j < dm; ++j)
            cand.col(dm + i * dm + j) = vec(left * mb[j]);
    }
    CMat coeff = lmat.adjoint() * cand;
    CMat resid = cand - lmat * coeff;
    for (Eigen::Index c = 0; c < resid.cols(); ++c) {
        double nc = cand.col(c).norm();
        if (nc > 1e-12)
            rep.span_residual = std::max(rep.span_residual, resid.col(c).norm() / nc);
    }
    Eigen::JacobiSVD<CMat> svd(coeff);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > 1e-7 * sv(0)) ++rank;
    rep.generated_dim = rank;
    rep.expected_dim = dl;
    double res = std::max({rep.commute_residual, rep.expectation_residual, rep.span_residual});
    rep.pass = res <= tol && rep.generated_dim == rep.expected_dim;
    return rep;
}

namespace {

double span_equal_residual(const SubAlgebra& a, const SubAlgebra& b) {
    if (a.hs_dim() != b.hs_dim()) return 1.0;
    return std::max(a.contains_residual(b), b.contains_residual(a));
}

}  // namespace

Grid build_grid(Family family, const Angle& u_param, const Angle& v_param, int levels_k) {
    Grid g;
    g.family = family;
    const int n = family == Family::TwoByTwo ? 2 : 4;

    if (family == Family::TwoByTwo) {
        HadamardMatrix hu = hadamard2(u_param), hv = hadamard2(v_param);
        if (monomial_equivalent(hu.matrix, hv.matrix))
            fail("EquivalentSeeds", "the two seeds generate one ladder (beta = alpha or alpha +- pi)");
        g.tower_u = tower2(hu, 2 * levels_k);
        g.tower_v = tower2(hv, 2 * levels_k);
    } else {
        if (u_param.str() == v_param.str())
            fail("EquivalentSeeds", "identical seed parameters");
        classify_theta(u_param, v_param);  // throws DegeneratePair on b = +-a
        g.tower_u = tower4(u_param, 2 * levels_k + 1);
        g.tower_v = tower4(v_param, 2 * levels_k + 1);
    }

    for (int k = 0; k <= levels_k; ++k) {
        GridLevel lvl;
        lvl.index = family == Family::TwoByTwo ? 2 * k : 2 * k + 1;
        lvl.ambient = g.tower_u.ambient[lvl.index];
        lvl.Bu = tower_level_algebra(g.tower_u, lvl.index);
        lvl.Bv = tower_level_algebra(g.tower_v, lvl.index);

        if (family == Family::TwoByTwo) {
            lvl.A = SubAlgebra::full(lvl.ambient);
            if (k == 0) {
                lvl.C = SubAlgebra::scalars(2);
            } else {
                lvl.C = SubAlgebra::amplified_full(2, static_cast<int>(ipow(2, k)))
                            .conjugated(g.tower_u.u(2 * k) * tower_w2k(k));
            }
        } else {
            lvl.A = SubAlgebra::diag_tensor_full(4, lvl.ambient / 4);
            const CMat& u2k = g.tower_u.u(2 * k);
            const CMat& v2k = g.tower_v.u(2 * k);
            CMat uv = u2k.adjoint() * v2k;
            SubAlgebra com = commutant({CMat(uv * uv)}, lvl.ambient / 4);
            lvl.C = amplify_structured(4, com).conjugated(g.tower_u.u(2 * k + 1));
        }

        if (lvl.ambient <= 64) {
            lvl.c_cross_residual = span_equal_residual(lvl.C, intersect(lvl.Bu, lvl.Bv));
            if (lvl.c_cross_residual > 1e-7)
                fail("NumericalFailure", "structured C-level disagrees with the generic intersection");
            lvl.containment_residual =
                std::max({lvl.A.contains_residual(lvl.Bu), lvl.A.contains_residual(lvl.Bv),
                          lvl.Bu.contains_residual(lvl.C), lvl.Bv.contains_residual(lvl.C)});
        } else if (lvl.ambient <= 256) {
            std::mt19937_64 rng(0xC0FFEEull + k);
            double worst = 0.0;
            for (int probe = 0; probe < 2; ++probe) {
                CMat x = lvl.C.random_element(rng);
                worst = std::max({worst, lvl.Bu.membership_residual(x),
                                  lvl.Bv.membership_residual(x), lvl.A.membership_residual(x)});
            }
            lvl.containment_residual = worst;
        }
        if (lvl.containment_residual > tols::span)
            fail("NumericalFailure", "grid containment C within B^u, B^v failed");
        g.levels.push_back(std::move(lvl));
    }
    return g;
}

}  // namespace spinlab
