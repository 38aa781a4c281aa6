#include "spinlab/invariants.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace spinlab {

double eta(double t) {
    if (t < 0) fail("NegativeInput", "eta is defined on t >= 0");
    return t == 0.0 ? 0.0 : -t * std::log(t);
}

double lambda_masa_hamming(const CMat& u) {
    if (!is_unitary(u)) fail("NotUnitary", "lambda needs a unitary");
    CMat ud = u.adjoint();
    double best = 1.0;
    for (Eigen::Index i = 0; i < ud.cols(); ++i)
        best = std::min(best, 1.0 / hamming(ud.col(i)));
    return best;
}

double lambda_masa_oracle(const CMat& u, double tol) {
    if (!is_unitary(u)) fail("NotUnitary", "lambda needs a unitary");
    const int n = static_cast<int>(u.rows());
    double best = 1.0;
    for (int i = 0; i < n; ++i) {
        // M = w w^dag with w the i-th column of U^dag; D = diag(M)
        CVec w = u.adjoint().col(i);
        std::vector<int> support;
        for (int j = 0; j < n; ++j)
            if (std::abs(w(j)) > tol) support.push_back(j);
        const int k = static_cast<int>(support.size());
        if (k == 0) fail("NotUnitary", "zero column in a unitary");
        // t_i = 1 / lambda_max(D^{-1/2} M D^{-1/2}) on the support; since the
        // kernel of D never meets the range of M here, no zero branch arises
        CVec g(k);
        for (int j = 0; j < k; ++j) g(j) = w(support[j]) / std::abs(w(support[j]));
        CMat compressed = g * g.adjoint();
        Eigen::SelfAdjointEigenSolver<CMat> es(compressed);
        best = std::min(best, 1.0 / es.eigenvalues().maxCoeff());
    }
    return best;
}

BlockFactorResult lambda_block_factor(const CMat& u1, const CMat& u2, double tol) {
    if (!is_unitary(u1, 10 * tol) || !is_unitary(u2, 10 * tol))
        fail("NotUnitary", "block factors must be unitary");
    if (u1.rows() != u2.rows()) fail("BadArgument", "block orders differ");
    CMat v = u1.adjoint() * u2;
    const int n = static_cast<int>(v.rows());
    double off = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (i != j) off = std::max(off, std::abs(v(i, j)));
    if (off > tol) return {LambdaClass::Half, 0.5};
    Complex d0 = v(0, 0);
    double scatter = 0.0;
    for (int i = 0; i < n; ++i) scatter = std::max(scatter, std::abs(v(i, i) - d0));
    if (scatter <= tol) return {LambdaClass::One, 1.0};
    return {LambdaClass::DiagonalNonScalar, std::nullopt};
}

PPData make_ppdata(const InclusionMatrix& lambda, const std::vector<int>& n_blocks,
                   const std::vector<int>& m_blocks) {
    PPData d;
    d.a = lambda.entries;
    d.n = n_blocks;
    d.m = m_blocks;
    d.s = lambda.s;
    d.t = lambda.t;
    for (size_t r = 0; r < d.n.size(); ++r) {
        double acc = 0;
        for (size_t l = 0; l < d.m.size(); ++l) acc += d.a(r, l) * d.t[l];
        if (std::abs(acc - d.s[r]) > tols::span)
            fail("BadArgument", "inclusion data violates Lambda t = s");
    }
    for (size_t l = 0; l < d.m.size(); ++l) {
        double acc = 0;
        for (size_t r = 0; r < d.n.size(); ++r) acc += d.a(r, l) * d.n[r];
        if (std::abs(acc - d.m[l]) > tols::span)
            fail("BadArgument", "inclusion data violates Lambda^T n = m");
    }
    return d;
}

PPData make_ppdata(const SubAlgebra& smaller, const SubAlgebra& larger, std::mt19937_64& rng) {
    InclusionMatrix lam = inclusion_matrix(smaller, larger, rng);
    WedderburnData wn = wedderburn(smaller, rng);
    WedderburnData wm = wedderburn(larger, rng);
    return make_ppdata(lam, wn.block_sizes, wm.block_sizes);
}

double pp_lambda_inclusion(const PPData& d) {
    double worst = 0;
    for (size_t l = 0; l < d.m.size(); ++l) {
        double acc = 0;
        for (size_t r = 0; r < d.n.size(); ++r)
            acc += std::min(d.a(r, l), d.n[r]) * d.s[r] / d.t[l];
        worst = std::max(worst, acc);
    }
    return 1.0 / worst;
}

double pp_entropy_inclusion(const PPData& d) {
    double h = 0;
    for (size_t l = 0; l < d.m.size(); ++l) h += d.m[l] * d.t[l] * std::log(d.m[l] / d.t[l]);
    for (size_t r = 0; r < d.n.size(); ++r) h += d.n[r] * d.s[r] * std::log(d.s[r] / d.n[r]);
    for (size_t r = 0; r < d.n.size(); ++r)
        for (size_t l = 0; l < d.m.size(); ++l) {
            if (d.a(r, l) == 0) continue;
            double c = std::min(static_cast<double>(d.n[r]) / d.a(r, l), 1.0);
            h += d.n[r] * d.a(r, l) * d.t[l] * std::log(c);
        }
    return h;
}

double h_masa_pair(const CMat& u) {
    if (!is_unitary(u)) fail("NotUnitary", "h needs a unitary");
    const int n = static_cast<int>(u.rows());
    double acc = 0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) acc += eta(std::norm(u(i, j)));
    return acc / n;
}

AngleSet sw_angle_spectrum(const SubAlgebra& p, const SubAlgebra& q, double tol) {
    if (p.ambient_dim() != q.ambient_dim()) fail("BadArgument", "ambient dimensions differ");
    Superoperator ep = conditional_expectation(p);    // caps ambient at 16
    Superoperator eq = conditional_expectation(q);
    Superoperator en = conditional_expectation(intersect(p, q));
    CMat t = ep.matrix * eq.matrix * ep.matrix - en.matrix;
    t = 0.5 * (t + t.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(t);

    AngleSet out;
    if (es.eigenvalues().cwiseAbs().maxCoeff() <= tol) {
        out.right_angle_only = true;
        out.angles = {M_PI / 2.0};
        return out;
    }
    std::vector<double> evs;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double l = es.eigenvalues()(i);
        if (l > tol && l < 1.0 - tol) evs.push_back(l);
    }
    std::sort(evs.begin(), evs.end());
    for (double l : evs) {
        if (!out.eigenvalues.empty() && std::abs(out.eigenvalues.back().first - l) < 1e-7)
            out.eigenvalues.back().second++;
        else
            out.eigenvalues.emplace_back(l, 1);
    }
    for (auto& [l, m] : out.eigenvalues) out.angles.push_back(std::acos(std::sqrt(l)));
    std::sort(out.angles.begin(), out.angles.end());
    return out;
}

InteriorAngleResult interior_exterior_angle(const std::vector<CMat>& lambda_basis,
                                            const std::vector<CMat>& mu_basis,
                                            const SubAlgebra& n_alg, double index_p,
                                            double index_q) {
    if (index_p <= 1.0 || index_q <= 1.0)
        fail("IndexOne", "interior angle is undefined at index 1");
    double acc = 0;
    for (const CMat& l : lambda_basis)
        for (const CMat& m : mu_basis)
            acc += (n_alg.expect(l.adjoint() * m) * (m.adjoint() * l)).trace().real() /
                   static_cast<double>(l.rows());
    InteriorAngleResult r;
    r.cos_alpha = (acc - 1.0) / (std::sqrt(index_p - 1.0) * std::sqrt(index_q - 1.0));
    return r;
}

double exterior_angle_from_traces(double tr_epeq, double tr_ep, double tr_eq) {
    return (tr_epeq - tr_ep * tr_eq) /
           (std::sqrt(tr_ep - tr_ep * tr_ep) * std::sqrt(tr_eq - tr_eq * tr_eq));
}

CommutingSquareResult commuting_square_test(const SubAlgebra& n_alg, const SubAlgebra& p,
                                            const SubAlgebra& q, const SubAlgebra& m_alg,
                                            double tol) {
    const int n = m_alg.ambient_dim();
    if (p.contains_residual(n_alg) > tols::span || q.contains_residual(n_alg) > tols::span)
        fail("InclusionViolated", "N must sit inside both P and Q");
    if (n <= 64 &&
        (m_alg.contains_residual(p) > tols::span || m_alg.contains_residual(q) > tols::span))
        fail("InclusionViolated", "P and Q must sit inside M");

    CommutingSquareResult res;
    if (n <= 16) {
        Superoperator ep = conditional_expectation(p);
        Superoperator eq = conditional_expectation(q);
        Superoperator en = conditional_expectation(n_alg);
        CMat d1 = ep.matrix * eq.matrix - en.matrix;
        CMat d2 = eq.matrix * ep.matrix - en.matrix;
        res.residual = std::max(d1.operatorNorm(), d2.operatorNorm());
    } else {
        // E_P E_Q = E_N as operators iff E_P - E_N kills span(Q), and
        // symmetrically; evaluate on the spanning bases.
        double worst = 0.0;
        for (const CMat& x : q.basis())
            worst = std::max(worst, hs_norm(p.expect(x) - n_alg.expect(x)));
        for (const CMat& x : p.basis())
            worst = std::max(worst, hs_norm(q.expect(x) - n_alg.expect(x)));
        res.residual = worst;
    }
    res.commuting = res.residual <= tol;
    return res;
}

bool nondegenerate_test(const SubAlgebra& p, const SubAlgebra& q, const SubAlgebra& m_alg) {
    const int n = m_alg.ambient_dim();
    if (n > 64) fail("DimensionOverflow", "non-degeneracy test is capped at ambient 64");
    std::vector<CMat> products;
    for (const CMat& a : p.basis())
        for (const CMat& b : q.basis()) products.push_back(a * b);
    int rank = 0;
    orthonormalize_hs(products, &rank);
    return rank == m_alg.hs_dim();
}

CubeAngleResult cube_angle(const SubAlgebra& b1, const SubAlgebra& b2, const SubAlgebra& c,
                           double tol) {
    SubAlgebra meet = intersect(b1, b2);
    if (meet.hs_dim() != c.hs_dim() || meet.contains_residual(c) > tols::span)
        fail("IntersectionMismatch", "C must equal B1 /\\ B2");
    Superoperator e1 = conditional_expectation(b1);
    Superoperator e2 = conditional_expectation(b2);
    Superoperator ec = conditional_expectation(c);
    CMat s0 = e2.matrix * e1.matrix * e2.matrix - ec.matrix;
    s0 = 0.5 * (s0 + s0.adjoint()).eval();
    Eigen::SelfAdjointEigenSolver<CMat> es(s0);
    double alpha = es.eigenvalues().maxCoeff();

    CubeAngleResult out;
    if (es.eigenvalues().cwiseAbs().maxCoeff() <= tol) {
        out.kind = CubeAngleKind::CommutingSquare;
        return out;
    }
    if (max_abs(s0 * s0 - alpha * s0) <= tol) {
        out.kind = CubeAngleKind::Angle;
        out.alpha = alpha;
        return out;
    }
    out.kind = CubeAngleKind::MultipleAngles;
    for (int i = 0; i < es.eigenvalues().size(); ++i)
        if (es.eigenvalues()(i) > tol) out.spectrum.push_back(es.eigenvalues()(i));
    return out;
}

namespace {

// Extract the two distinct diagonal blocks of u_{2k+1}^dag v_{2k+1}; the odd
// level is block-diagonal over the leading Delta factor by construction.
struct ReducedPair {
    CMat v1, v2;
    bool available = false;
};

ReducedPair reduced_blocks(const Tower& tu, const Tower& tv, int j) {
    ReducedPair rp;
    const CMat uv = tu.u(j).adjoint() * tv.u(j);
    const int n = tu.n;
    const int block = static_cast<int>(uv.rows()) / n;
    double off = 0.0;
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c)
            if (r != c) off = std::max(off, max_abs(uv.block(r * block, c * block, block, block)));
    if (off > tols::structural) return rp;
    rp.v1 = uv.block(0, 0, block, block);
    rp.v2 = uv.block(block, block, block, block);
    if (n == 4) {
        // pattern bl-diag{X, Y, X, Y}
        if (max_abs(uv.block(2 * block, 2 * block, block, block) - rp.v1) > tols::structural ||
            max_abs(uv.block(3 * block, 3 * block, block, block) - rp.v2) > tols::structural)
            return rp;
    }
    rp.available = true;
    return rp;
}

}  // namespace

LambdaSequence lambda_tower_sequence(const Tower& tu, const Tower& tv) {
    if (tu.family != tv.family || tu.max_level() != tv.max_level())
        fail("BadArgument", "towers must match in family and height");
    LambdaSequence seq;
    double prev = 1.0 + 1e-12;
    for (int j = 1; j <= tu.max_level(); j += 2) {
        LevelLambda ll;
        ll.level = j;
        ReducedPair rp = reduced_blocks(tu, tv, j);
        if (!rp.available) {
            ll.reduction_available = false;
            seq.levels.push_back(ll);
            continue;
        }
        BlockFactorResult bf = lambda_block_factor(rp.v1, rp.v2);
        ll.cls = bf.cls;
        ll.value = bf.value;
        if (!bf.value) ll.reduction_available = false;

        // martingale condition E_{B_j} E_{A_{j-2}} = E_{B_{j-2}} on the
        // ambient spanning set, feasible up to ambient 64
        if (j >= 3 && tu.ambient[j] <= 64) {
            const int grow = tu.ambient[j] / tu.ambient[j - 2];
            SubAlgebra a_prev_in_j =
                amplify_structured(grow, standard_level_algebra(tu.family, j - 2));
            SubAlgebra b_prev_in_j = amplify_structured(grow, tower_level_algebra(tu, j - 2));
            SubAlgebra b_cur = tower_level_algebra(tu, j);
            double worst = 0.0;
            for (const CMat& x : a_prev_in_j.basis())
                worst = std::max(worst, hs_norm(b_cur.expect(x) - b_prev_in_j.expect(x)));
            ll.martingale_checked = true;
            ll.martingale_ok = worst <= tols::span;
        }
        if (ll.value) {
            if (*ll.value > prev + 1e-12) seq.nonincreasing = false;
            prev = *ll.value;
        }
        seq.levels.push_back(ll);
    }
    // eventual constant value, when the last two computed levels agree
    std::vector<double> vals;
    for (const auto& l : seq.levels)
        if (l.value) vals.push_back(*l.value);
    if (vals.size() >= 2 && std::abs(vals.back() - vals[vals.size() - 2]) < 1e-12)
        seq.limit = vals.back();
    return seq;
}

}  // namespace spinlab
