#include "spinlab/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace spinlab {

namespace {

// p and q(theta): u^dag v = p + q(theta); p is a projection, p q = q p = 0,
// and q(theta)^j = q(theta^j).
CMat proj_p() {
    CMat p = CMat::Zero(4, 4);
    p << 1, 0, 1, 0,
         0, 1, 0, 1,
         1, 0, 1, 0,
         0, 1, 0, 1;
    return 0.5 * p;
}

CMat q_of(Complex theta) {
    CMat q = CMat::Zero(4, 4);
    q(0, 0) = 0.5;  q(0, 2) = -0.5;
    q(2, 0) = -0.5; q(2, 2) = 0.5;
    q(1, 1) = 0.5 * theta;  q(1, 3) = -0.5 * theta;
    q(3, 1) = -0.5 * theta; q(3, 3) = 0.5 * theta;
    return q;
}

// canonical residue of a power mod m, in (-m/2, m/2]
long long canonical_power(long long e, long long m) {
    if (m == 0) return e;
    long long r = e % m;
    if (r < 0) r += m;
    if (r > m / 2) r -= m;
    return r;
}

// enumeration order: 0, 2, -2, 4, -4, ...
bool enum_less(long long a, long long b) {
    long long aa = std::llabs(a), ab = std::llabs(b);
    if (aa != ab) return aa < ab;
    return a > b;  // positive power first
}

}  // namespace

CMat uv_square(int k, const Tower& tu, const Tower& tv) {
    if (tu.family != Family::FourByFour || tv.family != Family::FourByFour)
        fail("BadArgument", "uv_square is a 4x4-family operation");
    if (k > 3) fail("DimensionOverflow", "uv_square is capped at level 3 (ambient 256)");
    if (2 * k > tu.max_level() || 2 * k > tv.max_level())
        fail("BadArgument", "towers are too short for the requested level");

    CMat uv = tu.u(2 * k).adjoint() * tv.u(2 * k);
    CMat direct = uv * uv;

    // one-step recursion cross-check against the previous even level
    Complex theta = std::polar(1.0, (tv.seed.parameters[0] - tu.seed.parameters[0]).radians());
    CMat rec;
    if (k == 0) {
        rec = proj_p() + q_of(theta * theta);
    } else {
        CMat prev_uv = tu.u(2 * (k - 1)).adjoint() * tv.u(2 * (k - 1));
        CMat prev_sq = prev_uv * prev_uv;
        rec = kron(proj_p(), prev_sq) + kron(q_of(theta * theta), CMat(prev_sq.adjoint()));
    }
    if (max_abs(direct - rec) > tols::structural)
        fail("NumericalFailure", "tensor recursion disagrees with the direct product");
    return direct;
}

SpectrumTable predicted_multiplicities(int k, const ThetaClass& tc) {
    if (k < 0) fail("BadArgument", "level must be >= 0");
    long long mod = 0;
    if (tc.even_root) {
        const long long k0 = (tc.m - 2) / 2;
        if (k > 2 * k0 - 1)
            fail("RangeExceeded", "even-root recurrence is stated only up to level 2*k0 - 1");
        mod = tc.m;
    } else if (k > 6) {
        fail("RangeExceeded", "generic recurrence exercised only up to level 6");
    }

    std::map<long long, long long> cur;
    cur[0] = 3;
    cur[canonical_power(2, mod)] += 1;
    for (int step = 1; step <= k; ++step) {
        std::map<long long, long long> next;
        std::vector<long long> keys;
        for (const auto& [e, m] : cur) {
            keys.push_back(e);
            keys.push_back(canonical_power(-e, mod));
            keys.push_back(canonical_power(2 - e, mod));
        }
        for (long long e : keys) {
            auto get = [&](long long x) {
                auto it = cur.find(canonical_power(x, mod));
                return it == cur.end() ? 0LL : it->second;
            };
            long long v = 2 * get(e) + get(-e) + get(2 - e);
            if (v > 0) next[e] = v;
        }
        cur = std::move(next);
    }

    SpectrumTable tab;
    tab.k = k;
    tab.theta = tc;
    for (const auto& [e, m] : cur) tab.entries.push_back({e, m});
    std::sort(tab.entries.begin(), tab.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return enum_less(a.power, b.power); });
    long long total = 0;
    for (const auto& en : tab.entries) total += en.multiplicity;
    long long want = 1;
    for (int i = 0; i <= k; ++i) want *= 4;
    if (total != want) fail("NumericalFailure", "multiplicities do not add up to 4^(k+1)");
    return tab;
}

SpectrumTable measured_spectrum(int k, const Tower& tu, const Tower& tv, double cluster_tol) {
    CMat sq = uv_square(k, tu, tv);
    SpectralDecomposition dec = eig_normal(sq, cluster_tol);

    SpectrumTable tab;
    tab.k = k;
    const Angle ta = (tv.seed.parameters[0] - tu.seed.parameters[0]).mod2();
    bool same_seed = !ta.irrational && ta.mod2().num == 0;
    if (same_seed) {
        // single eigenvalue 1
        tab.theta.theta = 1.0;
        tab.theta.angle = ta;
        for (size_t c = 0; c < dec.eigenvalues.size(); ++c)
            tab.entries.push_back({0, dec.multiplicities[c]});
        return tab;
    }
    tab.theta = classify_theta(tu.seed.parameters[0], tv.seed.parameters[0]);
    const Complex theta = tab.theta.theta;
    const long long mod = tab.theta.even_root ? tab.theta.m : 0;

    // admissible powers: the enumeration 0, +-2, +-4, ... capped by the level
    std::vector<long long> admissible;
    for (long long e = 0; e <= k + 2; e += 2) {
        admissible.push_back(canonical_power(e, mod));
        if (e) admissible.push_back(canonical_power(-e, mod));
    }
    std::sort(admissible.begin(), admissible.end());
    admissible.erase(std::unique(admissible.begin(), admissible.end()), admissible.end());

    std::map<long long, long long> found;
    for (size_t c = 0; c < dec.eigenvalues.size(); ++c) {
        long long best_e = 0;
        double best_d = 1e9;
        for (long long e : admissible) {
            Complex target = std::pow(theta, static_cast<double>(e));
            double d = std::abs(dec.eigenvalues[c] - target);
            if (d < best_d) { best_d = d; best_e = e; }
        }
        if (best_d > 1e-5)
            fail("PowerMatchFailure", "an eigenvalue cluster sits away from every admissible power");
        found[best_e] += dec.multiplicities[c];
    }
    for (const auto& [e, m] : found) tab.entries.push_back({e, m});
    std::sort(tab.entries.begin(), tab.entries.end(),
              [](const SpectrumEntry& a, const SpectrumEntry& b) { return enum_less(a.power, b.power); });
    return tab;
}

IndexPrediction predicted_inclusion_and_index(const ThetaClass& tc, int levels) {
    IndexPrediction out;
    if (tc.even_root) {
        out.finite = true;
        out.index = 2 * tc.m;
        out.drop_level = static_cast<int>((tc.m - 2) / 2);
        return out;
    }
    out.finite = false;
    for (int k = 0; k < levels; ++k) out.lambda_sequence.push_back(1.0 / (4.0 * (k + 2)));
    return out;
}

int relative_commutant_dim(const Grid& grid) {
    if (grid.family == Family::TwoByTwo) {
        // compactness identity on the vertex-model grid: commutant of
        // C_2 = Ad_{u_2 W_2}(C (x) M_2) inside the first-row corner C (x) M_2
        if (grid.levels.size() < 2) fail("BadArgument", "grid is too short");
        const SubAlgebra& c2 = grid.levels[1].C;
        SubAlgebra corner = SubAlgebra::amplified_full(2, 2);
        std::vector<CMat> sol = commutant_in(c2.basis(), corner);
        return static_cast<int>(sol.size());
    }
    // 4x4: commutant of C_{2k0+1} inside A_{2k0-1} at the drop level; only
    // m = 4 (k0 = 1, ambient 64) is within the dense range
    ThetaClass tc = classify_theta(grid.tower_u.seed.parameters[0], grid.tower_v.seed.parameters[0]);
    if (!tc.even_root) fail("ReductionUnavailable", "infinite-index case has no drop level");
    const int k0 = static_cast<int>((tc.m - 2) / 2);
    if (k0 != 1)
        fail("DimensionOverflow", "grid relative commutant computed densely only for m = 4");
    if (static_cast<int>(grid.levels.size()) < k0 + 1) fail("BadArgument", "grid is too short");
    const SubAlgebra& c3 = grid.levels[k0].C;   // level index 2k0+1 = 3, ambient 64
    // A_1 = Delta_4 (x) M_4 embedded in A_3 as C (x) Delta_4 (x) M_4
    SubAlgebra a1_in_a3 = amplify_structured(4, SubAlgebra::diag_tensor_full(4, 4));
    // commuting with a small generating set of C_3 suffices; certified below
    // against the full basis
    std::mt19937_64 rng(0x5eedULL);
    std::vector<CMat> gens = {c3.random_element(rng), c3.random_element(rng)};
    std::vector<CMat> sol = commutant_in(gens, a1_in_a3);
    for (int enlarge = 0; enlarge < 3; ++enlarge) {
        double worst = 0.0;
        for (const CMat& x : sol)
            for (const CMat& b : c3.basis())
                worst = std::max(worst, max_abs(x * b - b * x));
        if (worst <= 1e-7) return static_cast<int>(sol.size());
        gens.push_back(c3.random_element(rng));
        sol = commutant_in(gens, a1_in_a3);
    }
    fail("NumericalFailure", "random generators kept missing part of the intersection algebra");
}

FourByFourSummary four_by_four_summary(const Angle& a_angle, const Angle& b_angle) {
    FourByFourSummary s;
    s.theta = classify_theta(a_angle, b_angle);
    s.index = predicted_inclusion_and_index(s.theta);
    s.entropy_r_by_join = std::log(2.0);

    // h from the masa floor: (1/4) sum eta |(u^dag v)_ij|^2, equal to
    // ln 2 + (1/8)(eta|1 + a conj(b)|^2 + eta|1 - a conj(b)|^2)
    HadamardMatrix u = hadamard4(a_angle), v = hadamard4(b_angle);
    double h_floor = h_masa_pair(CMat(u.matrix.adjoint() * v.matrix));
    Complex abar = std::polar(1.0, a_angle.radians() - b_angle.radians());
    double closed = std::log(2.0) + 0.125 * (eta(std::norm(1.0 + abar)) + eta(std::norm(1.0 - abar)));
    if (std::abs(h_floor - closed) > 1e-10)
        fail("NumericalFailure", "masa-floor entropy disagrees with its closed form");

    if (s.theta.even_root) {
        const long long m = s.theta.m;
        s.commuting_square = (m == 4);
        if (m == 4) {
            s.dihedral_angles = {M_PI / 2.0};
        } else {
            for (long long j = 1; j <= (m - 2) / 4; ++j)
                s.dihedral_angles.push_back(2.0 * M_PI * j / m);
        }
        // tr(e_P e_Q) = lambda tr(e_P) = 1/8 with tr e_P = tr e_Q = 1/4
        const double tr_epeq = 0.5 * 0.25;
        s.cos_alpha = (2.0 * m * tr_epeq - 1.0) / (m / 2.0 - 1.0);
        s.cos_beta = exterior_angle_from_traces(tr_epeq, 0.25, 0.25);
        s.h_pair = std::log(2.0);
        s.entropy_lower = s.entropy_upper = std::log(2.0);
        s.entropy_exact = true;
        s.entropy_r_by_meet = std::log(2.0 * m);
        s.entropy_ru_by_meet = std::log(static_cast<double>(m)) - std::log(2.0);
        s.entropy_join_by_meet = std::log(static_cast<double>(m));
    } else {
        s.entropy_lower = closed;
        s.entropy_upper = std::log(2.0);
        s.entropy_exact = false;
    }
    return s;
}

}  // namespace spinlab
