// Towers of basic constructions seeded by 2x2 / 4x4 complex Hadamard
// matrices, the spin-model Jones projections, basic-construction checks, and
// the two-sided grid (A_k, B^u_k, B^v_k, C_k).
#pragma once

#include "spinlab/algebra.hpp"
#include "spinlab/hadamard.hpp"

#include <vector>

namespace spinlab {

enum class Family { TwoByTwo, FourByFour };

struct Tower {
    Family family = Family::TwoByTwo;
    int n = 2;                   // seed order
    HadamardMatrix seed;
    std::vector<CMat> levels;    // u_0 .. u_jmax, each in its ambient size
    std::vector<int> ambient;    // matrix size per level: n^{k+1} at 2k, n^{k+2} at 2k+1

    const CMat& u(int j) const { return levels.at(j); }
    int max_level() const { return static_cast<int>(levels.size()) - 1; }
};

// Level-k Jones projection of the spin-model ladder (k >= 1):
// odd k = 2j+1: bl-diag{E_11..E_nn} (x) I_n^{(j)}; even k = 2j: J_n (x) I_n^{(j)}.
CMat spin_jones_projection(int n, int k);

// Jones projection of the vertex-model ladder at level k >= 1 (2x2 case):
// (1/2) sum_ij E_ij (x) E_ij (x) I_2^{(k)}, a rank-2^k projection in M_{2^{k+2}}.
CMat vertex_jones_projection(int k);

CMat tower_w2k(int k);  // E_11 (x) I_2^{(k)} + E_22 (x) sigma_1^{(k)}
CMat tower_v2k(int k);  // product of adjacent flips, maps M_2^{(k)} (x) Delta_2 onto Delta_2 (x) M_2^{(k)}

// C_amp (x) inner = {I_amp (x) x} as a structured algebra in M_{amp * n}.
SubAlgebra amplify_structured(int amp, const SubAlgebra& inner);

Tower tower2(const HadamardMatrix& u, int jmax);
Tower tower4(const Angle& a_angle, int jmax);
Tower build_tower(Family family, const Angle& param, int jmax);

// Standard (unconjugated) algebra at tower level j, in its ambient.
SubAlgebra standard_level_algebra(Family family, int j);
// B_j = Ad_{u_j}(standard); j = -1 yields the scalars.
SubAlgebra tower_level_algebra(const Tower& t, int j);

struct BasicStepReport {
    double commute_residual = 0;      // [e, smaller]
    double expectation_residual = 0;  // e x e - E_smaller(x) e over mid
    double span_residual = 0;         // mid + mid e mid against larger
    int generated_dim = 0;
    int expected_dim = 0;
    bool pass = false;
};

// Checks that (smaller c mid, e, larger) is a basic construction: e commutes
// with smaller, e implements E_smaller on mid, and mid together with e spans
// larger. All algebras share one ambient (<= 64).
BasicStepReport verify_basic_step(const SubAlgebra& smaller, const SubAlgebra& mid,
                                  const CMat& e, const SubAlgebra& larger,
                                  double tol = tols::structural);

struct GridLevel {
    int index = 0;    // tower index: even for 2x2 grids, odd for 4x4 grids
    int ambient = 0;
    SubAlgebra A, Bu, Bv, C;
    double c_cross_residual = -1;  // structured C against generic intersection; -1 = skipped
    double containment_residual = 0;
};

struct Grid {
    Family family = Family::TwoByTwo;
    Tower tower_u, tower_v;
    std::vector<GridLevel> levels;
};

// K grid levels: 2x2 uses even tower indices 0..2K, 4x4 odd indices 1..2K+1.
// EquivalentSeeds when the seeds generate the same ladder (2x2: u ~ v).
Grid build_grid(Family family, const Angle& u_param, const Angle& v_param, int levels_k);

}  // namespace spinlab
