// Pimsner-Popa constants (closed forms plus a feasibility oracle), relative
// entropies H and h, angle spectra between subalgebras, and commuting-square
// and commuting-cube diagnostics.
#pragma once

#include "spinlab/algebra.hpp"
#include "spinlab/towers.hpp"

#include <optional>
#include <vector>

namespace spinlab {

double eta(double t);  // -t ln t, eta(0) = 0; NegativeInput on t < 0

// min over columns i of U^dag of 1 / hamming(column i)
double lambda_masa_hamming(const CMat& u);

// Best constant in (U^dag p_i U)_diag >= t U^dag p_i U over minimal
// projections p_i, via the pseudo-inverse spectral formula. Independent of
// the Hamming count.
double lambda_masa_oracle(const CMat& u, double tol = 1e-9);

enum class LambdaClass { One, Half, DiagonalNonScalar };

struct BlockFactorResult {
    LambdaClass cls;
    std::optional<double> value;  // 1 or 1/2; empty for the open diagonal case
};

// lambda(M_n, U M_n U^dag) inside Delta_2 (x) M_n for U = bl-diag{U1, U2},
// classified through U1^dag U2.
BlockFactorResult lambda_block_factor(const CMat& u1, const CMat& u2, double tol = tols::structural);

struct PPData {
    Eigen::MatrixXi a;          // inclusion matrix (rows: smaller summands)
    std::vector<int> n;         // smaller block sizes
    std::vector<int> m;         // larger block sizes
    std::vector<double> s;      // minimal-projection traces, smaller
    std::vector<double> t;      // minimal-projection traces, larger
};

PPData make_ppdata(const InclusionMatrix& lambda, const std::vector<int>& n_blocks,
                   const std::vector<int>& m_blocks);
PPData make_ppdata(const SubAlgebra& smaller, const SubAlgebra& larger, std::mt19937_64& rng);

// lambda(M, N) = [max_l sum_r b_{rl} s_r / t_l]^{-1}, b = min{a, n_r}
double pp_lambda_inclusion(const PPData& d);
// H(M|N) = sum m_l t_l ln(m_l/t_l) + sum n_r s_r ln(s_r/n_r)
//          + sum n_r a_{rl} t_l ln(c_{rl}), c = min{n_r/a_{rl}, 1}
double pp_entropy_inclusion(const PPData& d);

// h(Delta_n | U Delta_n U^dag) = (1/n) sum_ij eta(|U_ij|^2)
double h_masa_pair(const CMat& u);

struct AngleSet {
    std::vector<double> angles;                      // sorted, in (0, pi/2]
    std::vector<std::pair<double, int>> eigenvalues; // squared cosines with multiplicities
    bool right_angle_only = false;                   // operator vanished
};

// Spectrum of E_P E_Q E_P - E_{P /\ Q} on the HS space; ambient <= 16.
AngleSet sw_angle_spectrum(const SubAlgebra& p, const SubAlgebra& q, double tol = tols::span);

struct InteriorAngleResult {
    double cos_alpha = 0;
    std::optional<double> cos_beta;
};

// cos(alpha) from Pimsner-Popa bases of P/N and Q/N:
// (sum_ij tr E_N(l_i^dag m_j) m_j^dag l_i - 1) / sqrt((idxP-1)(idxQ-1)).
InteriorAngleResult interior_exterior_angle(const std::vector<CMat>& lambda_basis,
                                            const std::vector<CMat>& mu_basis,
                                            const SubAlgebra& n_alg, double index_p,
                                            double index_q);

// Exterior angle from traces of the Jones projections.
double exterior_angle_from_traces(double tr_epeq, double tr_ep, double tr_eq);

struct CommutingSquareResult {
    bool commuting = false;
    double residual = 0;
};

// E_P E_Q = E_Q E_P = E_N; superoperator path at ambient <= 16, otherwise
// evaluated on the spanning bases of P and Q.
CommutingSquareResult commuting_square_test(const SubAlgebra& n_alg, const SubAlgebra& p,
                                            const SubAlgebra& q, const SubAlgebra& m_alg,
                                            double tol = tols::span);

// span(PQ) has full HS dimension in M
bool nondegenerate_test(const SubAlgebra& p, const SubAlgebra& q, const SubAlgebra& m_alg);

enum class CubeAngleKind { CommutingSquare, Angle, MultipleAngles };

struct CubeAngleResult {
    CubeAngleKind kind;
    double alpha = 0;                  // the single nonzero eigenvalue, when Angle
    std::vector<double> spectrum;      // nonzero spectrum otherwise
};

// Defect operator S0 = E_{B2} E_{B1} E_{B2} - E_C of a commuting-cube floor;
// S0^2 = alpha S0 pins the limiting angle set {arccos sqrt(alpha)}.
CubeAngleResult cube_angle(const SubAlgebra& b1, const SubAlgebra& b2, const SubAlgebra& c,
                           double tol = 1e-8);

struct LevelLambda {
    int level = 0;                    // odd tower index 2k+1
    LambdaClass cls = LambdaClass::Half;
    std::optional<double> value;
    bool reduction_available = true;
    bool martingale_checked = false;
    bool martingale_ok = false;
};

struct LambdaSequence {
    std::vector<LevelLambda> levels;
    bool nonincreasing = true;
    std::optional<double> limit;      // eventual constant value, when one exists
};

// Per-level Pimsner-Popa constants of the pair ladder through the
// block-factor reduction at odd levels.
LambdaSequence lambda_tower_sequence(const Tower& tu, const Tower& tv);

}  // namespace spinlab
