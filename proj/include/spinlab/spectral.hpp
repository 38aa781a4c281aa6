// The 4x4 spectral engine: predicted and measured spectra of (u_2k^dag v_2k)^2,
// the even-root dichotomy, inclusion matrices of the intersection grid, index
// predictions, and grid-level relative commutants.
#pragma once

#include "spinlab/invariants.hpp"

#include <map>
#include <optional>
#include <vector>

namespace spinlab {

struct SpectrumEntry {
    long long power = 0;        // theta^power; negative powers are conjugates
    long long multiplicity = 0;
};

struct SpectrumTable {
    int k = 0;
    ThetaClass theta;
    std::vector<SpectrumEntry> entries;  // enumeration order 1, t^2, conj t^2, t^4, ...
};

// (u_{2k}^dag v_{2k})^2, computed directly and through the tensor recursion
// p (x) prev + q(theta^2) (x) conj-prev; the two must agree within 1e-9.
CMat uv_square(int k, const Tower& tu, const Tower& tv);

// Exact integer multiplicity table from the level recurrence. Generic seeds
// m_0 = (3, 1); even-root orders reduce the powers mod m. RangeExceeded
// outside the supported range (k <= 6 generic, k <= 2k0 - 1 for even roots).
SpectrumTable predicted_multiplicities(int k, const ThetaClass& tc);

// Clustered eigenvalues of uv_square matched to admissible powers of theta.
SpectrumTable measured_spectrum(int k, const Tower& tu, const Tower& tv,
                                double cluster_tol = tols::spectra);

struct IndexPrediction {
    bool finite = false;
    long long index = 0;              // 2m in the finite case
    int drop_level = -1;              // k0 = (m-2)/2, where the row drop occurs
    std::vector<double> lambda_sequence;  // 1/(4(k+2)) per level in the infinite case
};

IndexPrediction predicted_inclusion_and_index(const ThetaClass& tc, int levels = 4);

// HS dimension of the relative commutant of the grid limit, through the
// finite-level identity of the compactness argument.
int relative_commutant_dim(const Grid& grid);

struct FourByFourSummary {
    ThetaClass theta;
    double lambda = 0.5;
    IndexPrediction index;
    std::vector<double> dihedral_angles;   // empty in the infinite-index case
    std::optional<double> cos_alpha;
    std::optional<double> cos_beta;
    bool commuting_square = false;         // m = 4, b = +-ia
    // relative entropies; exact in the even-root case, bounds otherwise
    std::optional<double> h_pair;          // h(R_u | R_v)
    double entropy_lower = 0, entropy_upper = 0;
    bool entropy_exact = false;
    std::optional<double> entropy_r_by_meet;    // H(R | R_u /\ R_v) = ln 2m
    std::optional<double> entropy_ru_by_meet;   // ln m - ln 2
    std::optional<double> entropy_join_by_meet; // ln m
    double entropy_r_by_join = 0;               // ln 2
};

FourByFourSummary four_by_four_summary(const Angle& a_angle, const Angle& b_angle);

}  // namespace spinlab
