#pragma once

#include <array>
#include <vector>

#include "nlsym/cmatrix.hpp"
#include "nlsym/locality.hpp"

namespace nlsym {

/// The transposition graph of S4: vertices are the 24 permutations of [4]
/// in lexicographic order, edges join pi and sigma when pi^-1 sigma is a
/// transposition. Its incidence matrix parameterizes span L(4).
struct TranspositionGraphG4 {
    std::vector<std::array<int, 4>> perms;       // 24, lexicographic
    std::vector<std::pair<int, int>> edges;      // 72, endpoints as vertex ids
    std::vector<std::array<int, 4>> edge_coord;  // (l,k,i,j) with F(l,k|i,j) = edge
    std::vector<std::vector<int>> incidence;     // 72 x 24 over {0,1}

    int perm_index(const std::array<int, 4>& p) const;
    bool is_regular(int degree) const;
    bool is_bipartite_by_parity() const;
    bool is_connected() const;
    int incidence_rank() const;
    /// parity vector gamma (+1 even, -1 odd); M gamma = 0
    std::vector<int> parity_vector() const;

    static const TranspositionGraphG4& instance();
};

/// p restricted to the T(4) coordinates, indexed by the edges of G4.
/// Requires p (or a span element) to satisfy the Def 3.1 linear conditions.
std::vector<RealCyclo> hat_map(const Correlation& p);

struct K4Inequality {
    std::array<int, 4> pi;
    std::array<int, 4> cycle;  // (a,b,c,d) meaning the 4-cycle a->b->c->d->a
    std::vector<CertificateCoeff> coeffs;
    std::string label;
};

/// The full family over pi in S4 and 4-cycles; 24 x 6 = 144 members.
const std::vector<K4Inequality>& k4_inequalities();
/// Number of distinct coefficient functionals in the family.
int k4_inequalities_distinct();

/// Exact decision for p in B(4): LOCAL iff every inequality has nonnegative
/// slack; a convex decomposition is recovered from the incidence system plus
/// the parity shift. NONLOCAL verdicts carry the violated inequality as the
/// certificate.
LocalityVerdict k4_decide(const Correlation& p);

/// Minimal slack over the 144 inequalities (exact), with the argmin label.
std::pair<RealCyclo, std::string> k4_min_slack(const Correlation& p);

struct K4Recovery {
    std::vector<double> alpha;  // tau(u_{a pi(a)} u_{b pi(b)} u_{c pi(c)}), G4 vertex order
    std::vector<double> beta;   // parity-shifted nonnegative solution
    std::vector<double> phat;   // hat of the correlation of u, edge order
};

/// Direct decomposition recovery from a 4x4 magic unitary of complex
/// projections (validated to tol). Checks that alpha is independent of the
/// chosen triple and that M alpha = phat within tol.
K4Recovery recover_decomposition_k4(const MagicUnitary& u, double tol = 1e-10);

}  // namespace nlsym
