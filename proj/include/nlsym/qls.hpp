#pragma once

#include <optional>
#include <string>
#include <vector>

#include "nlsym/cmatrix.hpp"
#include "nlsym/correlation.hpp"
#include "nlsym/group.hpp"
#include "nlsym/locality.hpp"

namespace nlsym {

/// The character-table quantum Latin square Psi^G_pi, kept unscaled: the
/// 1/sqrt|G| factor is tracked symbolically, so every vector entry is a root
/// of unity zeta_N^e stored by its exponent.
struct QuantumLatinSquare {
    AbelianGroup group;
    DualPermutation pi;
    // exponents[a][b][x]: entry x of psi_{a,b}
    std::vector<std::vector<std::vector<int>>> exponents;
};

QuantumLatinSquare build_qls(const AbelianGroup& g, const DualPermutation& pi);

/// Unscaled <psi_{a,b}, psi_{c,d}>, conjugate-linear in the first slot.
Cyclotomic qls_inner(const QuantumLatinSquare& q, int a, int b, int c, int d);

/// D^pi by the closed formula (1/|G|^2) (C* P C) o conj(C* P C).
CharacteristicMatrix characteristic_matrix(const AbelianGroup& g, const DualPermutation& pi);
/// D^pi from the quantum Latin square inner products; must agree exactly
/// with the closed formula.
CharacteristicMatrix characteristic_matrix_via_inner(const QuantumLatinSquare& q);

/// The correlation q^G_pi, built entrywise from the inner products.
Correlation qls_correlation(const AbelianGroup& g, const DualPermutation& pi);

/// Rank-1 projection magic unitary of the quantum Latin square (numeric).
MagicUnitary qls_magic_unitary(const QuantumLatinSquare& q);

struct ClassicalWitness {
    int z;  // dual index
    GroupAutomorphism sigma;
};

/// Witness (z, sigma) with pi(x) = z * sigma_hat(x) when the square is
/// classical; cross-checked against D^pi being a permutation matrix.
std::optional<ClassicalWitness> is_classical_qls(const AbelianGroup& g, const DualPermutation& pi);

/// Representatives (lexicographic minima) of Sym(dual) under the
/// correlation-preserving reductions: two-sided translations and
/// eta-conjugation. Distinct q_pi are found by exact dedup of these.
std::vector<DualPermutation> correlation_orbit_representatives(const AbelianGroup& g);

/// Representatives under the full locality-preserving action: two-sided
/// composition with translations and dual automorphisms (eta-conjugation is
/// subsumed). BoundExceeded for |G| > 10.
std::vector<DualPermutation> orbit_representatives(const AbelianGroup& g, int workers = 0);

struct OrbitRecord {
    DualPermutation rep;        // pi for the first distinct correlation in the class
    std::string d_hash;         // hash of the canonical D key of the class representative
    bool classical = false;     // the class is the classical (permutation-D) class
    std::string verdict;        // LOCAL / NONLOCAL
    int correlation_count = 0;  // distinct correlations in this locality class
    int certificate_id = -1;    // index into SurveyReport::certificates
};

struct SurveyReport {
    std::string group;
    int distinct = 0;
    int classical_qls = 0;
    int local = 0;
    int nonlocal = 0;
    long coincidences = 0;  // equal correlations beyond the orbit identification
    std::vector<OrbitRecord> records;
    std::vector<Certificate> certificates;

    nlohmann::json to_json() const;
    static SurveyReport from_json(const nlohmann::json& j);
};

struct SurveyOptions {
    bool extended = false;
    int workers = 0;  // <=0: hardware concurrency
};

/// Groups whose full survey is gated behind --extended.
bool survey_requires_extended(const AbelianGroup& g);

/// Full-group survey: exact dedup of all D^pi, classicality count checked
/// against |Aut(G)|, one locality decision per orbit class.
SurveyReport survey(const AbelianGroup& g, const SurveyOptions& opts = {});

}  // namespace nlsym
