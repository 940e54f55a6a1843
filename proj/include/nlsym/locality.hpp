#pragma once

#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsym/correlation.hpp"
#include "nlsym/group.hpp"
#include "nlsym/lp.hpp"

namespace nlsym {

enum class LocalityStatus { Local, Nonlocal, NumericInconclusive };

std::string locality_status_name(LocalityStatus s);

struct CertificateCoeff {
    int l, k, i, j;
    Rat coef;
};

/// A separating hyperplane h: <h, p_pi> >= 0 for every admissible
/// deterministic correlation and <h, p> < 0 on the target. The admissible
/// set descriptor makes certificates self-contained for re-verification.
struct Certificate {
    enum class Kind { SymN, Explicit, SymInvariant };

    Kind kind = Kind::SymN;
    int n = 0;
    std::vector<CertificateCoeff> coeffs;             // expanded sparse functional
    std::vector<std::vector<int>> admissible;         // Kind::Explicit
    std::optional<AbelianGroup> group;                // Kind::SymInvariant
    std::vector<Rat> invariant_c;                     // |G|^2 matrix c, row-major
    Rat min_over_deterministic;
    Cyclotomic value_on_p;
    double approx_value = 0.0;

    /// <h, p_perm> in exact rational arithmetic.
    Rat value_on_perm(const std::vector<int>& perm) const;
    /// Expanded coefficient list (symmetrized over translations for the
    /// invariant form).
    std::vector<CertificateCoeff> expanded_coeffs() const;

    nlohmann::json to_json() const;
    static Certificate from_json(const nlohmann::json& j);
};

struct DecompositionTerm {
    std::vector<int> perm;  // representative permutation (image list)
    RealCyclo weight;       // total weight carried by the term
    int class_size = 1;     // >1: weight spread uniformly over the translation class of perm
};

struct LocalityVerdict {
    LocalityStatus status = LocalityStatus::NumericInconclusive;
    std::vector<DecompositionTerm> decomposition;  // when Local
    std::optional<Certificate> certificate;        // when Nonlocal
    double gap = 0.0;                              // float shadow of the violation
    bool exact = true;                             // exact certification vs numeric confidence
    std::string note;

    nlohmann::json to_json() const;
};

/// Translation double-coset classes of Sym(G): orbits of pi under
/// pi -> sigma_b o pi o sigma_a, with the per-class constraint matrices of
/// the group-invariant LP. counts[K][a*|G|+b] = #{y : pi(y)^-1 pi(y b) = a};
/// the class-average characteristic matrix is counts/|G|.
struct SymClasses {
    AbelianGroup group;
    std::vector<std::vector<int>> reps;
    std::vector<long> sizes;
    std::vector<std::vector<int>> counts;
};

const SymClasses& sym_translation_classes(const AbelianGroup& g);

/// LP membership of p in the convex hull of the admissible deterministic
/// correlations. Admissible permutations are image lists on the index set of
/// p (all of S_n for the K_n game, Aut(G) for a graph game).
LocalityVerdict decide_local(const Correlation& p,
                             const std::vector<std::vector<int>>& admissible);

/// Same decision for a group-invariant correlation presented by its
/// characteristic matrix, over translation-class variables.
LocalityVerdict decide_local_invariant(const CharacteristicMatrix& d);

/// Exact re-verification of a NONLOCAL certificate against the correlation
/// it separates. Throws InternalInconsistency on any failure.
void verify_certificate(const Certificate& c, const Correlation& p);
/// Invariant-form verification straight from the characteristic matrix.
void verify_certificate_invariant(const Certificate& c, const CharacteristicMatrix& d);

std::vector<std::vector<int>> all_permutations(int n);

}  // namespace nlsym
