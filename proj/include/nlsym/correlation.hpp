#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "nlsym/cyclotomic.hpp"
#include "nlsym/group.hpp"

namespace nlsym {

enum class Provenance { Deterministic, Qls, DisjointAutos, Composed, UserSupplied };

std::string provenance_name(Provenance p);

struct Violation {
    std::string condition;
    std::array<int, 4> where;  // (l,k,i,j) or (a,b,-1,-1) for marginal checks
};

/// |G| x |G| doubly stochastic matrix of exact real values encoding a
/// G-invariant correlation: D[a][b] = |G| * p(w,x|y,z) whenever
/// w^-1 x = a and y^-1 z = b.
struct CharacteristicMatrix {
    AbelianGroup group;
    std::vector<RealCyclo> d;  // row-major, |G|^2

    const RealCyclo& at(int a, int b) const { return d[static_cast<size_t>(a) * group.order + b]; }
    RealCyclo& at(int a, int b) { return d[static_cast<size_t>(a) * group.order + b]; }

    static CharacteristicMatrix identity(const AbelianGroup& g);
    bool is_doubly_stochastic() const;  // exact: entries >= 0, rows/cols sum to 1
    bool is_permutation() const;        // exact 0/1 entries
    bool all_rational() const;
    CharacteristicMatrix matmul(const CharacteristicMatrix& o) const;
    /// Row/column permutation: result[a][b] = d[rowperm^-1(a)][colperm^-1(b)].
    CharacteristicMatrix permuted(const std::vector<int>& rowperm,
                                  const std::vector<int>& colperm) const;
    bool operator==(const CharacteristicMatrix& o) const;

    std::string canonical_key() const;
    std::string key_hash() const;  // short FNV-1a hex of canonical_key
    nlohmann::json to_json() const;
    static CharacteristicMatrix from_json(const nlohmann::json& j);
};

/// Dense table p(l,k|i,j) over an index set of size n: outputs (l,k),
/// inputs (i,j). Stores exact values (when available) plus float shadows.
/// Immutable after construction.
class Correlation {
public:
    static Correlation deterministic(const std::vector<int>& perm);
    /// p_Gamma: 1/|G| on difference-matching tuples; D = I.
    static Correlation uniform_group(const AbelianGroup& g);
    static Correlation from_characteristic(const CharacteristicMatrix& d);
    static Correlation from_exact(int n, std::vector<RealCyclo> values, Provenance prov,
                                  bool check = true);
    static Correlation from_numeric(int n, std::vector<double> values, Provenance prov,
                                    bool check = true);

    int size() const { return n_; }
    bool has_exact() const { return exact_; }
    Provenance provenance() const { return prov_; }
    const std::vector<std::string>& labels() const { return labels_; }
    void set_labels(std::vector<std::string> labels);

    const RealCyclo& at(int l, int k, int i, int j) const { return ev_[idx(l, k, i, j)]; }
    double approx_at(int l, int k, int i, int j) const { return av_[idx(l, k, i, j)]; }
    bool is_zero_at(int l, int k, int i, int j) const;

    /// Empty iff the table is a member of B(n); each violation names the
    /// condition of the membership definition and the witnessing indices.
    /// Exact arithmetic when exact values are present, tolerance 1e-9 otherwise.
    std::vector<Violation> validate() const;

    Correlation compose(const Correlation& o) const;  // IndexMismatch on size clash
    Correlation swap_io() const;
    bool is_group_invariant(const AbelianGroup& g) const;
    CharacteristicMatrix to_characteristic(const AbelianGroup& g) const;  // NotInvariant

    bool operator==(const Correlation& o) const;

    nlohmann::json to_json() const;
    static Correlation from_json(const nlohmann::json& j);

private:
    Correlation() = default;
    size_t idx(int l, int k, int i, int j) const {
        return ((static_cast<size_t>(l) * n_ + k) * n_ + i) * n_ + j;
    }
    void check_valid() const;  // throws on violations

    int n_ = 0;
    bool exact_ = true;
    std::vector<RealCyclo> ev_;
    std::vector<double> av_;
    std::vector<std::string> labels_;
    Provenance prov_ = Provenance::UserSupplied;
};

}  // namespace nlsym
