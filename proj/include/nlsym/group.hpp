#pragma once

#include <string>
#include <vector>

#include "nlsym/cyclotomic.hpp"

namespace nlsym {

/// A finite abelian group Z_{n1} x ... x Z_{nd}. Elements are indexed
/// 0..order-1 in lexicographic order of their residue tuples, so index 0 is
/// the identity. The dual group has the same factor list; characters are
/// indexed lexicographically by exponent tuple, index 0 being the trivial
/// character. These enumerations fix all matrix indexings globally.
struct AbelianGroup {
    std::vector<int> factors;  // each >= 2; empty for the trivial group
    int order = 1;
    int exponent = 1;

    static AbelianGroup make(std::vector<int> factors);
    /// "Z4", "Z2xZ2xZ2" (case-insensitive, 'x' separator)
    static AbelianGroup parse(const std::string& literal);
    std::string name() const;

    bool is_cyclic() const { return factors.size() <= 1; }

    int mul(int a, int b) const;
    int inv(int a) const;
    int identity() const { return 0; }
    /// a^-1 * b
    int diff(int a, int b) const { return mul(inv(a), b); }
    int element_order(int a) const;

    std::vector<int> residues(int idx) const;
    int index_of(const std::vector<int>& residues) const;
};

/// Exponent e with chi_m(a) = zeta_N^e, N = G.exponent.
int character_exponent(const AbelianGroup& g, int chi, int a);

/// C[chi][a] = chi(a); rows indexed by the dual, columns by the group.
std::vector<std::vector<Cyclotomic>> character_table(const AbelianGroup& g);

struct GroupAutomorphism {
    std::vector<int> perm;  // perm[a] = sigma(a) on element indices
    bool operator==(const GroupAutomorphism& o) const { return perm == o.perm; }
};

/// Complete list of automorphisms, brute-forced over generator images.
/// Throws BoundExceeded when |G| > bound.
std::vector<GroupAutomorphism> automorphism_group(const AbelianGroup& g, int bound = 64);

/// A bijection of the enumerated dual group.
struct DualPermutation {
    std::vector<int> img;  // img[x] = pi(chi_x) as a dual index

    int size() const { return static_cast<int>(img.size()); }
    int operator()(int x) const { return img[x]; }
    static DualPermutation identity(int n);
    /// (this o other)(x) = this(other(x))
    DualPermutation compose(const DualPermutation& other) const;
    DualPermutation inverse() const;
    bool operator==(const DualPermutation& o) const { return img == o.img; }
    bool operator<(const DualPermutation& o) const { return img < o.img; }
};

/// sigma-hat with sigma-hat(chi) = chi o sigma, as a permutation of the
/// enumerated dual. Convention (tested, not hidden):
/// dual_map(sigma o tau) = dual_map(tau) o dual_map(sigma).
DualPermutation dual_map(const AbelianGroup& g, const GroupAutomorphism& sigma);

/// Translation pi_z(x) = z*x on dual indices.
DualPermutation dual_translation(const AbelianGroup& g, int z);

/// eta(x) = x^-1 on dual indices.
DualPermutation dual_inversion(const AbelianGroup& g);

}  // namespace nlsym
