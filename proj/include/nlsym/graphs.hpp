#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlsym/correlation.hpp"
#include "nlsym/locality.hpp"

namespace nlsym {

enum class ProductKind { Cartesian, Tensor };

/// Simple graph on up to 16 vertices; adjacency rows as bitmasks.
/// Built-in product constructors record their factor structure so the
/// classifier can apply the product rules.
struct Graph {
    int n = 0;
    std::vector<std::uint16_t> adj;
    std::string name;

    struct Hint {
        bool is_product = false;
        ProductKind kind = ProductKind::Cartesian;
        std::string left, right;  // built-in factor names
    } hint;

    bool edge(int u, int v) const { return (adj[u] >> v) & 1u; }
    void add_edge(int u, int v);
    int degree(int v) const;
    /// 0 equal, 1 adjacent, 2 distinct non-adjacent
    int rel(int u, int v) const;

    static Graph empty(int n);
    static Graph complete(int n);
    static Graph cycle(int n);
    Graph complement() const;
    static Graph disjoint_union(const std::vector<Graph>& parts);
    static Graph cartesian(const Graph& a, const Graph& b);  // vertex (i,a) -> i*|b|+a
    static Graph tensor(const Graph& a, const Graph& b);

    bool is_regular() const;
    bool is_connected() const;
    std::vector<std::vector<int>> components() const;
    Graph induced(const std::vector<int>& verts) const;
};

Graph parse_edge_list(const std::string& text);
Graph parse_graph6(const std::string& s);
/// Named built-ins: K5, C5, 3K2, 2C4, Q3, K5xK2 (cartesian), C10(4),
/// petersen, and the general mKn / mCn families.
std::optional<Graph> builtin_graph(const std::string& name);

/// Complete automorphism list by backtracking with degree/neighborhood
/// pruning. BoundExceeded for n > bound (default 12).
std::vector<std::vector<int>> graph_automorphisms(const Graph& g, int bound = 12);
bool graphs_isomorphic(const Graph& a, const Graph& b);

/// k pairwise disjoint nontrivial automorphisms, or nullopt after a complete
/// search over the distinct automorphism supports.
std::optional<std::vector<std::vector<int>>> find_disjoint_automorphisms(const Graph& g, int k);

enum class SymbolicEntry : std::uint8_t { Zero, One, Q1, Q2, Q3, OneMinusQ1, OneMinusQ2, OneMinusQ3 };

struct DisjointAutoConstruction {
    std::array<std::vector<int>, 3> autos;
    std::vector<SymbolicEntry> entries;  // n x n magic-unitary entry symbols
    Correlation correlation;
};

/// The three-disjoint-automorphisms magic unitary, paired through the
/// trace values tr(q_i) = 1/2, tr(q_i q_j) = 1/8 (i != j); all correlation
/// values are rational.
DisjointAutoConstruction disjoint_auto_correlation(const Graph& g, const std::vector<int>& s1,
                                                   const std::vector<int>& s2,
                                                   const std::vector<int>& s3);

/// Winning-correlation law for the automorphism game of g.
bool is_winning_correlation(const Graph& g, const Correlation& p);

enum class SpectralCheck { CriterionMet, CriterionFailed };

/// Eigenvalue set conditions under which "no nonlocal symmetry of G" plus
/// "no quantum symmetry of H" transfers to the product. Integer spectra are
/// decided exactly via the characteristic polynomial; otherwise eigenvalues
/// are clustered at 1e-8.
SpectralCheck spectral_product_check(const Graph& g, const Graph& h, ProductKind kind);

/// Exact integer spectrum (value, multiplicity) when the characteristic
/// polynomial splits over Z; nullopt otherwise.
std::optional<std::vector<std::pair<long, int>>> integer_spectrum(const Graph& g);
std::vector<double> adjacency_eigenvalues(const Graph& g);

/// p'(jb,ld|ia,kc) = delta_ab delta_cd p(j,l|i,k) on the product vertex set.
Correlation lift_correlation_to_product(const Correlation& p, int h_order);
/// Transport of a separating certificate along the lift, re-targeted at the
/// product's automorphism group.
Certificate lift_certificate_to_product(const Certificate& cert, int h_order,
                                        const std::vector<std::vector<int>>& product_autos);

struct Attestation {
    std::string graph;     // built-in name matched up to isomorphism
    std::string fact;      // "no-quantum-symmetry"
    std::string citation;
};
const std::vector<Attestation>& attestations();
/// Quantum symmetry is complement-invariant; matches the graph or its
/// complement against the attestation table (graphs on <= 3 vertices are a
/// theorem, still cited).
bool attested_no_quantum_symmetry(const Graph& g, std::string* citation = nullptr);

enum class ClassifyVerdict { Nonlocal, NoNonlocal, Undecided };

std::string classify_verdict_name(ClassifyVerdict v);

struct Classification {
    ClassifyVerdict verdict = ClassifyVerdict::Undecided;
    std::string rule;
    bool attestation_used = false;
    bool lp_confirmed = false;
    std::optional<std::vector<std::vector<int>>> disjoint_autos;
    std::optional<Certificate> certificate;
};

/// Rule pipeline: (a) four or fewer vertices; (b) K5 / its complement with
/// the explicit nonlocal witness; (c) three disjoint automorphisms, LP
/// confirmed when |Aut| <= 1e4; (c') product with a nonlocal factor, witness
/// lifted; (d) negative union/product rules backed by the attestation table;
/// (e) undecided.
Classification classify(const Graph& g);

struct Table2Row {
    std::string name;
    bool expected_nonlocal;
};
const std::vector<Table2Row>& table2_rows();

}  // namespace nlsym
