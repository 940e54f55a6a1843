#include "nlsym/qls.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

#include "nlsym/errors.hpp"

namespace nlsym {

namespace {

int worker_count(int requested) {
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc ? static_cast<int>(hc) : 4;
}

// exponent table e[chi][a] with chi(a) = zeta_N^{e[chi][a]}
std::vector<std::vector<int>> exponent_table(const AbelianGroup& g) {
    std::vector<std::vector<int>> e(g.order, std::vector<int>(g.order));
    for (int chi = 0; chi < g.order; ++chi)
        for (int a = 0; a < g.order; ++a) e[chi][a] = character_exponent(g, chi, a);
    return e;
}

}  // namespace

QuantumLatinSquare build_qls(const AbelianGroup& g, const DualPermutation& pi) {
    if (pi.size() != g.order) throw IndexMismatch("build_qls: permutation size != |G|");
    QuantumLatinSquare q;
    q.group = g;
    q.pi = pi;
    auto e = exponent_table(g);
    auto inv = pi.inverse();
    const int n = g.order, N = g.exponent;
    q.exponents.assign(n, std::vector<std::vector<int>>(n, std::vector<int>(n)));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int x = 0; x < n; ++x)
                q.exponents[a][b][x] = ((e[inv(x)][a] - e[x][b]) % N + N) % N;
    return q;
}

Cyclotomic qls_inner(const QuantumLatinSquare& q, int a, int b, int c, int d) {
    const int n = q.group.order, N = q.group.exponent;
    std::vector<Rat> raw(N, Rat(0));
    for (int x = 0; x < n; ++x)
        raw[((q.exponents[c][d][x] - q.exponents[a][b][x]) % N + N) % N] += 1;
    return Cyclotomic::from_coeffs(N, raw);
}

CharacteristicMatrix characteristic_matrix(const AbelianGroup& g, const DualPermutation& pi) {
    if (pi.size() != g.order) throw IndexMismatch("characteristic_matrix: permutation size != |G|");
    const int n = g.order, N = g.exponent;
    auto e = exponent_table(g);
    CharacteristicMatrix m;
    m.group = g;
    m.d.resize(static_cast<size_t>(n) * n);
    const Rat scale(1, static_cast<long>(n) * n);
    for (int alpha = 0; alpha < n; ++alpha)
        for (int beta = 0; beta < n; ++beta) {
            // (C* P^pi C)_{alpha,beta} = sum_y conj(pi(y)(alpha)) y(beta)
            std::vector<Rat> raw(N, Rat(0));
            for (int y = 0; y < n; ++y) raw[((e[y][beta] - e[pi(y)][alpha]) % N + N) % N] += 1;
            m.at(alpha, beta) = abs_squared(Cyclotomic::from_coeffs(N, raw)) * scale;
        }
    return m;
}

CharacteristicMatrix characteristic_matrix_via_inner(const QuantumLatinSquare& q) {
    const int n = q.group.order;
    CharacteristicMatrix m;
    m.group = q.group;
    m.d.resize(static_cast<size_t>(n) * n);
    const Rat scale(1, static_cast<long>(n) * n);
    for (int alpha = 0; alpha < n; ++alpha)
        for (int beta = 0; beta < n; ++beta)
            m.at(alpha, beta) = abs_squared(qls_inner(q, 0, 0, beta, alpha)) * scale;
    return m;
}

Correlation qls_correlation(const AbelianGroup& g, const DualPermutation& pi) {
    auto q = build_qls(g, pi);
    const int n = g.order;
    const Rat scale(1, static_cast<long>(n) * n * n);
    std::vector<RealCyclo> values(static_cast<size_t>(n) * n * n * n);
    for (int w = 0; w < n; ++w)
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                for (int z = 0; z < n; ++z) {
                    size_t ix = ((static_cast<size_t>(w) * n + x) * n + y) * n + z;
                    values[ix] = abs_squared(qls_inner(q, y, w, z, x)) * scale;
                }
    return Correlation::from_exact(n, std::move(values), Provenance::Qls);
}

MagicUnitary qls_magic_unitary(const QuantumLatinSquare& q) {
    const int n = q.group.order, N = q.group.exponent;
    MagicUnitary u(n, std::vector<ComplexMatrix>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            ComplexMatrix m = ComplexMatrix::zero(n);
            for (int r = 0; r < n; ++r)
                for (int c = 0; c < n; ++c) {
                    double arg = 2.0 * M_PI * (q.exponents[a][b][r] - q.exponents[a][b][c]) / N;
                    m.at(r, c) = std::complex<double>(std::cos(arg), std::sin(arg)) / double(n);
                }
            u[a][b] = m;
        }
    return u;
}

std::optional<ClassicalWitness> is_classical_qls(const AbelianGroup& g,
                                                 const DualPermutation& pi) {
    std::optional<ClassicalWitness> witness;
    for (const auto& sigma : automorphism_group(g)) {
        DualPermutation sh = dual_map(g, sigma);
        int z = pi(0);  // sigma_hat fixes the trivial character
        bool ok = true;
        for (int x = 0; x < g.order && ok; ++x) ok = pi(x) == g.mul(z, sh(x));
        if (ok) {
            witness = ClassicalWitness{z, sigma};
            break;
        }
    }
    bool perm_d = characteristic_matrix(g, pi).is_permutation();
    if (perm_d != witness.has_value())
        throw InternalInconsistency("classicality criteria disagree (affine form vs permutation D)");
    return witness;
}

namespace {

// Lexicographic-minimum test for pi (with pi(0)=0) under the given two-sided
// compositions. `variants` supplies base permutations (pi itself and
// optionally eta . pi . eta); the test composes translations on both sides.
bool is_translation_orbit_min(const AbelianGroup& g,
                              const std::vector<const std::vector<int>*>& variants,
                              const std::vector<int>& pi) {
    const int n = g.order;
    for (const auto* base : variants)
        for (int z2 = 0; z2 < n; ++z2)
            for (int z1 = 0; z1 < n; ++z1) {
                // q(x) = z1 * base(z2 * x)
                for (int x = 0; x < n; ++x) {
                    int qx = g.mul(z1, (*base)[g.mul(z2, x)]);
                    if (qx != pi[x]) {
                        if (qx < pi[x]) return false;
                        break;
                    }
                }
            }
    return true;
}

std::vector<int> eta_conjugate(const AbelianGroup& g, const std::vector<int>& pi) {
    std::vector<int> r(pi.size());
    for (size_t x = 0; x < pi.size(); ++x) r[x] = g.inv(pi[g.inv(static_cast<int>(x))]);
    return r;
}

}  // namespace

std::vector<DualPermutation> correlation_orbit_representatives(const AbelianGroup& g) {
    const int n = g.order;
    std::vector<DualPermutation> reps;
    if (n == 1) {
        reps.push_back(DualPermutation::identity(1));
        return reps;
    }
    std::vector<int> pi(n);
    pi[0] = 0;
    std::vector<int> tail(n - 1);
    std::iota(tail.begin(), tail.end(), 1);
    do {
        for (int i = 1; i < n; ++i) pi[i] = tail[i - 1];
        auto eta = eta_conjugate(g, pi);
        if (is_translation_orbit_min(g, {&pi, &eta}, pi)) reps.push_back(DualPermutation{pi});
    } while (std::next_permutation(tail.begin(), tail.end()));
    return reps;
}

std::vector<DualPermutation> orbit_representatives(const AbelianGroup& g, int workers) {
    const int n = g.order;
    if (n > 10) throw BoundExceeded("orbit_representatives: |G| > 10");
    if (n == 1) return {DualPermutation::identity(1)};
    // affine maps x -> z * sigma_hat(x) on the dual
    std::vector<std::vector<int>> affine;
    for (const auto& sigma : automorphism_group(g)) {
        DualPermutation sh = dual_map(g, sigma);
        for (int z = 0; z < n; ++z) {
            std::vector<int> m(n);
            for (int x = 0; x < n; ++x) m[x] = g.mul(z, sh(x));
            affine.push_back(std::move(m));
        }
    }
    // Candidates fix 0: the lexicographic orbit minimum always does, since
    // left translations act transitively on pi(0).
    std::vector<std::vector<int>> candidates;
    std::vector<int> pi(n);
    pi[0] = 0;
    std::vector<int> tail(n - 1);
    std::iota(tail.begin(), tail.end(), 1);
    do {
        for (int i = 1; i < n; ++i) pi[i] = tail[i - 1];
        candidates.push_back(pi);
    } while (std::next_permutation(tail.begin(), tail.end()));

    const int nw = worker_count(workers);
    std::vector<std::vector<DualPermutation>> found(nw);
    std::vector<std::thread> pool;
    std::atomic<size_t> next{0};
    const size_t chunk = 1024;
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&, w] {
            std::vector<int> q(n);
            while (true) {
                size_t begin = next.fetch_add(chunk);
                if (begin >= candidates.size()) break;
                size_t end = std::min(begin + chunk, candidates.size());
                for (size_t ci = begin; ci < end; ++ci) {
                    const auto& cand = candidates[ci];
                    bool minimal = true;
                    for (const auto& a2 : affine) {
                        for (const auto& a1 : affine) {
                            for (int x = 0; x < n; ++x) {
                                int qx = a1[cand[a2[x]]];
                                if (qx != cand[x]) {
                                    if (qx < cand[x]) minimal = false;
                                    break;
                                }
                            }
                            if (!minimal) break;
                        }
                        if (!minimal) break;
                    }
                    if (minimal) found[w].push_back(DualPermutation{cand});
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    std::vector<DualPermutation> reps;
    for (auto& f : found) reps.insert(reps.end(), f.begin(), f.end());
    std::sort(reps.begin(), reps.end());
    return reps;
}

bool survey_requires_extended(const AbelianGroup& g) {
    if (g.order >= 9) return true;
    if (g.order == 8 && !g.is_cyclic()) return true;
    return false;
}

nlohmann::json SurveyReport::to_json() const {
    nlohmann::json recs = nlohmann::json::array();
    for (const auto& r : records)
        recs.push_back({{"pi", r.rep.img},
                        {"d_hash", r.d_hash},
                        {"classical", r.classical},
                        {"verdict", r.verdict},
                        {"correlation_count", r.correlation_count},
                        {"certificate_id", r.certificate_id}});
    nlohmann::json certs = nlohmann::json::array();
    for (const auto& c : certificates) certs.push_back(c.to_json());
    return {{"group", group},         {"distinct", distinct}, {"classical_qls", classical_qls},
            {"local", local},         {"nonlocal", nonlocal}, {"coincidences", coincidences},
            {"orbit_records", recs},  {"certificates", certs}};
}

SurveyReport SurveyReport::from_json(const nlohmann::json& j) {
    SurveyReport r;
    r.group = j.at("group").get<std::string>();
    r.distinct = j.at("distinct").get<int>();
    r.classical_qls = j.at("classical_qls").get<int>();
    r.local = j.at("local").get<int>();
    r.nonlocal = j.at("nonlocal").get<int>();
    r.coincidences = j.at("coincidences").get<long>();
    for (const auto& e : j.at("orbit_records")) {
        OrbitRecord rec;
        rec.rep = DualPermutation{e.at("pi").get<std::vector<int>>()};
        rec.d_hash = e.at("d_hash").get<std::string>();
        rec.classical = e.at("classical").get<bool>();
        rec.verdict = e.at("verdict").get<std::string>();
        rec.correlation_count = e.at("correlation_count").get<int>();
        rec.certificate_id = e.at("certificate_id").get<int>();
        r.records.push_back(std::move(rec));
    }
    for (const auto& c : j.at("certificates")) r.certificates.push_back(Certificate::from_json(c));
    return r;
}

SurveyReport survey(const AbelianGroup& g, const SurveyOptions& opts) {
    const int n = g.order;
    if (n > 10) throw BoundExceeded("survey: |G| = " + std::to_string(n) + " > 10");
    if (survey_requires_extended(g) && !opts.extended)
        throw BoundExceeded("survey: " + g.name() + " requires --extended");

    SurveyReport report;
    report.group = g.name();

    // distinct correlations: exact dedup of D over correlation-orbit reps
    auto reps = correlation_orbit_representatives(g);
    struct Distinct {
        CharacteristicMatrix d;
        DualPermutation rep;
        bool classical;
    };
    std::vector<Distinct> distinct;
    std::map<std::string, size_t> by_key;
    long coincidences = 0;
    for (const auto& rep : reps) {
        auto d = characteristic_matrix(g, rep);
        std::string key = d.canonical_key();
        auto it = by_key.find(key);
        if (it == by_key.end()) {
            by_key.emplace(std::move(key), distinct.size());
            distinct.push_back({std::move(d), rep, false});
        } else {
            ++coincidences;
        }
    }
    report.coincidences = coincidences;
    report.distinct = static_cast<int>(distinct.size());

    int classical = 0;
    for (auto& dd : distinct) {
        dd.classical = dd.d.is_permutation();
        if (dd.classical) ++classical;
    }
    report.classical_qls = classical;
    const auto autos = automorphism_group(g);
    if (classical != static_cast<int>(autos.size()))
        throw InternalInconsistency("survey: classical count != |Aut(G)|");

    // locality classes: orbits of D under two-sided automorphism permutations
    std::vector<std::vector<int>> aut_perms;
    for (const auto& s : autos) aut_perms.push_back(s.perm);
    std::vector<long> class_of(distinct.size(), -1);
    std::vector<size_t> class_rep;
    for (size_t i = 0; i < distinct.size(); ++i) {
        if (class_of[i] >= 0) continue;
        long cls = static_cast<long>(class_rep.size());
        class_rep.push_back(i);
        for (const auto& rp : aut_perms)
            for (const auto& cp : aut_perms) {
                auto moved = distinct[i].d.permuted(rp, cp);
                auto it = by_key.find(moved.canonical_key());
                if (it != by_key.end()) {
                    if (class_of[it->second] >= 0 && class_of[it->second] != cls)
                        throw InternalInconsistency("survey: locality classes are inconsistent");
                    class_of[it->second] = cls;
                }
            }
        if (class_of[i] != cls)
            throw InternalInconsistency("survey: class representative left its own class");
    }
    std::vector<int> class_count(class_rep.size(), 0);
    for (long c : class_of) {
        if (c < 0) throw InternalInconsistency("survey: distinct correlation missed by class scan");
        class_count[static_cast<size_t>(c)]++;
    }

    // one LP per class, parallel
    sym_translation_classes(g);  // prewarm shared cache
    std::vector<LocalityVerdict> verdicts(class_rep.size());
    std::vector<std::string> errors;
    std::mutex err_mx;
    std::atomic<size_t> next{0};
    const int nw = std::min<int>(worker_count(opts.workers), static_cast<int>(class_rep.size()) + 1);
    std::vector<std::thread> pool;
    for (int w = 0; w < nw; ++w) {
        pool.emplace_back([&] {
            while (true) {
                size_t k = next.fetch_add(1);
                if (k >= class_rep.size()) break;
                try {
                    verdicts[k] = decide_local_invariant(distinct[class_rep[k]].d);
                } catch (const std::exception& e) {
                    std::lock_guard<std::mutex> lock(err_mx);
                    errors.push_back(e.what());
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (!errors.empty()) throw InternalInconsistency("survey worker failed: " + errors.front());

    for (size_t k = 0; k < class_rep.size(); ++k) {
        const auto& v = verdicts[k];
        OrbitRecord rec;
        rec.rep = distinct[class_rep[k]].rep;
        rec.d_hash = distinct[class_rep[k]].d.key_hash();
        rec.classical = distinct[class_rep[k]].classical;
        rec.correlation_count = class_count[k];
        if (v.status == LocalityStatus::Local) {
            rec.verdict = "LOCAL";
            report.local += class_count[k];
        } else if (v.status == LocalityStatus::Nonlocal) {
            rec.verdict = "NONLOCAL";
            report.nonlocal += class_count[k];
            rec.certificate_id = static_cast<int>(report.certificates.size());
            report.certificates.push_back(*v.certificate);
        } else {
            throw InternalInconsistency("survey: inconclusive verdict on exact data");
        }
        report.records.push_back(std::move(rec));
    }
    if (report.local + report.nonlocal != report.distinct)
        throw InternalInconsistency("survey: local + nonlocal != distinct");
    return report;
}

}  // namespace nlsym
