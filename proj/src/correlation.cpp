#include "nlsym/correlation.hpp"

#include <cmath>
#include <cstdint>
#include <sstream>

#include "nlsym/errors.hpp"

namespace nlsym {

namespace {
constexpr double kNumericTol = 1e-9;

bool sign_nonneg(const RealCyclo& v) { return v.sign() != Sign::Negative; }

std::vector<std::string> default_labels(int n) {
    std::vector<std::string> l(n);
    for (int i = 0; i < n; ++i) l[i] = std::to_string(i);
    return l;
}
}  // namespace

std::string provenance_name(Provenance p) {
    switch (p) {
        case Provenance::Deterministic: return "deterministic";
        case Provenance::Qls: return "qls";
        case Provenance::DisjointAutos: return "disjoint-autos";
        case Provenance::Composed: return "composed";
        case Provenance::UserSupplied: return "user-supplied";
    }
    return "?";
}

CharacteristicMatrix CharacteristicMatrix::identity(const AbelianGroup& g) {
    CharacteristicMatrix m;
    m.group = g;
    m.d.assign(static_cast<size_t>(g.order) * g.order, RealCyclo(Rat(0)));
    for (int a = 0; a < g.order; ++a) m.at(a, a) = RealCyclo(Rat(1));
    return m;
}

bool CharacteristicMatrix::is_doubly_stochastic() const {
    const int n = group.order;
    const RealCyclo one{Rat(1)};
    for (int a = 0; a < n; ++a) {
        RealCyclo row{Rat(0)}, col{Rat(0)};
        for (int b = 0; b < n; ++b) {
            if (at(a, b).sign() == Sign::Negative) return false;
            row = row + at(a, b);
            col = col + at(b, a);
        }
        if (row != one || col != one) return false;
    }
    return true;
}

bool CharacteristicMatrix::is_permutation() const {
    const RealCyclo one{Rat(1)};
    for (const auto& v : d)
        if (!v.is_zero() && v != one) return false;
    return true;
}

bool CharacteristicMatrix::all_rational() const {
    for (const auto& v : d)
        if (!v.is_rational()) return false;
    return true;
}

CharacteristicMatrix CharacteristicMatrix::matmul(const CharacteristicMatrix& o) const {
    const int n = group.order;
    CharacteristicMatrix r;
    r.group = group;
    r.d.assign(static_cast<size_t>(n) * n, RealCyclo(Rat(0)));
    for (int a = 0; a < n; ++a)
        for (int c = 0; c < n; ++c) {
            if (at(a, c).is_zero()) continue;
            for (int b = 0; b < n; ++b) r.at(a, b) = r.at(a, b) + at(a, c) * o.at(c, b);
        }
    return r;
}

CharacteristicMatrix CharacteristicMatrix::permuted(const std::vector<int>& rowperm,
                                                    const std::vector<int>& colperm) const {
    const int n = group.order;
    CharacteristicMatrix r;
    r.group = group;
    r.d.assign(static_cast<size_t>(n) * n, RealCyclo());
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r.at(rowperm[a], colperm[b]) = at(a, b);
    return r;
}

bool CharacteristicMatrix::operator==(const CharacteristicMatrix& o) const {
    if (group.order != o.group.order) return false;
    for (size_t i = 0; i < d.size(); ++i)
        if (d[i] != o.d[i]) return false;
    return true;
}

std::string CharacteristicMatrix::canonical_key() const {
    std::ostringstream os;
    for (const auto& v : d) os << v.exact().canonical_key() << ';';
    return os.str();
}

std::string CharacteristicMatrix::key_hash() const {
    std::string key = canonical_key();
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : key) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

nlohmann::json CharacteristicMatrix::to_json() const {
    nlohmann::json rows = nlohmann::json::array();
    const int n = group.order;
    for (int a = 0; a < n; ++a) {
        nlohmann::json row = nlohmann::json::array();
        for (int b = 0; b < n; ++b) row.push_back(at(a, b).to_json());
        rows.push_back(row);
    }
    return {{"group", group.name()}, {"entries", rows}};
}

CharacteristicMatrix CharacteristicMatrix::from_json(const nlohmann::json& j) {
    CharacteristicMatrix m;
    m.group = AbelianGroup::parse(j.at("group").get<std::string>());
    for (const auto& row : j.at("entries"))
        for (const auto& e : row) m.d.push_back(RealCyclo::from_json(e));
    if (m.d.size() != static_cast<size_t>(m.group.order) * m.group.order)
        throw ParseError("characteristic matrix shape mismatch");
    return m;
}

void Correlation::check_valid() const {
    auto v = validate();
    if (!v.empty())
        throw std::logic_error("constructed correlation violates " + v.front().condition);
}

Correlation Correlation::deterministic(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<bool> hit(n, false);
    for (int x : perm) {
        if (x < 0 || x >= n || hit[x]) throw ParseError("deterministic: not a bijection");
        hit[x] = true;
    }
    Correlation p;
    p.n_ = n;
    p.prov_ = Provenance::Deterministic;
    p.ev_.assign(static_cast<size_t>(n) * n * n * n, RealCyclo(Rat(0)));
    p.av_.assign(p.ev_.size(), 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            p.ev_[p.idx(perm[i], perm[j], i, j)] = RealCyclo(Rat(1));
            p.av_[p.idx(perm[i], perm[j], i, j)] = 1.0;
        }
    p.labels_ = default_labels(n);
    p.check_valid();
    return p;
}

Correlation Correlation::uniform_group(const AbelianGroup& g) {
    const int n = g.order;
    Correlation p;
    p.n_ = n;
    p.prov_ = Provenance::Composed;
    p.ev_.assign(static_cast<size_t>(n) * n * n * n, RealCyclo(Rat(0)));
    p.av_.assign(p.ev_.size(), 0.0);
    const Rat w(1, n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (g.diff(l, k) == g.diff(i, j)) {
                        p.ev_[p.idx(l, k, i, j)] = RealCyclo(w);
                        p.av_[p.idx(l, k, i, j)] = rat_to_double(w);
                    }
    p.labels_ = default_labels(n);
    p.check_valid();
    return p;
}

Correlation Correlation::from_characteristic(const CharacteristicMatrix& d) {
    if (!d.is_doubly_stochastic())
        throw NotDoublyStochastic("from_characteristic: matrix is not doubly stochastic");
    const AbelianGroup& g = d.group;
    const int n = g.order;
    Correlation p;
    p.n_ = n;
    p.prov_ = Provenance::Qls;
    p.ev_.assign(static_cast<size_t>(n) * n * n * n, RealCyclo(Rat(0)));
    p.av_.assign(p.ev_.size(), 0.0);
    const Rat inv_n(1, n);
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    const RealCyclo& v = d.at(g.diff(l, k), g.diff(i, j));
                    if (v.is_zero()) continue;
                    p.ev_[p.idx(l, k, i, j)] = v * inv_n;
                    p.av_[p.idx(l, k, i, j)] = v.approx() / n;
                }
    p.labels_ = default_labels(n);
    p.check_valid();
    return p;
}

Correlation Correlation::from_exact(int n, std::vector<RealCyclo> values, Provenance prov,
                                    bool check) {
    if (values.size() != static_cast<size_t>(n) * n * n * n)
        throw IndexMismatch("from_exact: table shape mismatch");
    Correlation p;
    p.n_ = n;
    p.prov_ = prov;
    p.ev_ = std::move(values);
    p.av_.resize(p.ev_.size());
    for (size_t i = 0; i < p.ev_.size(); ++i) p.av_[i] = p.ev_[i].approx();
    p.labels_ = default_labels(n);
    if (check) p.check_valid();
    return p;
}

Correlation Correlation::from_numeric(int n, std::vector<double> values, Provenance prov,
                                      bool check) {
    if (prov == Provenance::Qls || prov == Provenance::DisjointAutos)
        throw std::logic_error("exact values are mandatory for this provenance");
    if (values.size() != static_cast<size_t>(n) * n * n * n)
        throw IndexMismatch("from_numeric: table shape mismatch");
    Correlation p;
    p.n_ = n;
    p.exact_ = false;
    p.prov_ = prov;
    p.av_ = std::move(values);
    p.labels_ = default_labels(n);
    if (check) p.check_valid();
    return p;
}

void Correlation::set_labels(std::vector<std::string> labels) {
    if (labels.size() != static_cast<size_t>(n_)) throw IndexMismatch("label count mismatch");
    labels_ = std::move(labels);
}

bool Correlation::is_zero_at(int l, int k, int i, int j) const {
    if (exact_) return ev_[idx(l, k, i, j)].is_zero();
    return std::abs(av_[idx(l, k, i, j)]) < kNumericTol;
}

std::vector<Violation> Correlation::validate() const {
    std::vector<Violation> out;
    const int n = n_;
    auto eq = [&](const RealCyclo& a, const RealCyclo& b, double fa, double fb) {
        return exact_ ? a == b : std::abs(fa - fb) < kNumericTol;
    };
    auto val = [&](int l, int k, int i, int j) { return av_[idx(l, k, i, j)]; };

    // (1) p = 0 when the Kronecker deltas disagree
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if ((i == j) != (l == k) && !is_zero_at(l, k, i, j)) {
                        out.push_back({"def3.1(1) delta mismatch", {l, k, i, j}});
                    }
    // (2) symmetry
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (exact_ ? at(l, k, i, j) != at(k, l, j, i)
                               : std::abs(val(l, k, i, j) - val(k, l, j, i)) >= kNumericTol)
                        out.push_back({"def3.1(2) symmetry", {l, k, i, j}});
                }
    // (3) marginals: all four sums for fixed (a,b) coincide and are j/k/i/l-independent
    std::vector<RealCyclo> marg_e(static_cast<size_t>(n) * n);
    std::vector<double> marg_f(static_cast<size_t>(n) * n, 0.0);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            RealCyclo ref;
            double fref = 0;
            bool have_ref = false;
            auto take = [&](RealCyclo s, double fs, const char* tag, int pos) {
                if (!have_ref) {
                    ref = s;
                    fref = fs;
                    have_ref = true;
                    marg_e[static_cast<size_t>(a) * n + b] = s;
                    marg_f[static_cast<size_t>(a) * n + b] = fs;
                } else if (!eq(s, ref, fs, fref)) {
                    out.push_back({std::string("def3.1(3) marginal ") + tag, {a, b, pos, -1}});
                }
            };
            for (int j = 0; j < n; ++j) {
                RealCyclo s{Rat(0)};
                double fs = 0;
                for (int k = 0; k < n; ++k) {
                    if (exact_) s = s + at(a, k, b, j);
                    fs += val(a, k, b, j);
                }
                take(s, fs, "sum_k p(a,k|b,j)", j);
            }
            for (int k = 0; k < n; ++k) {
                RealCyclo s{Rat(0)};
                double fs = 0;
                for (int j = 0; j < n; ++j) {
                    if (exact_) s = s + at(a, k, b, j);
                    fs += val(a, k, b, j);
                }
                take(s, fs, "sum_j p(a,k|b,j)", k);
            }
            for (int i = 0; i < n; ++i) {
                RealCyclo s{Rat(0)};
                double fs = 0;
                for (int l = 0; l < n; ++l) {
                    if (exact_) s = s + at(l, a, i, b);
                    fs += val(l, a, i, b);
                }
                take(s, fs, "sum_l p(l,a|i,b)", i);
            }
            for (int l = 0; l < n; ++l) {
                RealCyclo s{Rat(0)};
                double fs = 0;
                for (int i = 0; i < n; ++i) {
                    if (exact_) s = s + at(l, a, i, b);
                    fs += val(l, a, i, b);
                }
                take(s, fs, "sum_i p(l,a|i,b)", l);
            }
        }
    // marginal matrix doubly stochastic
    for (int a = 0; a < n; ++a) {
        RealCyclo row{Rat(0)}, col{Rat(0)};
        double frow = 0, fcol = 0;
        for (int b = 0; b < n; ++b) {
            if (exact_) {
                row = row + marg_e[static_cast<size_t>(a) * n + b];
                col = col + marg_e[static_cast<size_t>(b) * n + a];
            }
            frow += marg_f[static_cast<size_t>(a) * n + b];
            fcol += marg_f[static_cast<size_t>(b) * n + a];
        }
        if (!eq(row, RealCyclo(Rat(1)), frow, 1.0))
            out.push_back({"marginal matrix row sum != 1", {a, -1, -1, -1}});
        if (!eq(col, RealCyclo(Rat(1)), fcol, 1.0))
            out.push_back({"marginal matrix column sum != 1", {a, -1, -1, -1}});
    }
    // normalization and range
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            RealCyclo s{Rat(0)};
            double fs = 0;
            for (int l = 0; l < n; ++l)
                for (int k = 0; k < n; ++k) {
                    if (exact_) s = s + at(l, k, i, j);
                    fs += val(l, k, i, j);
                }
            if (!eq(s, RealCyclo(Rat(1)), fs, 1.0))
                out.push_back({"normalization sum != 1", {-1, -1, i, j}});
        }
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    bool ok;
                    if (exact_) {
                        const RealCyclo& v = at(l, k, i, j);
                        ok = sign_nonneg(v) && sign_nonneg(RealCyclo(Rat(1)) - v);
                    } else {
                        double v = val(l, k, i, j);
                        ok = v > -kNumericTol && v < 1 + kNumericTol;
                    }
                    if (!ok) out.push_back({"entry outside [0,1]", {l, k, i, j}});
                }
    return out;
}

Correlation Correlation::compose(const Correlation& o) const {
    if (n_ != o.n_) throw IndexMismatch("compose: index sets differ");
    const int n = n_;
    Correlation r;
    r.n_ = n;
    r.exact_ = exact_ && o.exact_;
    r.prov_ = Provenance::Composed;
    r.av_.assign(static_cast<size_t>(n) * n * n * n, 0.0);
    if (r.exact_) r.ev_.assign(r.av_.size(), RealCyclo(Rat(0)));
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    RealCyclo acc{Rat(0)};
                    double facc = 0;
                    for (int s = 0; s < n; ++s)
                        for (int t = 0; t < n; ++t) {
                            if (is_zero_at(l, k, s, t) || o.is_zero_at(s, t, i, j)) continue;
                            if (r.exact_) acc = acc + at(l, k, s, t) * o.at(s, t, i, j);
                            facc += av_[idx(l, k, s, t)] * o.av_[idx(s, t, i, j)];
                        }
                    if (r.exact_) r.ev_[r.idx(l, k, i, j)] = acc;
                    r.av_[r.idx(l, k, i, j)] = r.exact_ ? acc.approx() : facc;
                }
    r.labels_ = labels_;
    r.check_valid();
    return r;
}

Correlation Correlation::swap_io() const {
    const int n = n_;
    // Prop 3.2 hypothesis check: sum_{i,j} p(l,k|i,j) = 1 for the input.
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k) {
            RealCyclo s{Rat(0)};
            double fs = 0;
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (exact_) s = s + at(l, k, i, j);
                    fs += av_[idx(l, k, i, j)];
                }
            bool ok = exact_ ? s == RealCyclo(Rat(1)) : std::abs(fs - 1.0) < kNumericTol;
            if (!ok) throw std::logic_error("swap_io: input does not sum to 1 over inputs");
        }
    Correlation r;
    r.n_ = n;
    r.exact_ = exact_;
    r.prov_ = Provenance::Composed;
    r.av_.resize(av_.size());
    if (exact_) r.ev_.resize(ev_.size());
    for (int l = 0; l < n; ++l)
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) {
                    if (exact_) r.ev_[r.idx(l, k, i, j)] = at(i, j, l, k);
                    r.av_[r.idx(l, k, i, j)] = av_[idx(i, j, l, k)];
                }
    r.labels_ = labels_;
    r.check_valid();
    return r;
}

bool Correlation::is_group_invariant(const AbelianGroup& g) const {
    if (g.order != n_) throw IndexMismatch("is_group_invariant: index set is not the group");
    for (int a = 0; a < n_; ++a)
        for (int b = 0; b < n_; ++b)
            for (int w = 0; w < n_; ++w)
                for (int x = 0; x < n_; ++x)
                    for (int y = 0; y < n_; ++y)
                        for (int z = 0; z < n_; ++z) {
                            int lw = g.mul(a, w), lx = g.mul(a, x);
                            int ly = g.mul(b, y), lz = g.mul(b, z);
                            if (exact_) {
                                if (at(w, x, y, z) != at(lw, lx, ly, lz)) return false;
                            } else if (std::abs(av_[idx(w, x, y, z)] - av_[idx(lw, lx, ly, lz)]) >=
                                       kNumericTol) {
                                return false;
                            }
                        }
    return true;
}

CharacteristicMatrix Correlation::to_characteristic(const AbelianGroup& g) const {
    if (!is_group_invariant(g)) throw NotInvariant("to_characteristic: not group invariant");
    if (!exact_) throw NotInvariant("to_characteristic: exact values required");
    CharacteristicMatrix m;
    m.group = g;
    const int n = g.order;
    m.d.resize(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) m.at(a, b) = at(0, a, 0, b) * Rat(n);
    return m;
}

bool Correlation::operator==(const Correlation& o) const {
    if (n_ != o.n_) return false;
    if (exact_ && o.exact_) {
        for (size_t i = 0; i < ev_.size(); ++i)
            if (ev_[i] != o.ev_[i]) return false;
        return true;
    }
    for (size_t i = 0; i < av_.size(); ++i)
        if (std::abs(av_[i] - o.av_[i]) >= kNumericTol) return false;
    return true;
}

nlohmann::json Correlation::to_json() const {
    nlohmann::json entries = nlohmann::json::array();
    for (int l = 0; l < n_; ++l)
        for (int k = 0; k < n_; ++k)
            for (int i = 0; i < n_; ++i)
                for (int j = 0; j < n_; ++j) {
                    if (is_zero_at(l, k, i, j)) continue;  // omitted entries mean exact zero
                    nlohmann::json e = {{"l", l}, {"k", k}, {"i", i}, {"j", j}};
                    if (exact_) e["value"] = at(l, k, i, j).to_json();
                    else e["value"] = av_[idx(l, k, i, j)];
                    entries.push_back(e);
                }
    return {{"labels", labels_},
            {"provenance", provenance_name(prov_)},
            {"entries", entries}};
}

Correlation Correlation::from_json(const nlohmann::json& j) {
    const auto& labels = j.at("labels");
    const int n = static_cast<int>(labels.size());
    bool exact = true;
    for (const auto& e : j.at("entries"))
        if (!e.at("value").is_object()) exact = false;
    Correlation p;
    if (exact) {
        std::vector<RealCyclo> values(static_cast<size_t>(n) * n * n * n, RealCyclo(Rat(0)));
        for (const auto& e : j.at("entries")) {
            size_t ix = ((static_cast<size_t>(e.at("l").get<int>()) * n + e.at("k").get<int>()) * n +
                         e.at("i").get<int>()) *
                            n +
                        e.at("j").get<int>();
            values[ix] = RealCyclo::from_json(e.at("value"));
        }
        p = from_exact(n, std::move(values), Provenance::UserSupplied);
    } else {
        std::vector<double> values(static_cast<size_t>(n) * n * n * n, 0.0);
        for (const auto& e : j.at("entries")) {
            size_t ix = ((static_cast<size_t>(e.at("l").get<int>()) * n + e.at("k").get<int>()) * n +
                         e.at("i").get<int>()) *
                            n +
                        e.at("j").get<int>();
            const auto& v = e.at("value");
            values[ix] = v.is_object() ? v.at("approx").get<double>() : v.get<double>();
        }
        p = from_numeric(n, std::move(values), Provenance::UserSupplied);
    }
    std::vector<std::string> ls;
    for (const auto& s : labels) ls.push_back(s.is_string() ? s.get<std::string>() : s.dump());
    p.set_labels(std::move(ls));
    return p;
}

}  // namespace nlsym
