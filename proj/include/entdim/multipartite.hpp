// multipartite.hpp
// Entanglement-dimensionality-vector certification. For every bipartition
// (j|jbar) the scalar
//
//   h_j = tr|X^(j|jbar)|/4 - sqrt( (d_j - tr F_j/4) (d_jbar - tr F_jbar/4) )
//
// obeys h_j <= sum_k p_k ( (r_j)_k - 2/(r_j)_k ) for any pure-state
// decomposition whose rank profiles are class-respecting permutations of a
// candidate vector v. Feasibility of that system over mixtures reduces,
// per partition-size class, to a small transportation LP.

#pragma once

#include <map>
#include <optional>

#include "lp.hpp"
#include "qfim.hpp"

namespace entdim {

/// RHS weight of a rank value in the certification system.
inline double rank_score(int r) {
    if (r < 1) throw std::invalid_argument("rank_score: rank must be >= 1");
    return r - 2.0 / r;
}

/// All 2^(n-1) - 1 canonical bipartitions, ordered by index.
inline std::vector<Bipartition> enumerate_bipartitions(int n) {
    if (n < 2 || n > 12)
        throw std::invalid_argument("enumerate_bipartitions: supported range is 2 <= n <= 12");
    std::vector<Bipartition> cuts;
    std::uint64_t count = (std::uint64_t{1} << (n - 1)) - 1;
    cuts.reserve(count);
    for (std::uint64_t idx = 1; idx <= count; ++idx) {
        std::set<int> party_a = {0};
        for (int i = 1; i < n; ++i)
            if (!(idx & (std::uint64_t{1} << (i - 1)))) party_a.insert(i);
        cuts.emplace_back(n, party_a);
    }
    return cuts;
}

namespace detail {

/// Product operator basis of a party: tensor products of the single-particle
/// orthonormal bases (identity first), excluding the all-identity element.
/// Elements are generated on demand; the full set is d_party^2 - 1 traceless
/// orthonormal Hermitian operators.
class PartyBasis {
public:
    PartyBasis(const std::vector<int>& dims, const std::vector<int>& party)
        : idx_(make_digit_dims(dims, party)) {
        for (int p : party) singles_.push_back(gellmann_basis(dims[p], true));
    }

    long size() const { return idx_.total() - 1; }

    Matrix element(long k) const {
        long flat = k + 1;   // skip the all-identity element
        Matrix out = singles_[0].elements[idx_.digit(flat, 0)];
        for (size_t p = 1; p < singles_.size(); ++p)
            out = kron(out, singles_[p].elements[idx_.digit(flat, static_cast<int>(p))]);
        return out;
    }

private:
    static std::vector<int> make_digit_dims(const std::vector<int>& dims,
                                            const std::vector<int>& party) {
        std::vector<int> dd;
        for (int p : party) dd.push_back(dims[p] * dims[p]);
        return dd;
    }

    std::vector<BasisSet> singles_;
    MultiIndex idx_;
};

}  // namespace detail

struct CutValue {
    Bipartition cut;
    double h = 0;
    double tr_f_a = 0;
    double tr_f_b = 0;
    double trace_norm_x = 0;
    long dim_a = 0;
    long dim_b = 0;
};

namespace detail {

inline double h_from_parts(double da, double db, double ta, double tb, double tx) {
    double fa = std::max(da - ta / 4.0, 0.0);
    double fb = std::max(db - tb / 4.0, 0.0);
    return tx / 4.0 - std::sqrt(fa * fb);
}

/// Pure-state path: F = 4 Gamma, evaluated directly on the cut matrix without
/// forming operators on the joint space. The larger side is streamed.
inline CutValue cut_value_pure(const PureState& psi, const Bipartition& cut) {
    Matrix m = cut_matrix(psi, cut);
    const long da = m.rows(), db = m.cols();

    std::vector<int> adims, bdims;
    for (int i : cut.party_a) adims.push_back(psi.dims[i]);
    for (int i : cut.party_b) bdims.push_back(psi.dims[i]);
    PartyBasis basis_a(psi.dims, cut.party_a), basis_b(psi.dims, cut.party_b);

    Eigen::JacobiSVD<Matrix> svd(m);
    double purity = svd.singularValues().array().pow(4).sum();

    CutValue out{cut};
    out.dim_a = da;
    out.dim_b = db;
    out.tr_f_a = 4.0 * (da - purity);
    out.tr_f_b = 4.0 * (db - purity);

    // stream the larger basis; X rows indexed by the smaller one
    const bool a_small = basis_a.size() <= basis_b.size();
    const long ns = a_small ? basis_a.size() : basis_b.size();
    const long nl = a_small ? basis_b.size() : basis_a.size();

    std::vector<Matrix> ws(ns);
    RealVector es(ns);
    for (long i = 0; i < ns; ++i) {
        Matrix g = a_small ? basis_a.element(i) : basis_b.element(i);
        ws[i] = a_small ? Matrix(g * m) : Matrix(m * g.transpose());
        es[i] = std::real(hs_inner(m, ws[i]));
    }
    RealMatrix x(ns, nl);
    for (long k = 0; k < nl; ++k) {
        Matrix g = a_small ? basis_b.element(k) : basis_a.element(k);
        Matrix z = a_small ? Matrix(m * g.transpose()) : Matrix(g * m);
        double ek = std::real(hs_inner(m, z));
        for (long i = 0; i < ns; ++i)
            x(i, k) = 4.0 * (std::real(hs_inner(ws[i], z)) - es[i] * ek);
    }
    out.trace_norm_x = trace_norm(x);
    out.h = h_from_parts(static_cast<double>(da), static_cast<double>(db), out.tr_f_a,
                         out.tr_f_b, out.trace_norm_x);
    return out;
}

/// Permute rho so that the cut's party_a subsystems come first.
inline Matrix permute_to_cut(const DensityMatrix& rho, const Bipartition& cut, long da, long db) {
    MultiIndex full(rho.dims);
    std::vector<int> adims, bdims;
    for (int i : cut.party_a) adims.push_back(rho.dims[i]);
    for (int i : cut.party_b) bdims.push_back(rho.dims[i]);
    MultiIndex ai(adims), bi(bdims);
    std::vector<long> map(full.total());
    for (long f = 0; f < full.total(); ++f) {
        long ra = 0, rb = 0;
        for (size_t k = 0; k < cut.party_a.size(); ++k)
            ra += static_cast<long>(full.digit(f, cut.party_a[k])) * ai.stride(static_cast<int>(k));
        for (size_t k = 0; k < cut.party_b.size(); ++k)
            rb += static_cast<long>(full.digit(f, cut.party_b[k])) * bi.stride(static_cast<int>(k));
        map[f] = ra * db + rb;
    }
    Matrix out(da * db, da * db);
    for (long r = 0; r < full.total(); ++r)
        for (long c = 0; c < full.total(); ++c)
            out(map[r], map[c]) = rho.matrix(r, c);
    return out;
}

/// Mixed-state path: spectral QFIM blocks with the larger side streamed.
inline CutValue cut_value_mixed(const DensityMatrix& rho, const Bipartition& cut) {
    std::vector<int> adims, bdims;
    for (int i : cut.party_a) adims.push_back(rho.dims[i]);
    for (int i : cut.party_b) bdims.push_back(rho.dims[i]);
    const long da = total_dim(adims), db = total_dim(bdims);
    const long dim = da * db;

    Matrix rho_cut = permute_to_cut(rho, cut, da, db);
    auto ev = eigh(rho_cut);
    RealVector lam = ev.values.cwiseMax(0.0);
    const double eps = tol::qfi_support_scale * lam.sum();

    RealMatrix sqrtw(dim, dim);
    for (long l = 0; l < dim; ++l)
        for (long mm = 0; mm < dim; ++mm) {
            double s = lam[l] + lam[mm];
            double diff = lam[l] - lam[mm];
            sqrtw(l, mm) = (s > eps) ? std::sqrt(2.0 * diff * diff / s) : 0.0;
        }

    PartyBasis basis_a(rho.dims, cut.party_a), basis_b(rho.dims, cut.party_b);
    const bool a_small = basis_a.size() <= basis_b.size();
    const long ns = a_small ? basis_a.size() : basis_b.size();
    const long nl = a_small ? basis_b.size() : basis_a.size();
    Matrix ida = identity(da), idb = identity(db);

    auto op_on_joint = [&](const Matrix& g, bool on_a) {
        return on_a ? kron(g, idb) : kron(ida, g);
    };
    auto transform = [&](const Matrix& op) {
        Matrix t = ev.vectors.adjoint() * op * ev.vectors;
        t.array() *= sqrtw.array().cast<Complex>();
        return t;
    };

    Matrix stacked(dim * dim, ns);
    double trace_small = 0;
    for (long i = 0; i < ns; ++i) {
        Matrix g = a_small ? basis_a.element(i) : basis_b.element(i);
        Matrix t = transform(op_on_joint(g, a_small));
        stacked.col(i) = Eigen::Map<const Vector>(t.data(), dim * dim);
        trace_small += std::real(stacked.col(i).dot(stacked.col(i)));
    }
    double trace_large = 0;
    RealMatrix x(ns, nl);
    for (long k = 0; k < nl; ++k) {
        Matrix g = a_small ? basis_b.element(k) : basis_a.element(k);
        Matrix t = transform(op_on_joint(g, !a_small));
        Vector col = Eigen::Map<const Vector>(t.data(), dim * dim);
        trace_large += std::real(col.dot(col));
        x.col(k) = (stacked.adjoint() * col).real();
    }

    CutValue out{cut};
    out.dim_a = da;
    out.dim_b = db;
    out.tr_f_a = a_small ? trace_small : trace_large;
    out.tr_f_b = a_small ? trace_large : trace_small;
    out.trace_norm_x = trace_norm(x);
    out.h = h_from_parts(static_cast<double>(da), static_cast<double>(db), out.tr_f_a,
                         out.tr_f_b, out.trace_norm_x);
    return out;
}

}  // namespace detail

/// Per-bipartition h values for a pure state (covariance fast path).
inline std::vector<CutValue> h_vector(const PureState& psi) {
    std::vector<CutValue> out;
    for (const auto& cut : enumerate_bipartitions(psi.num_parties()))
        out.push_back(detail::cut_value_pure(psi, cut));
    return out;
}

/// Per-bipartition h values for a general density matrix.
inline std::vector<CutValue> h_vector(const DensityMatrix& rho) {
    std::vector<CutValue> out;
    for (const auto& cut : enumerate_bipartitions(rho.num_parties()))
        out.push_back(detail::cut_value_mixed(rho, cut));
    return out;
}

enum class Feasibility { feasible, infeasible, undecided };

/// Candidate entanglement-dimensionality vector, grouped by partition-size
/// class. When built from a pure state the per-cut assignment is retained;
/// candidates given as class multisets only support feasibility checks.
struct DimVectorCandidate {
    int n = 0;
    std::map<int, std::vector<int>> class_values;   // size class -> values, descending
    std::vector<int> per_cut;                       // aligned with enumerate_bipartitions
    bool has_cut_assignment = false;
    Feasibility feasible = Feasibility::undecided;

    static DimVectorCandidate from_class_values(int n,
                                                std::map<int, std::vector<int>> values) {
        DimVectorCandidate c;
        c.n = n;
        c.class_values = std::move(values);
        for (auto& [cls, v] : c.class_values)
            std::sort(v.begin(), v.end(), std::greater<int>());
        return c;
    }
};

/// Exact dimensionality vector of a pure state from per-cut Schmidt ranks.
inline DimVectorCandidate pure_state_dim_vector(const PureState& psi) {
    DimVectorCandidate c;
    c.n = psi.num_parties();
    for (const auto& cut : enumerate_bipartitions(c.n)) {
        int r = schmidt_rank(psi, cut);
        c.per_cut.push_back(r);
        c.class_values[cut.size_class()].push_back(r);
    }
    for (auto& [cls, v] : c.class_values) std::sort(v.begin(), v.end(), std::greater<int>());
    c.has_cut_assignment = true;
    c.feasible = Feasibility::feasible;   // realized by the state itself
    return c;
}

struct CheckResult {
    Feasibility verdict = Feasibility::undecided;
    std::vector<std::string> violated_cuts;   // certificate for infeasibility
    std::string note;
};

/// Decide whether mixtures over class-respecting permutations of the candidate
/// can satisfy every h_j inequality. Per class this is the question whether
/// some vector majorized by the f-values dominates the h-values, phrased as a
/// transportation LP; a sorted-prefix-sum test provides fast certified
/// rejections.
inline CheckResult check_dim_vector(const std::vector<CutValue>& h_values,
                                    const DimVectorCandidate& candidate) {
    // group cuts by size class
    std::map<int, std::vector<const CutValue*>> cuts_by_class;
    for (const auto& cv : h_values) cuts_by_class[cv.cut.size_class()].push_back(&cv);

    CheckResult res;
    for (const auto& [cls, cuts] : cuts_by_class) {
        auto it = candidate.class_values.find(cls);
        if (it == candidate.class_values.end() || it->second.size() != cuts.size())
            throw std::invalid_argument(
                "check_dim_vector: candidate does not cover size class " + std::to_string(cls));
        long cap = 0;
        for (const auto* cv : cuts) cap = std::max(cap, std::min(cv->dim_a, cv->dim_b));
        for (int v : it->second)
            if (v < 1 || v > cap)
                throw std::invalid_argument("check_dim_vector: candidate value out of range");
    }

    const double margin = 1e-7;
    for (const auto& [cls, cuts] : cuts_by_class) {
        const auto& values = candidate.class_values.at(cls);
        const int m = static_cast<int>(cuts.size());

        std::vector<double> f(m);
        for (int i = 0; i < m; ++i) f[i] = rank_score(values[i]);   // already descending
        std::vector<const CutValue*> sorted_cuts = cuts;
        std::sort(sorted_cuts.begin(), sorted_cuts.end(),
                  [](const CutValue* a, const CutValue* b) { return a->h > b->h; });

        // necessary condition: top-k h sums never exceed top-k f sums
        double hsum = 0, fsum = 0;
        for (int k = 0; k < m; ++k) {
            hsum += sorted_cuts[k]->h;
            fsum += f[k];
            if (hsum > fsum + margin * (k + 1)) {
                res.verdict = Feasibility::infeasible;
                for (int i = 0; i <= k; ++i)
                    res.violated_cuts.push_back(sorted_cuts[i]->cut.label());
                res.note = "size class " + std::to_string(cls) + ": top-" +
                           std::to_string(k + 1) + " requirement exceeds achievable total";
                return res;
            }
        }

        // transportation LP: rows = cuts, columns = distinct values with counts
        std::vector<double> distinct;
        std::vector<int> count;
        for (double fv : f) {
            if (!distinct.empty() && std::abs(distinct.back() - fv) < 1e-12)
                ++count.back();
            else {
                distinct.push_back(fv);
                count.push_back(1);
            }
        }
        const int vn = static_cast<int>(distinct.size());
        const int nvars = m * vn + m;   // S entries + slack per cut
        const int nrows = m + vn + m;
        RealMatrix a = RealMatrix::Zero(nrows, nvars);
        RealVector b = RealVector::Zero(nrows);
        for (int i = 0; i < m; ++i) {
            for (int v = 0; v < vn; ++v) a(i, i * vn + v) = 1.0;
            b[i] = 1.0;
        }
        for (int v = 0; v < vn; ++v) {
            for (int i = 0; i < m; ++i) a(m + v, i * vn + v) = 1.0;
            b[m + v] = count[v];
        }
        for (int i = 0; i < m; ++i) {
            for (int v = 0; v < vn; ++v) a(m + vn + i, i * vn + v) = distinct[v];
            a(m + vn + i, m * vn + i) = -1.0;   // slack: sum_v S_iv f_v - slack = h_i
            b[m + vn + i] = sorted_cuts[i]->h - margin;
        }
        if (!lp::feasible(a, b)) {
            res.verdict = Feasibility::infeasible;
            for (const auto* cv : sorted_cuts) res.violated_cuts.push_back(cv->cut.label());
            res.note = "size class " + std::to_string(cls) + ": no admissible mixture";
            return res;
        }
    }
    res.verdict = Feasibility::feasible;
    return res;
}

struct StructureResult {
    std::vector<std::vector<int>> partition;   // parties, each a sorted particle list
    int k_separability = 0;
    int depth = 0;
};

/// For a vector obtained from a pure state: the finest partition whose merging
/// cuts are all product cuts (v = 1), the number of parties, and the size of
/// the largest one.
inline StructureResult structure_from_vector(const DimVectorCandidate& candidate) {
    if (!candidate.has_cut_assignment)
        throw std::invalid_argument(
            "structure_from_vector: candidate lacks per-cut values (not from a pure state)");
    const int n = candidate.n;
    auto cuts = enumerate_bipartitions(n);
    if (candidate.per_cut.size() != cuts.size())
        throw std::invalid_argument("structure_from_vector: wrong vector length");

    // particles are in the same party iff no product cut separates them
    std::vector<int> parent(n);
    for (int i = 0; i < n; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    auto separated = [&](int p, int q) {
        for (size_t c = 0; c < cuts.size(); ++c) {
            if (candidate.per_cut[c] != 1) continue;
            bool pa = std::find(cuts[c].party_a.begin(), cuts[c].party_a.end(), p) !=
                      cuts[c].party_a.end();
            bool qa = std::find(cuts[c].party_a.begin(), cuts[c].party_a.end(), q) !=
                      cuts[c].party_a.end();
            if (pa != qa) return true;
        }
        return false;
    };
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q)
            if (!separated(p, q)) parent[find(q)] = find(p);

    std::map<int, std::vector<int>> groups;
    for (int i = 0; i < n; ++i) groups[find(i)].push_back(i);

    // consistency: v=1 cuts must respect the partition, and every cut that
    // respects it must have v=1
    for (size_t c = 0; c < cuts.size(); ++c) {
        bool respects = true;
        for (const auto& [root, members] : groups) {
            bool any_a = false, any_b = false;
            for (int p : members) {
                bool in_a = std::find(cuts[c].party_a.begin(), cuts[c].party_a.end(), p) !=
                            cuts[c].party_a.end();
                (in_a ? any_a : any_b) = true;
            }
            if (any_a && any_b) respects = false;
        }
        if (respects != (candidate.per_cut[c] == 1))
            throw std::invalid_argument(
                "structure_from_vector: product cuts are not closed under refinement");
    }

    StructureResult out;
    for (auto& [root, members] : groups) {
        out.depth = std::max(out.depth, static_cast<int>(members.size()));
        out.partition.push_back(members);
    }
    std::sort(out.partition.begin(), out.partition.end());
    out.k_separability = static_cast<int>(out.partition.size());
    return out;
}

}  // namespace entdim
