#include "cavlie/symmetry.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace cavlie::sym {

std::vector<int> truncated_indices(const ModelSpace& space, int K) {
    if (K < 0 || K + 1 >= static_cast<int>(space.offsets.size())) {
        throw ConfigError("truncated_indices: K out of range");
    }
    std::vector<int> idx(space.offsets[K + 1]);
    std::iota(idx.begin(), idx.end(), 0);
    return idx;
}

std::vector<int> f_space_indices(const ModelSpace& space, const ComplementaritySplit& split,
                                 int K) {
    if (K + 1 >= space.stored_sectors()) {
        throw ConfigError("f_space_indices: sector K+1 not stored for this space");
    }
    if (split.sectors() != space.stored_sectors()) {
        throw PreconditionError("f_space_indices: split does not match space");
    }
    std::vector<int> idx = truncated_indices(space, K);
    for (int j : split.plus[K + 1]) idx.push_back(space.offsets[K + 1] + j);
    return idx;
}

Matrix projector(const std::vector<int>& indices, int dim) {
    Matrix p = Matrix::Zero(dim, dim);
    for (int i : indices) p(i, i) = 1.0;
    return p;
}

namespace {

void validate_partition(const ComplementaritySplit& s, const ModelSpace& space) {
    if (s.sectors() != space.stored_sectors()) {
        throw PreconditionError("complementarity split: sector count mismatch");
    }
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        std::set<int> seen;
        for (const auto* part : {&s.minus[mu], &s.zero[mu], &s.plus[mu]}) {
            for (int i : *part) {
                if (i < 0 || i >= space.sector_dims[mu] || !seen.insert(i).second) {
                    throw PreconditionError(
                        "complementarity split: sector sets do not partition the sector");
                }
            }
        }
        if (static_cast<int>(seen.size()) != space.sector_dims[mu]) {
            throw PreconditionError(
                "complementarity split: sector sets do not cover the sector");
        }
    }
}

// Orientation-dependent structural rules: sector 0 entirely in minus, and
// nonvanishing plus/minus parts for mu >= 1.
bool structural_ok(const ComplementaritySplit& s, const ModelSpace& space) {
    if (static_cast<int>(s.minus[0].size()) != space.sector_dims[0]) return false;
    for (int mu = 1; mu < space.stored_sectors(); ++mu) {
        if (s.minus[mu].empty() || s.plus[mu].empty()) return false;
    }
    return true;
}

std::vector<int> sector_part_indices(const ModelSpace& space,
                                     const std::vector<int>& part, int mu) {
    std::vector<int> out;
    out.reserve(part.size());
    for (int j : part) out.push_back(space.offsets[mu] + j);
    return out;
}

struct ItemResults {
    bool kernel_ok = false;
    double kernel_residual = 0.0;
    std::vector<RungReport> rungs;
    bool ladder_ok = false;
    double worst = 0.0;
    double intertwine_worst = 0.0;
};

ItemResults run_items(const Matrix& h, const ModelSpace& space,
                      const ComplementaritySplit& s, double tolerance) {
    const int n = space.total_dim();
    const int K = space.cutoff;
    ItemResults r;

    std::vector<int> zero_idx;
    for (int mu = 0; mu < space.stored_sectors(); ++mu) {
        auto part = sector_part_indices(space, s.zero[mu], mu);
        zero_idx.insert(zero_idx.end(), part.begin(), part.end());
    }
    r.kernel_residual = zero_idx.empty() ? 0.0 : max_abs(h * projector(zero_idx, n));
    r.kernel_ok = r.kernel_residual <= tolerance;

    r.ladder_ok = true;
    for (int mu = 1; mu <= K - 1; ++mu) {
        Matrix pm = projector(sector_part_indices(space, s.minus[mu], mu), n);
        Matrix pp = projector(sector_part_indices(space, s.plus[mu + 1], mu + 1), n);
        Matrix a = pm * h * pp;
        RungReport rung;
        rung.mu = mu;
        auto iso = partial_isometry_check(a, pp, pm, tolerance);
        rung.ok = iso.ok;
        rung.source_residual = iso.source_residual;
        rung.target_residual = iso.target_residual;
        rung.intertwine_residual = max_abs(h * pp - pm * h * pp);
        r.intertwine_worst = std::max(r.intertwine_worst, rung.intertwine_residual);
        if (mu >= 2) {
            r.ladder_ok = r.ladder_ok && rung.ok;
            r.worst = std::max({r.worst, rung.source_residual, rung.target_residual});
        }
        r.rungs.push_back(rung);
    }
    return r;
}

}  // namespace

ComplementarityReport check_complementarity(const Matrix& h, const ModelSpace& space,
                                            const ComplementaritySplit& declared,
                                            double tolerance, int transitivity_cutoff) {
    if (h.rows() != space.total_dim() || h.cols() != space.total_dim()) {
        throw DimensionError("check_complementarity: operator does not match space");
    }
    if (!is_hermitian(h)) {
        throw PreconditionError("check_complementarity: operator is not Hermitian");
    }
    validate_partition(declared, space);

    const ComplementaritySplit swapped = declared.swapped();
    const bool given_structural = structural_ok(declared, space);
    const bool swapped_structural = structural_ok(swapped, space);
    if (!given_structural && !swapped_structural) {
        throw PreconditionError(
            "check_complementarity: split violates the sector-0/nonvanishing rules in both "
            "orientations");
    }

    ComplementarityReport rep;
    const ComplementaritySplit* chosen = nullptr;
    if (given_structural) {
        auto items = run_items(h, space, declared, tolerance);
        if (items.ladder_ok || !swapped_structural) {
            chosen = &declared;
            rep.orientation = "as-given";
            rep.kernel_ok = items.kernel_ok;
            rep.kernel_residual = items.kernel_residual;
            rep.ladder_ok = items.ladder_ok;
            rep.ladder_worst_residual = items.worst;
            rep.rungs = items.rungs;
            rep.intertwine_worst = items.intertwine_worst;
        }
    }
    if (!chosen) {
        auto items = run_items(h, space, swapped, tolerance);
        rep.orientation = "swapped";
        rep.kernel_ok = items.kernel_ok;
        rep.kernel_residual = items.kernel_residual;
        rep.ladder_ok = items.ladder_ok;
        rep.ladder_worst_residual = items.worst;
        rep.rungs = items.rungs;
        rep.intertwine_worst = items.intertwine_worst;
    }
    const ComplementaritySplit& split = chosen ? *chosen : swapped;

    // Condition (iii): closure of {i h|H_[Kiii]} with the per-block su
    // generators commuting with F_[0], then orbit ranks through H_[0].
    const int kiii = std::min(transitivity_cutoff, space.cutoff);
    std::vector<int> hk = f_space_indices(space, split, kiii);
    std::vector<int> f0 = f_space_indices(space, split, 0);
    const int nk = static_cast<int>(hk.size());

    std::vector<int> f0_local;
    for (int g : f0) {
        auto it = std::find(hk.begin(), hk.end(), g);
        f0_local.push_back(static_cast<int>(it - hk.begin()));
    }

    Matrix hres(nk, nk);
    for (int a = 0; a < nk; ++a) {
        for (int b = 0; b < nk; ++b) hres(a, b) = h(hk[a], hk[b]);
    }
    std::vector<Matrix> gens;
    gens.push_back(Complex(0, 1) * hres);

    auto add_block = [&](const std::vector<int>& global_idx, const std::vector<Matrix>& small) {
        std::vector<int> local;
        for (int g : global_idx) {
            auto it = std::find(hk.begin(), hk.end(), g);
            local.push_back(static_cast<int>(it - hk.begin()));
        }
        for (const auto& s : small) {
            Matrix a = Matrix::Zero(nk, nk);
            for (size_t p = 0; p < local.size(); ++p) {
                for (size_t q = 0; q < local.size(); ++q) a(local[p], local[q]) = s(p, q);
            }
            gens.push_back(a);
        }
    };

    for (int mu = 0; mu <= kiii; ++mu) {
        int d = space.sector_dims[mu];
        std::vector<int> global;
        for (int j = 0; j < d; ++j) global.push_back(space.offsets[mu] + j);
        if (mu == 1) {
            add_block(global, lie::su_basis_preserving(d, split.plus[1]));
        } else {
            add_block(global, lie::su_basis(d));
        }
    }
    {
        auto extra = sector_part_indices(space, split.plus[kiii + 1], kiii + 1);
        if (extra.size() > 1) {
            add_block(extra, lie::su_basis(static_cast<int>(extra.size())));
        }
    }
    std::vector<Matrix> nonzero;
    for (auto& g : gens) {
        if (max_abs(g) > 0) nonzero.push_back(std::move(g));
    }
    lie::LieBasis basis = lie::closure(nonzero, tol::rank);

    const int need = 2 * static_cast<int>(f0.size()) - 1;
    bool transitive = true;
    std::ostringstream note;
    note << "orbit ranks on H_[0] (need >= " << need << "):";
    for (int loc : f0_local) {
        Vector psi = Vector::Zero(nk);
        psi[loc] = 1.0;
        int rank = lie::orbit_rank(basis, psi);
        note << " " << rank;
        transitive = transitive && rank >= need;
    }
    note << "; closure dim " << basis.dimension() << " on H_[" << kiii << "]";
    rep.seed_transitive = transitive;
    rep.seed_note = note.str();

    rep.verdict = rep.kernel_ok && rep.ladder_ok && rep.seed_transitive;
    return rep;
}

PolarTruncation polar_truncate(const Matrix& u, const ModelSpace& space, int K,
                               const ComplementaritySplit& split,
                               const std::vector<Vector>& probes) {
    const int n = space.total_dim();
    if (u.rows() != n || u.cols() != n) {
        throw DimensionError("polar_truncate: operator does not match space");
    }
    if (max_abs(u.adjoint() * u - Matrix::Identity(n, n)) > tol::unitarity) {
        throw PreconditionError("polar_truncate: input is not unitary within 1e-10");
    }
    std::vector<int> fidx = f_space_indices(space, split, K);
    const int m = static_cast<int>(fidx.size());

    Matrix a(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) a(i, j) = u(fidx[i], fidx[j]);
    }
    Eigen::JacobiSVD<Matrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Matrix w = svd.matrixU() * svd.matrixV().adjoint();

    PolarTruncation out;
    out.min_singular_value = svd.singularValues().minCoeff();
    out.rank_deficient = out.min_singular_value < tol::rank;

    out.partial_isometry = Matrix::Zero(n, n);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) out.partial_isometry(fidx[i], fidx[j]) = w(i, j);
    }
    out.completed_unitary = out.partial_isometry;
    std::vector<bool> in_f(n, false);
    for (int i : fidx) in_f[i] = true;
    for (int i = 0; i < n; ++i) {
        if (!in_f[i]) out.completed_unitary(i, i) = 1.0;
    }
    for (const auto& psi : probes) {
        if (psi.size() != n) throw DimensionError("polar_truncate: probe dimension mismatch");
        out.probe_errors.push_back((out.partial_isometry * psi - u * psi).norm());
    }
    return out;
}

}  // namespace cavlie::sym
