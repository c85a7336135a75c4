#include "rlcdae/topology.hpp"

#include <Eigen/Eigenvalues>
#include <queue>

#include "graph_util.hpp"

namespace rlcdae {

namespace {

void fill_column(const Circuit& c, const Branch& b, IMat& A, int col)
{
    int from = c.row(b.from);
    int to = c.row(b.to);
    if (from >= 0) A(from, col) = 1;
    if (to >= 0) A(to, col) = -1;
}

int max_row_nnz(const Mat& A)
{
    int d = 0;
    for (Eigen::Index i = 0; i < A.rows(); ++i) d = std::max(d, static_cast<int>((A.row(i).array() != 0).count()));
    return d;
}

}  // namespace

IMat IncidenceSet::full() const
{
    IMat out(Ar.rows(), Ar.cols() + Ac.cols() + Al.cols() + As.cols() + Av.cols());
    out << Ar, Ac, Al, As, Av;
    return out;
}

IncidenceSet reduced_incidence(const Circuit& c)
{
    IncidenceSet s;
    const int n = static_cast<int>(c.nodes.size());
    auto build = [&](Kind k, IMat& A, std::vector<std::string>& ids) {
        auto bs = c.of_kind(k);
        A = IMat::Zero(n, static_cast<int>(bs.size()));
        for (size_t j = 0; j < bs.size(); ++j) {
            fill_column(c, *bs[j], A, static_cast<int>(j));
            ids.push_back(bs[j]->id);
        }
    };
    build(Kind::R, s.Ar, s.r_ids);
    build(Kind::C, s.Ac, s.c_ids);
    build(Kind::L, s.Al, s.l_ids);
    build(Kind::V, s.Av, s.v_ids);
    build(Kind::I, s.As, s.s_ids);
    s.d = max_row_nnz(to_real(s.full()));
    return s;
}

IMat branch_incidence(const Circuit& c)
{
    IMat A = IMat::Zero(static_cast<int>(c.nodes.size()), static_cast<int>(c.branches.size()));
    for (size_t j = 0; j < c.branches.size(); ++j) fill_column(c, c.branches[j], A, static_cast<int>(j));
    return A;
}

Mat to_real(const IMat& A) { return A.cast<double>(); }

Laplacian reduced_laplacian(const Mat& A)
{
    Laplacian out;
    out.AAt = A * A.transpose();
    out.d = max_row_nnz(A);
    if (out.AAt.size()) {
        Eigen::SelfAdjointEigenSolver<Mat> es(out.AAt, Eigen::EigenvaluesOnly);
        out.lambda_max = std::max(0.0, es.eigenvalues().maxCoeff());
    }
    out.within_bound = out.lambda_max <= 2.0 * out.d * (1 + 1e-12);
    return out;
}

bool has_capacitive_spanning_tree(const Circuit& c)
{
    detail::DisjointSets ds(detail::vertex_count(c));
    int comps = detail::vertex_count(c);
    for (const auto* b : c.of_kind(Kind::C))
        if (ds.unite(detail::vertex(c, b->from), detail::vertex(c, b->to))) --comps;
    return comps == 1;
}

namespace {

// Branch ids along some path from s to t using only the allowed branches, skipping one id.
std::vector<std::string> find_path(const Circuit& c, int s, int t, const std::vector<const Branch*>& allowed,
                                   const std::string& skip)
{
    const int nv = detail::vertex_count(c);
    std::vector<std::vector<std::pair<int, const Branch*>>> adj(nv);
    for (const auto* b : allowed) {
        if (b->id == skip) continue;
        int u = detail::vertex(c, b->from), v = detail::vertex(c, b->to);
        adj[u].push_back({v, b});
        adj[v].push_back({u, b});
    }
    std::vector<const Branch*> via(nv, nullptr);
    std::vector<int> prev(nv, -1);
    std::vector<bool> seen(nv, false);
    std::queue<int> q;
    q.push(s);
    seen[s] = true;
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        if (u == t) break;
        for (auto [v, b] : adj[u]) {
            if (seen[v]) continue;
            seen[v] = true;
            prev[v] = u;
            via[v] = b;
            q.push(v);
        }
    }
    std::vector<std::string> path;
    if (!seen[t]) return path;
    for (int v = t; v != s; v = prev[v]) path.push_back(via[v]->id);
    return path;
}

}  // namespace

LoopCutset detect_vc_loop_il_cutset(const Circuit& c, double tau_rank)
{
    LoopCutset out;
    IncidenceSet inc = reduced_incidence(c);
    const int n = inc.nodes();

    if (inc.Av.cols() > 0) {
        Mat U = kernel_basis(to_real(inc.Ac).transpose(), tau_rank);
        Mat QcAv = U.transpose() * to_real(inc.Av);
        if (numerical_rank(QcAv, tau_rank) < inc.Av.cols()) {
            std::vector<const Branch*> vc;
            for (const auto& b : c.branches)
                if (b.kind == Kind::V || b.kind == Kind::C) vc.push_back(&b);
            std::vector<std::string> witness;
            for (const auto* v : c.of_kind(Kind::V)) {
                auto path = find_path(c, detail::vertex(c, v->from), detail::vertex(c, v->to), vc, v->id);
                if (!path.empty()) {
                    witness = std::move(path);
                    witness.push_back(v->id);
                    break;
                }
            }
            out.vc_loop = witness;
        }
    }

    IMat rcv(n, inc.Ar.cols() + inc.Ac.cols() + inc.Av.cols());
    rcv << inc.Ar, inc.Ac, inc.Av;
    if (n > 0 && numerical_rank(to_real(rcv), tau_rank) < n) {
        detail::DisjointSets ds(detail::vertex_count(c));
        for (const auto& b : c.branches)
            if (b.kind == Kind::R || b.kind == Kind::C || b.kind == Kind::V)
                ds.unite(detail::vertex(c, b.from), detail::vertex(c, b.to));
        const int ref = detail::vertex_count(c) - 1;
        int island = -1;
        for (int v = 0; v < ref && island < 0; ++v)
            if (ds.find(v) != ds.find(ref)) island = ds.find(v);
        std::vector<std::string> witness;
        for (const auto& b : c.branches) {
            if (b.kind != Kind::L && b.kind != Kind::I) continue;
            bool a = ds.find(detail::vertex(c, b.from)) == island;
            bool z = ds.find(detail::vertex(c, b.to)) == island;
            if (a != z) witness.push_back(b.id);
        }
        out.il_cutset = witness;
    }
    return out;
}

int classify_index_topological(const Circuit& c, double tau_rank)
{
    WellPosedReport wp = validate_well_posed(c);
    if (!wp.well_posed()) throw CircuitError("circuit is ill-posed (voltage-source loop or current-source cutset)");
    if (c.of_kind(Kind::V).empty() && has_capacitive_spanning_tree(c)) return 0;
    LoopCutset lc = detect_vc_loop_il_cutset(c, tau_rank);
    if (!lc.vc_loop && !lc.il_cutset) return 1;
    return 2;
}

}  // namespace rlcdae
