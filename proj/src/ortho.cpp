#include "kslab/ortho.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <random>

#include "json.hpp"

#include "kslab/errors.hpp"
#include "kslab/linalg.hpp"
#include "kslab/rng.hpp"

namespace kslab {

OrthoGraph::OrthoGraph(std::size_t n, std::size_t dimension, const std::vector<Edge> &edges,
                       std::vector<std::string> labels)
    : n_(n), dimension_(dimension), adj_(n * n, 0), labels_(std::move(labels)) {
    if (!labels_.empty() && labels_.size() != n_)
        throw InvariantViolation(labels_.size(), "label count does not match vertex count");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const auto [i, j] = edges[k];
        if (i >= n_ || j >= n_)
            throw InvariantViolation(k, "edge endpoint out of range");
        if (i == j)
            throw InvariantViolation(k, "self loop");
        adj_[i * n_ + j] = 1;
        adj_[j * n_ + i] = 1;
    }
}

std::size_t OrthoGraph::degree(std::size_t i) const {
    std::size_t d = 0;
    for (std::size_t j = 0; j < n_; ++j)
        d += adj_[i * n_ + j];
    return d;
}

std::size_t OrthoGraph::edge_count() const {
    std::size_t e = 0;
    for (auto a : adj_)
        e += a;
    return e / 2;
}

std::vector<Edge> OrthoGraph::edges() const {
    std::vector<Edge> out;
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            if (adjacent(i, j))
                out.emplace_back(i, j);
    return out;
}

std::uint64_t OrthoGraph::neighbour_bits(std::size_t i) const {
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < n_; ++j)
        if (adjacent(i, j))
            bits |= std::uint64_t{1} << j;
    return bits;
}

OrthoGraph ortho_graph(const RaySet &rs, double tol) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < rs.size(); ++i)
        for (std::size_t j = i + 1; j < rs.size(); ++j)
            if (std::abs(inner(rs[i], rs[j])) < tol)
                edges.emplace_back(i, j);
    std::vector<std::string> labels(rs.labels().begin(), rs.labels().end());
    return OrthoGraph(rs.size(), rs.dimension(), edges, std::move(labels));
}

OrthoGraph cycle_graph(std::size_t n, std::size_t dimension) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = (i + 1) % n;
        edges.emplace_back(std::min(i, j), std::max(i, j));
    }
    return OrthoGraph(n, dimension, edges);
}

OrthoGraph complete_graph(std::size_t n, std::size_t dimension) {
    std::vector<Edge> edges;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            edges.emplace_back(i, j);
    return OrthoGraph(n, dimension, edges);
}

OrthoGraph empty_graph(std::size_t n, std::size_t dimension) { return OrthoGraph(n, dimension, {}); }

OrthoGraph disjoint_union(const OrthoGraph &a, const OrthoGraph &b) {
    auto edges = a.edges();
    for (auto [i, j] : b.edges())
        edges.emplace_back(i + a.size(), j + a.size());
    return OrthoGraph(a.size() + b.size(), std::max(a.dimension(), b.dimension()), edges);
}

OrthoGraph without_edge(const OrthoGraph &g, Edge e) {
    auto edges = g.edges();
    const Edge key{std::min(e.first, e.second), std::max(e.first, e.second)};
    std::erase(edges, key);
    return OrthoGraph(g.size(), g.dimension(), edges, g.labels());
}

bool is_clique(const OrthoGraph &g, const VertexSet &s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (!g.adjacent(s[a], s[b]))
                return false;
    return true;
}

bool is_independent(const OrthoGraph &g, const VertexSet &s) {
    for (std::size_t a = 0; a < s.size(); ++a)
        for (std::size_t b = a + 1; b < s.size(); ++b)
            if (s[a] == s[b] || g.adjacent(s[a], s[b]))
                return false;
    return true;
}

namespace {

void bron_kerbosch(const OrthoGraph &g, VertexSet &r, VertexSet p, VertexSet x,
                   std::vector<VertexSet> &out) {
    if (p.empty() && x.empty()) {
        VertexSet c = r;
        std::sort(c.begin(), c.end());
        out.push_back(std::move(c));
        return;
    }
    // Pivot on the vertex of P u X with the most neighbours in P.
    std::size_t pivot = p.empty() ? x.front() : p.front();
    std::size_t best = 0;
    for (const auto *set : {&p, &x}) {
        for (auto u : *set) {
            std::size_t cnt = 0;
            for (auto v : p)
                cnt += g.adjacent(u, v);
            if (cnt > best) {
                best = cnt;
                pivot = u;
            }
        }
    }
    VertexSet candidates;
    for (auto v : p)
        if (!g.adjacent(pivot, v))
            candidates.push_back(v);

    for (auto v : candidates) {
        VertexSet np, nx;
        for (auto w : p)
            if (g.adjacent(v, w))
                np.push_back(w);
        for (auto w : x)
            if (g.adjacent(v, w))
                nx.push_back(w);
        r.push_back(v);
        bron_kerbosch(g, r, std::move(np), std::move(nx), out);
        r.pop_back();
        std::erase(p, v);
        x.push_back(v);
    }
}

} // namespace

std::vector<VertexSet> maximal_cliques(const OrthoGraph &g) {
    std::vector<VertexSet> out;
    if (g.size() == 0)
        return out;
    VertexSet r, p(g.size()), x;
    for (std::size_t i = 0; i < g.size(); ++i)
        p[i] = i;
    bron_kerbosch(g, r, std::move(p), std::move(x), out);
    std::sort(out.begin(), out.end());
    return out;
}

BasisList complete_bases(const OrthoGraph &g) {
    BasisList out;
    const std::size_t k = g.dimension();
    VertexSet current;
    std::function<void(std::size_t)> extend = [&](std::size_t start) {
        if (current.size() == k) {
            out.bases.push_back(current);
            return;
        }
        for (std::size_t v = start; v < g.size(); ++v) {
            bool ok = true;
            for (auto u : current)
                if (!g.adjacent(u, v)) {
                    ok = false;
                    break;
                }
            if (!ok)
                continue;
            current.push_back(v);
            extend(v + 1);
            current.pop_back();
        }
    };
    if (k > 0)
        extend(0);
    return out;
}

double orthogonality_residual(const OrthoGraph &g, const RaySet &rs) {
    double r = 0.0;
    for (auto [i, j] : g.edges())
        r += std::norm(inner(rs[i], rs[j]));
    return r;
}

namespace {

constexpr double kRealizeTarget = 1e-10;

double residual_of(const OrthoGraph &g, const std::vector<CVector> &v) {
    double r = 0.0;
    for (auto [i, j] : g.edges())
        r += std::norm(v[i].dot(v[j]));
    return r;
}

CVector random_unit(std::size_t d, Field field, StreamRng &rng,
                    std::normal_distribution<double> &normal) {
    CVector v(static_cast<Eigen::Index>(d));
    for (auto &c : v) {
        const double re = normal(rng);
        const double im = field == Field::Complex ? normal(rng) : 0.0;
        c = Complex(re, im);
    }
    return v / v.norm();
}

void relax_vertex(const OrthoGraph &g, std::size_t i, std::vector<CVector> &v) {
    const auto d = v[i].size();
    CMatrix m = CMatrix::Zero(d, d);
    bool any = false;
    for (std::size_t j = 0; j < g.size(); ++j)
        if (g.adjacent(i, j)) {
            m += v[j] * v[j].adjoint();
            any = true;
        }
    if (!any)
        return;
    const auto eig = jacobi_eigen(m);
    // Project the current vector onto the lowest eigenspace so that ties
    // keep their random orientation instead of snapping to a fixed axis.
    const double lowest = eig.values.front();
    const double span_tol = 1e-12 * std::max(1.0, eig.values.back());
    CVector proj = CVector::Zero(d);
    for (std::size_t k = 0; k < eig.values.size() && eig.values[k] <= lowest + span_tol; ++k) {
        const CVector col = eig.vectors.col(static_cast<Eigen::Index>(k));
        proj += col * col.dot(v[i]);
    }
    if (proj.norm() > 1e-6)
        v[i] = proj / proj.norm();
    else
        v[i] = eig.vectors.col(0);
}

bool strict_ok(const OrthoGraph &g, const std::vector<CVector> &v) {
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (!g.adjacent(i, j) && std::abs(v[i].dot(v[j])) < 1e-3)
                return false;
    return true;
}

} // namespace

RaySet realize(const OrthoGraph &g, std::size_t d, std::uint64_t seed,
               const RealizeOptions &opts) {
    if (d < 2)
        throw InvariantViolation(0, "realization dimension must be at least 2");
    const int restarts = std::max(1, opts.restarts);
    const int per_restart = std::max(1, opts.max_sweeps / restarts);
    constexpr int kPlateau = 500;
    double best = std::numeric_limits<double>::infinity();

    for (int r = 0; r < restarts; ++r) {
        StreamRng rng(seed, static_cast<std::uint64_t>(r));
        std::normal_distribution<double> normal;
        std::vector<CVector> v;
        for (std::size_t i = 0; i < g.size(); ++i)
            v.push_back(random_unit(d, opts.field, rng, normal));

        double last_mark = residual_of(g, v);
        for (int sweep = 0; sweep < per_restart; ++sweep) {
            for (std::size_t i = 0; i < g.size(); ++i)
                relax_vertex(g, i, v);
            const double res = residual_of(g, v);
            best = std::min(best, res);
            if (res < kRealizeTarget) {
                if (opts.strict && !strict_ok(g, v))
                    break;
                std::vector<Ray> rays;
                for (const auto &vi : v)
                    rays.push_back(canonicalize(std::span<const Complex>(vi.data(), d), opts.field));
                try {
                    return RaySet(d, opts.field, std::move(rays),
                                  std::vector<std::string>(g.labels()));
                } catch (const InvariantViolation &) {
                    break; // two vertices collapsed onto one ray
                }
            }
            if ((sweep + 1) % kPlateau == 0) {
                if (res > last_mark * (1.0 - 1e-9))
                    break;
                last_mark = res;
            }
        }
    }
    throw NonConvergence(best);
}

std::optional<std::vector<std::vector<VertexSet>>>
unbiased_basis_partition(const RaySet &rs, std::size_t group_size, double tol) {
    const auto g = ortho_graph(rs);
    const auto bases = complete_bases(g).bases;
    const std::size_t d = rs.dimension();
    if (group_size == 0 || rs.size() % d != 0 || (rs.size() / d) % group_size != 0)
        return std::nullopt;

    auto unbiased = [&](const VertexSet &a, const VertexSet &b) {
        for (auto i : a)
            for (auto j : b)
                if (std::abs(std::norm(inner(rs[i], rs[j])) - 1.0 / static_cast<double>(d)) > tol)
                    return false;
        return true;
    };

    std::optional<std::vector<std::vector<VertexSet>>> result;
    std::vector<std::size_t> cover;
    std::vector<bool> covered(rs.size(), false);

    // Groups the bases of one exact cover into mutually unbiased groups.
    auto try_grouping = [&]() -> bool {
        std::vector<bool> used(cover.size(), false);
        std::vector<std::vector<VertexSet>> groups;
        std::vector<std::size_t> group;
        std::function<bool()> next_group;
        std::function<bool(std::size_t)> extend = [&](std::size_t from) -> bool {
            if (group.size() == group_size) {
                std::vector<VertexSet> members;
                for (auto b : group)
                    members.push_back(bases[cover[b]]);
                groups.push_back(std::move(members));
                if (next_group())
                    return true;
                groups.pop_back();
                return false;
            }
            for (std::size_t b = from; b < cover.size(); ++b) {
                if (used[b])
                    continue;
                const bool ok = std::all_of(group.begin(), group.end(), [&](auto other) {
                    return unbiased(bases[cover[b]], bases[cover[other]]);
                });
                if (!ok)
                    continue;
                used[b] = true;
                group.push_back(b);
                if (extend(b + 1))
                    return true;
                group.pop_back();
                used[b] = false;
            }
            return false;
        };
        next_group = [&]() -> bool {
            const auto first = std::find(used.begin(), used.end(), false);
            if (first == used.end()) {
                result = groups;
                return true;
            }
            const auto saved = group;
            group.clear();
            const auto s = static_cast<std::size_t>(first - used.begin());
            used[s] = true;
            group.push_back(s);
            const bool found = extend(s + 1);
            used[s] = false;
            group = saved;
            return found;
        };
        return next_group();
    };

    std::function<bool()> search = [&]() -> bool {
        std::size_t first = 0;
        while (first < rs.size() && covered[first])
            ++first;
        if (first == rs.size())
            return try_grouping();
        for (std::size_t b = 0; b < bases.size(); ++b) {
            const auto &basis = bases[b];
            if (std::find(basis.begin(), basis.end(), first) == basis.end())
                continue;
            if (std::any_of(basis.begin(), basis.end(), [&](auto v) { return covered[v]; }))
                continue;
            for (auto v : basis)
                covered[v] = true;
            cover.push_back(b);
            if (search())
                return true;
            cover.pop_back();
            for (auto v : basis)
                covered[v] = false;
        }
        return false;
    };
    search();
    return result;
}

std::string graph_to_json(const OrthoGraph &g, int indent) {
    nlohmann::json doc;
    doc["n"] = g.size();
    doc["dimension"] = g.dimension();
    auto edges = nlohmann::json::array();
    for (auto [i, j] : g.edges())
        edges.push_back({i, j});
    doc["edges"] = std::move(edges);
    if (!g.labels().empty())
        doc["labels"] = g.labels();
    return doc.dump(indent);
}

OrthoGraph parse_graph(std::string_view text) {
    try {
        const auto doc = nlohmann::json::parse(text);
        const auto n = doc.at("n").get<std::size_t>();
        const auto dimension = doc.at("dimension").get<std::size_t>();
        std::vector<Edge> edges;
        for (const auto &e : doc.at("edges")) {
            const auto i = e.at(0).get<std::size_t>();
            const auto j = e.at(1).get<std::size_t>();
            if (!(i < j))
                throw ParseError("graph edges must satisfy i < j");
            edges.emplace_back(i, j);
        }
        std::vector<std::string> labels;
        if (doc.contains("labels"))
            labels = doc.at("labels").get<std::vector<std::string>>();
        return OrthoGraph(n, dimension, edges, std::move(labels));
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("graph file: ") + e.what());
    }
}

} // namespace kslab
