#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "kslab/rays.hpp"

namespace kslab {

using VertexSet = std::vector<std::size_t>;
using Edge = std::pair<std::size_t, std::size_t>;

/// Simple undirected graph of orthogonality relations in a given ambient
/// dimension. Vertex i stands for ray i of the set it was built from.
class OrthoGraph {
  public:
    OrthoGraph(std::size_t n, std::size_t dimension, const std::vector<Edge> &edges,
               std::vector<std::string> labels = {});

    std::size_t size() const { return n_; }
    std::size_t dimension() const { return dimension_; }
    bool adjacent(std::size_t i, std::size_t j) const { return adj_[i * n_ + j] != 0; }
    std::size_t degree(std::size_t i) const;
    std::size_t edge_count() const;
    /// Edges (i, j) with i < j in lexicographic order.
    std::vector<Edge> edges() const;
    const std::vector<std::string> &labels() const { return labels_; }
    /// Neighbour mask; only valid when size() <= 64.
    std::uint64_t neighbour_bits(std::size_t i) const;

    bool operator==(const OrthoGraph &other) const {
        return n_ == other.n_ && dimension_ == other.dimension_ && adj_ == other.adj_;
    }

  private:
    std::size_t n_;
    std::size_t dimension_;
    std::vector<unsigned char> adj_;
    std::vector<std::string> labels_;
};

struct BasisList {
    std::vector<VertexSet> bases;
};

/// Edge (i, j) iff |<r_i, r_j>| < tol.
OrthoGraph ortho_graph(const RaySet &rs, double tol = kOrthoTol);

OrthoGraph cycle_graph(std::size_t n, std::size_t dimension);
OrthoGraph complete_graph(std::size_t n, std::size_t dimension);
OrthoGraph empty_graph(std::size_t n, std::size_t dimension);
OrthoGraph disjoint_union(const OrthoGraph &a, const OrthoGraph &b);
OrthoGraph without_edge(const OrthoGraph &g, Edge e);

bool is_clique(const OrthoGraph &g, const VertexSet &s);
bool is_independent(const OrthoGraph &g, const VertexSet &s);

/// Inclusion-maximal cliques (Bron-Kerbosch with pivoting), each sorted,
/// listed in lexicographic order.
std::vector<VertexSet> maximal_cliques(const OrthoGraph &g);

/// All cliques of size g.dimension(), in lexicographic order.
BasisList complete_bases(const OrthoGraph &g);

struct RealizeOptions {
    Field field = Field::Real;
    int max_sweeps = 10000; ///< total budget, shared across restarts
    int restarts = 8;
    /// Also require |<v_i, v_j>| >= 1e-3 on non-edges.
    bool strict = false;
};

/// Finds unit vectors in dimension d orthogonal along every edge of g, by
/// block coordinate descent: each sweep replaces v_i with the lowest
/// eigenvector of sum_{j ~ i} v_j v_j^*. Throws NonConvergence with the
/// best residual when the budget runs out; that is not a proof that g has
/// no realization in dimension d.
RaySet realize(const OrthoGraph &g, std::size_t d, std::uint64_t seed,
               const RealizeOptions &opts = {});

/// sum over edges of |<v_i, v_j>|^2
double orthogonality_residual(const OrthoGraph &g, const RaySet &rs);

/// Partitions the rays into complete bases (an exact cover by cliques of
/// size d) and groups those bases into sets of `group_size` mutually
/// unbiased bases: |<e, f>|^2 = 1/d between bases of one group.
/// Returns std::nullopt when no such partition exists.
std::optional<std::vector<std::vector<VertexSet>>>
unbiased_basis_partition(const RaySet &rs, std::size_t group_size, double tol = 1e-12);

/// Graph exchange format: {"n", "dimension", "edges": [[i, j], ...]} with i < j.
std::string graph_to_json(const OrthoGraph &g, int indent = 2);
OrthoGraph parse_graph(std::string_view text);

} // namespace kslab
