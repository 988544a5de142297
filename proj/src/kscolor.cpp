#include "kslab/kscolor.hpp"

#include <algorithm>
#include <numeric>

#include "kslab/errors.hpp"

namespace kslab {

std::size_t Coloring::red_count() const {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), Colour::Red));
}

bool ParityCertificate::valid() const {
    if (basis_count % 2 == 0)
        return false;
    return std::all_of(incidence_counts.begin(), incidence_counts.end(),
                       [](std::size_t c) { return c % 2 == 0; });
}

ColoringCheck verify_coloring(const OrthoGraph &g, const BasisList &bases, const Coloring &c) {
    ColoringCheck out;
    for (auto [i, j] : g.edges()) {
        if (c.assignment[i] == Colour::Red && c.assignment[j] == Colour::Red) {
            out.ok = false;
            out.red_edge = Edge{i, j};
            return out;
        }
    }
    for (std::size_t b = 0; b < bases.bases.size(); ++b) {
        std::size_t reds = 0;
        for (auto v : bases.bases[b])
            reds += c.assignment[v] == Colour::Red;
        if (reds != 1) {
            out.ok = false;
            out.bad_basis = b;
            return out;
        }
    }
    return out;
}

std::optional<ParityCertificate> parity_certificate(const OrthoGraph &g, const BasisList &bases) {
    ParityCertificate cert;
    cert.basis_count = bases.bases.size();
    cert.incidence_counts.assign(g.size(), 0);
    for (const auto &b : bases.bases)
        for (auto v : b)
            ++cert.incidence_counts[v];
    if (!cert.valid())
        return std::nullopt;
    return cert;
}

namespace {

constexpr signed char kUnset = -1;
constexpr signed char kGreen = 0;
constexpr signed char kRed = 1;

/// Backtracking search shared by ks_solve and count_colorings.
class Search {
  public:
    Search(const OrthoGraph &g, const BasisList &bases) : g_(g), bases_(bases.bases) {
        const std::size_t n = g.size();
        state_.assign(n, kUnset);
        incident_.resize(n);
        for (std::size_t b = 0; b < bases_.size(); ++b)
            for (auto v : bases_[b])
                incident_[v].push_back(b);
        neighbours_.resize(n);
        for (auto [i, j] : g.edges()) {
            neighbours_[i].push_back(j);
            neighbours_[j].push_back(i);
        }
        order_.resize(n);
        std::iota(order_.begin(), order_.end(), std::size_t{0});
        std::stable_sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return neighbours_[a].size() > neighbours_[b].size();
        });
    }

    /// Stops at the first solution when `count_all` is false.
    void run(bool count_all) {
        count_all_ = count_all;
        descend();
    }

    std::uint64_t solutions() const { return solutions_; }
    std::uint64_t nodes() const { return nodes_; }
    std::uint64_t conflicts() const { return conflicts_; }
    const std::optional<Coloring> &witness() const { return witness_; }

  private:
    bool assign(std::size_t v, signed char c) {
        if (state_[v] == c)
            return true;
        if (state_[v] != kUnset)
            return false;
        state_[v] = c;
        trail_.push_back(v);
        queue_.push_back(v);
        return true;
    }

    bool propagate() {
        while (!queue_.empty()) {
            const std::size_t v = queue_.back();
            queue_.pop_back();
            if (state_[v] == kRed)
                for (auto u : neighbours_[v])
                    if (!assign(u, kGreen))
                        return false;
            for (auto b : incident_[v]) {
                std::size_t reds = 0, open = 0, last_open = 0;
                for (auto u : bases_[b]) {
                    if (state_[u] == kRed)
                        ++reds;
                    else if (state_[u] == kUnset) {
                        ++open;
                        last_open = u;
                    }
                }
                if (reds == 0 && open == 0)
                    return false;
                if (reds == 0 && open == 1 && !assign(last_open, kRed))
                    return false;
            }
        }
        return true;
    }

    void undo(std::size_t mark) {
        while (trail_.size() > mark) {
            state_[trail_.back()] = kUnset;
            trail_.pop_back();
        }
        queue_.clear();
    }

    /// Returns true when the search should stop.
    bool descend() {
        ++nodes_;
        const auto next = std::find_if(order_.begin(), order_.end(),
                                       [&](std::size_t v) { return state_[v] == kUnset; });
        if (next == order_.end()) {
            ++solutions_;
            if (!witness_) {
                Coloring c;
                for (auto s : state_)
                    c.assignment.push_back(s == kRed ? Colour::Red : Colour::Green);
                witness_ = std::move(c);
            }
            return !count_all_;
        }
        for (signed char colour : {kRed, kGreen}) {
            const std::size_t mark = trail_.size();
            if (assign(*next, colour) && propagate()) {
                if (descend())
                    return true;
            } else {
                ++conflicts_;
            }
            undo(mark);
        }
        return false;
    }

    const OrthoGraph &g_;
    const std::vector<VertexSet> &bases_;
    std::vector<signed char> state_;
    std::vector<std::vector<std::size_t>> incident_;
    std::vector<std::vector<std::size_t>> neighbours_;
    std::vector<std::size_t> order_;
    std::vector<std::size_t> trail_;
    std::vector<std::size_t> queue_;
    bool count_all_ = false;
    std::uint64_t solutions_ = 0;
    std::uint64_t nodes_ = 0;
    std::uint64_t conflicts_ = 0;
    std::optional<Coloring> witness_;
};

} // namespace

KSVerdict ks_solve(const OrthoGraph &g, const BasisList &bases) {
    if (auto cert = parity_certificate(g, bases))
        return Uncolorable{*cert};
    Search search(g, bases);
    search.run(false);
    if (search.witness())
        return Colorable{*search.witness()};
    return Uncolorable{ExhaustionProof{search.nodes(), search.conflicts()}};
}

std::uint64_t count_colorings(const OrthoGraph &g, const BasisList &bases) {
    if (g.size() > kCountLimit)
        throw TooLarge(g.size(), kCountLimit);
    Search search(g, bases);
    search.run(true);
    return search.solutions();
}

} // namespace kslab
