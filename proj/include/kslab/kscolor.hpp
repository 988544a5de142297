#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "kslab/ortho.hpp"

namespace kslab {

enum class Colour : unsigned char { Green = 0, Red = 1 };

/// Total assignment vertex -> {Red, Green}.
struct Coloring {
    std::vector<Colour> assignment;

    std::size_t red_count() const;
    bool operator==(const Coloring &) const = default;
};

/// Odd number of bases, even incidence at every vertex: summing "one Red per
/// basis" over all bases counts each Red vertex an even number of times, so
/// the total cannot be odd.
struct ParityCertificate {
    std::size_t basis_count = 0;
    std::vector<std::size_t> incidence_counts;

    bool valid() const;
};

/// The search tree itself is the proof; these are its statistics.
struct ExhaustionProof {
    std::uint64_t nodes = 0;
    std::uint64_t conflicts = 0;
};

struct Colorable {
    Coloring witness;
};

struct Uncolorable {
    std::variant<ParityCertificate, ExhaustionProof> certificate;
};

using KSVerdict = std::variant<Colorable, Uncolorable>;

inline bool is_colorable(const KSVerdict &v) { return std::holds_alternative<Colorable>(v); }

struct ColoringCheck {
    bool ok = true;
    std::optional<Edge> red_edge;          ///< first edge with both ends Red
    std::optional<std::size_t> bad_basis;  ///< index of first basis without exactly one Red
};

ColoringCheck verify_coloring(const OrthoGraph &g, const BasisList &bases, const Coloring &c);

/// Returns a parity certificate when the basis hypergraph admits one.
std::optional<ParityCertificate> parity_certificate(const OrthoGraph &g, const BasisList &bases);

/// Decides KS colorability by backtracking with unit propagation. Branches
/// on vertices by descending degree, Red first. Deterministic.
KSVerdict ks_solve(const OrthoGraph &g, const BasisList &bases);

inline constexpr std::size_t kCountLimit = 36;

/// Exact number of valid KS colorings. Throws TooLarge above kCountLimit vertices.
std::uint64_t count_colorings(const OrthoGraph &g, const BasisList &bases);

} // namespace kslab
