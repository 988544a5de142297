#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace kslab {

using Complex = std::complex<double>;

enum class Field { Real, Complex };

std::string_view to_string(Field f);
Field field_from_string(std::string_view s);

/// Norm below which a vector is treated as zero and a component as absent.
inline constexpr double kZeroTol = 1e-12;
/// Orthogonality / duplication tolerance on |<u,v>|.
inline constexpr double kOrthoTol = 1e-9;

/// A unit vector modulo global phase. The first component with modulus above
/// kZeroTol is real and strictly positive. Only `canonicalize` builds one.
class Ray {
  public:
    std::size_t dimension() const { return components_.size(); }
    Field field() const { return field_; }
    std::span<const Complex> components() const { return components_; }
    const Complex &operator[](std::size_t i) const { return components_[i]; }

    /// Squared modulus of component i.
    double weight(std::size_t i) const { return std::norm(components_[i]); }

    friend Ray canonicalize(std::span<const Complex> v, Field field);

  private:
    Ray(std::vector<Complex> c, Field f) : components_(std::move(c)), field_(f) {}

    std::vector<Complex> components_;
    Field field_ = Field::Real;
};

/// Normalizes `v` and removes its global phase.
/// Throws ZeroVector if |v| <= 1e-12, FieldMismatch if a real ray has an
/// imaginary part, InvariantViolation if v has fewer than 2 components.
Ray canonicalize(std::span<const Complex> v, Field field);
Ray canonicalize(std::initializer_list<Complex> v, Field field);
Ray real_ray(std::initializer_list<double> v);

/// <u, v> = sum_i conj(u_i) v_i
Complex inner(const Ray &u, const Ray &v);
Complex inner(std::span<const Complex> u, std::span<const Complex> v);

/// Ordered, deduplicated rays sharing one dimension and field.
class RaySet {
  public:
    /// Validates every invariant; throws InvariantViolation naming the
    /// first offending ray.
    RaySet(std::size_t dimension, Field field, std::vector<Ray> rays,
           std::vector<std::string> labels = {});

    /// Drops rays that duplicate an earlier one (modulo phase). Labels of
    /// merged rays are joined onto the surviving entry with '|'.
    static RaySet deduplicated(std::size_t dimension, Field field, std::vector<Ray> rays,
                               std::vector<std::string> labels);

    std::size_t dimension() const { return dimension_; }
    Field field() const { return field_; }
    std::size_t size() const { return rays_.size(); }
    const Ray &operator[](std::size_t i) const { return rays_[i]; }
    std::span<const Ray> rays() const { return rays_; }
    bool has_labels() const { return !labels_.empty(); }
    std::span<const std::string> labels() const { return labels_; }

    auto begin() const { return rays_.begin(); }
    auto end() const { return rays_.end(); }

  private:
    std::size_t dimension_;
    Field field_;
    std::vector<Ray> rays_;
    std::vector<std::string> labels_;
};

/// Free phase of the three-cubes construction, wrapped into [0, 2pi).
class CubePhase {
  public:
    explicit CubePhase(double phi = 0.0);
    double value() const { return phi_; }

  private:
    double phi_;
};

/// The 3 face, 6 edge and 4 body-diagonal rays of a cube in R^3.
RaySet cube13();

/// Peres' 24 rays in R^4.
RaySet peres24();

/// Three interlocking cubes: 33 rays in C^3. Labels carry cube membership
/// as "I:<name>|II:<name>|..." for merged rays.
RaySet three_cubes(CubePhase phi);

/// Bitmask per ray: bit 0 = cube I, bit 1 = cube II, bit 2 = cube III.
/// Parsed from the labels produced by three_cubes.
std::vector<unsigned> cube_membership(const RaySet &rs);

/// The KCBS pentagon: 5 rays in R^3 whose orthogonality graph is C5.
RaySet kcbs5();

/// Ray-set file I/O. The text form is a JSON object
/// {"dimension", "field", "rays": [[[re, im], ...], ...], "labels"?}.
RaySet parse_rayset(std::string_view text);
RaySet load_rayset(const std::string &path);
std::string rayset_to_json(const RaySet &rs, int indent = 2);

} // namespace kslab
