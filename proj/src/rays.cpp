#include "kslab/rays.hpp"

#include <array>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "kslab/errors.hpp"

namespace kslab {

std::string_view to_string(Field f) { return f == Field::Real ? "real" : "complex"; }

Field field_from_string(std::string_view s) {
    if (s == "real")
        return Field::Real;
    if (s == "complex")
        return Field::Complex;
    throw ParseError("unknown field '" + std::string(s) + "'");
}

Ray canonicalize(std::span<const Complex> v, Field field) {
    if (v.size() < 2)
        throw InvariantViolation(0, "a ray needs at least 2 components");
    if (field == Field::Real) {
        for (const auto &c : v)
            if (c.imag() != 0.0)
                throw FieldMismatch("real ray with nonzero imaginary part");
    }
    double norm2 = 0.0;
    for (const auto &c : v)
        norm2 += std::norm(c);
    const double norm = std::sqrt(norm2);
    if (!(norm > kZeroTol))
        throw ZeroVector();

    std::vector<Complex> out(v.begin(), v.end());
    for (auto &c : out)
        c /= norm;

    std::size_t lead = 0;
    while (lead < out.size() && std::abs(out[lead]) <= kZeroTol)
        ++lead;

    if (field == Field::Real) {
        if (out[lead].real() < 0.0)
            for (auto &c : out)
                c = Complex(c.real() == 0.0 ? 0.0 : -c.real(), 0.0);
    } else {
        const double mod = std::abs(out[lead]);
        const Complex unphase = std::conj(out[lead]) / mod;
        for (auto &c : out)
            c *= unphase;
        out[lead] = Complex(mod, 0.0);
    }
    return Ray(std::move(out), field);
}

Ray canonicalize(std::initializer_list<Complex> v, Field field) {
    return canonicalize(std::span<const Complex>(v.begin(), v.size()), field);
}

Ray real_ray(std::initializer_list<double> v) {
    std::vector<Complex> c(v.begin(), v.end());
    return canonicalize(c, Field::Real);
}

Complex inner(std::span<const Complex> u, std::span<const Complex> v) {
    Complex s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        s += std::conj(u[i]) * v[i];
    return s;
}

Complex inner(const Ray &u, const Ray &v) { return inner(u.components(), v.components()); }

RaySet::RaySet(std::size_t dimension, Field field, std::vector<Ray> rays,
               std::vector<std::string> labels)
    : dimension_(dimension), field_(field), rays_(std::move(rays)), labels_(std::move(labels)) {
    if (dimension_ < 2)
        throw InvariantViolation(0, "dimension must be at least 2");
    if (!labels_.empty() && labels_.size() != rays_.size())
        throw InvariantViolation(std::min(labels_.size(), rays_.size()),
                                 "label count does not match ray count");
    for (std::size_t i = 0; i < rays_.size(); ++i) {
        if (rays_[i].dimension() != dimension_)
            throw InvariantViolation(i, "dimension mismatch");
        if (rays_[i].field() != field_)
            throw InvariantViolation(i, "field mismatch");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(inner(rays_[j], rays_[i])) > 1.0 - kOrthoTol)
                throw InvariantViolation(i, "duplicates ray " + std::to_string(j));
    }
}

RaySet RaySet::deduplicated(std::size_t dimension, Field field, std::vector<Ray> rays,
                            std::vector<std::string> labels) {
    const bool labelled = !labels.empty();
    std::vector<Ray> kept;
    std::vector<std::string> kept_labels;
    for (std::size_t i = 0; i < rays.size(); ++i) {
        bool merged = false;
        for (std::size_t j = 0; j < kept.size(); ++j) {
            if (std::abs(inner(kept[j], rays[i])) > 1.0 - kOrthoTol) {
                if (labelled)
                    kept_labels[j] += "|" + labels[i];
                merged = true;
                break;
            }
        }
        if (!merged) {
            kept.push_back(rays[i]);
            if (labelled)
                kept_labels.push_back(labels[i]);
        }
    }
    return RaySet(dimension, field, std::move(kept), std::move(kept_labels));
}

CubePhase::CubePhase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi_ = std::fmod(phi, two_pi);
    if (phi_ < 0.0)
        phi_ += two_pi;
    if (phi_ >= two_pi)
        phi_ = 0.0;
}

RaySet cube13() {
    const double s2 = 1.0 / std::sqrt(2.0);
    const double s3 = 1.0 / std::sqrt(3.0);
    std::vector<Ray> rays;
    std::vector<std::string> labels;
    auto add = [&](std::initializer_list<double> v, std::string label) {
        rays.push_back(real_ray(v));
        labels.push_back(std::move(label));
    };
    add({1, 0, 0}, "face:x");
    add({0, 1, 0}, "face:y");
    add({0, 0, 1}, "face:z");
    add({0, s2, s2}, "edge:yz+");
    add({0, s2, -s2}, "edge:yz-");
    add({s2, 0, s2}, "edge:xz+");
    add({s2, 0, -s2}, "edge:xz-");
    add({s2, s2, 0}, "edge:xy+");
    add({s2, -s2, 0}, "edge:xy-");
    add({s3, s3, s3}, "diag:+++");
    add({s3, s3, -s3}, "diag:++-");
    add({s3, -s3, s3}, "diag:+-+");
    add({s3, -s3, -s3}, "diag:+--");
    return RaySet(3, Field::Real, std::move(rays), std::move(labels));
}

RaySet peres24() {
    std::vector<Ray> rays;
    std::vector<std::string> labels;
    for (int i = 0; i < 4; ++i) {
        std::vector<Complex> v(4, 0.0);
        v[i] = 1.0;
        rays.push_back(canonicalize(v, Field::Real));
        labels.push_back("axis:" + std::to_string(i));
    }
    for (int i = 0; i < 4; ++i)
        for (int j = i + 1; j < 4; ++j)
            for (int sign : {1, -1}) {
                std::vector<Complex> v(4, 0.0);
                v[i] = 1.0;
                v[j] = sign;
                rays.push_back(canonicalize(v, Field::Real));
                labels.push_back("pair:" + std::to_string(i) + std::to_string(j) +
                                 (sign > 0 ? "+" : "-"));
            }
    for (int mask = 0; mask < 8; ++mask) {
        std::vector<Complex> v{1.0, (mask & 4) ? -1.0 : 1.0, (mask & 2) ? -1.0 : 1.0,
                               (mask & 1) ? -1.0 : 1.0};
        rays.push_back(canonicalize(v, Field::Real));
        std::string label = "quad:+";
        for (int b : {4, 2, 1})
            label += (mask & b) ? '-' : '+';
        labels.push_back(label);
    }
    return RaySet(4, Field::Real, std::move(rays), std::move(labels));
}

namespace {

using Mat3 = std::array<std::array<Complex, 3>, 3>;

std::vector<Complex> apply(const Mat3 &m, std::span<const Complex> v) {
    std::vector<Complex> out(3, 0.0);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            out[r] += m[r][c] * v[c];
    return out;
}

} // namespace

RaySet three_cubes(CubePhase phase) {
    const double s2 = 1.0 / std::sqrt(2.0);
    const Complex ph = std::polar(1.0, phase.value());

    // Rows are the three rays shared by all cubes, so this sends them to e1, e2, e3.
    const Mat3 to_common{{{0.0, s2, s2}, {0.0, s2, -s2}, {1.0, 0.0, 0.0}}};
    const Mat3 to_second{{{ph, 0.0, 0.0}, {0.0, 0.0, -1.0}, {0.0, 1.0, 0.0}}};
    const Mat3 to_third{{{0.0, 0.0, -1.0}, {0.0, std::conj(ph), 0.0}, {1.0, 0.0, 0.0}}};

    const RaySet base = cube13();
    std::vector<Ray> first;
    for (const auto &r : base)
        first.push_back(canonicalize(apply(to_common, r.components()), Field::Complex));

    std::vector<Ray> rays;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < first.size(); ++i) {
        rays.push_back(first[i]);
        labels.push_back("I:" + base.labels()[i]);
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
        rays.push_back(canonicalize(apply(to_second, first[i].components()), Field::Complex));
        labels.push_back("II:" + base.labels()[i]);
    }
    for (std::size_t i = 0; i < first.size(); ++i) {
        rays.push_back(canonicalize(apply(to_third, first[i].components()), Field::Complex));
        labels.push_back("III:" + base.labels()[i]);
    }
    return RaySet::deduplicated(3, Field::Complex, std::move(rays), std::move(labels));
}

std::vector<unsigned> cube_membership(const RaySet &rs) {
    std::vector<unsigned> out;
    out.reserve(rs.size());
    for (const auto &label : rs.labels()) {
        unsigned mask = 0;
        std::size_t start = 0;
        while (start <= label.size()) {
            std::size_t bar = label.find('|', start);
            if (bar == std::string::npos)
                bar = label.size();
            const std::string part = label.substr(start, bar - start);
            const std::string cube = part.substr(0, part.find(':'));
            if (cube == "I")
                mask |= 1u;
            else if (cube == "II")
                mask |= 2u;
            else if (cube == "III")
                mask |= 4u;
            start = bar + 1;
        }
        out.push_back(mask);
    }
    return out;
}

RaySet kcbs5() {
    const double c = std::cos(std::numbers::pi / 5.0);
    const double cos_t = std::sqrt(c / (1.0 + c));
    const double sin_t = std::sqrt(1.0 - cos_t * cos_t);
    std::vector<Ray> rays;
    std::vector<std::string> labels;
    for (int k = 0; k < 5; ++k) {
        const double a = 4.0 * std::numbers::pi * k / 5.0;
        rays.push_back(real_ray({sin_t * std::cos(a), sin_t * std::sin(a), cos_t}));
        labels.push_back("P" + std::to_string(k + 1));
    }
    return RaySet(3, Field::Real, std::move(rays), std::move(labels));
}

RaySet parse_rayset(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("ray-set file: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("dimension") || !doc.contains("field") ||
        !doc.contains("rays"))
        throw ParseError("ray-set file needs 'dimension', 'field' and 'rays'");

    std::size_t dimension = 0;
    Field field = Field::Real;
    std::vector<Ray> rays;
    std::vector<std::string> labels;
    try {
        const auto dim = doc.at("dimension").get<long long>();
        if (dim < 2)
            throw ParseError("dimension must be at least 2");
        dimension = static_cast<std::size_t>(dim);
        field = field_from_string(doc.at("field").get<std::string>());

        const auto &arr = doc.at("rays");
        if (!arr.is_array())
            throw ParseError("'rays' must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            const auto &jr = arr[i];
            if (!jr.is_array())
                throw ParseError("ray " + std::to_string(i) + " is not an array");
            if (jr.size() != dimension)
                throw InvariantViolation(i, "dimension mismatch");
            std::vector<Complex> v;
            for (const auto &pair : jr) {
                if (!pair.is_array() || pair.size() != 2)
                    throw ParseError("ray " + std::to_string(i) +
                                     ": components must be [re, im] pairs");
                v.emplace_back(pair[0].get<double>(), pair[1].get<double>());
            }
            try {
                rays.push_back(canonicalize(v, field));
            } catch (const ZeroVector &) {
                throw InvariantViolation(i, "zero vector");
            } catch (const FieldMismatch &) {
                throw InvariantViolation(i, "imaginary part in a real ray set");
            }
        }
        if (doc.contains("labels"))
            labels = doc.at("labels").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("ray-set file: ") + e.what());
    }
    return RaySet(dimension, field, std::move(rays), std::move(labels));
}

RaySet load_rayset(const std::string &path) {
    std::ifstream in(path);
    if (!in)
        throw ParseError("cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_rayset(buf.str());
}

std::string rayset_to_json(const RaySet &rs, int indent) {
    nlohmann::json doc;
    doc["dimension"] = rs.dimension();
    doc["field"] = std::string(to_string(rs.field()));
    auto rays = nlohmann::json::array();
    for (const auto &r : rs) {
        auto jr = nlohmann::json::array();
        for (const auto &c : r.components())
            jr.push_back({c.real(), c.imag()});
        rays.push_back(std::move(jr));
    }
    doc["rays"] = std::move(rays);
    if (rs.has_labels())
        doc["labels"] = std::vector<std::string>(rs.labels().begin(), rs.labels().end());
    return doc.dump(indent);
}

} // namespace kslab
